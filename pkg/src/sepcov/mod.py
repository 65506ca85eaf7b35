"""Covering and separation by length-modulo languages.

Everything reduces to unary automata: relabel every transition with one
letter ``$`` and decide the abelian (equivalently, group) problem there.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .amt import amt_coverable
from .automata import (ExtNfa, Nfa, as_ext, intersect_emptiness, make_alphabet, trim,
                       union_alphabet)
from .dyck import build_inverse_completion
from .gr import SIGNED_WORD, CoverVerdict, gr_coverable

UNARY = "$"


def unary_project(a: Nfa) -> Nfa:
    if a.alphabet == (UNARY,):
        return a
    return Nfa((UNARY,), a.state_count, a.initial, a.final,
               frozenset((s, 0, d) for s, _, d in a.transitions))


def mod_coverable(inputs: Sequence[Nfa], budget: int | None = None) -> CoverVerdict:
    """Decided on the projections by the abelian route, checked against the group route."""
    projected = [unary_project(a) for a in inputs]
    verdict = amt_coverable(projected, budget=budget)
    check = gr_coverable(projected, minimize=True)
    if verdict.coverable != check.coverable:
        raise AssertionError("abelian and group routes disagree on unary projections")
    return verdict


def unary_eps_relation(t: ExtNfa) -> frozenset[tuple[int, int]]:
    """Epsilon pairs of a unary inverse completion via the bounded layered graph.

    Vertices are ``(state, height)`` with ``|height| <= |Q|**2``; the letter
    raises the height by one and its inverse lowers it.  ``(q, r)`` is a pair
    iff ``(q, 0)`` reaches ``(r, 0)``.
    """
    if len(t.alphabet) != 1:
        raise ValueError("unary automaton expected")
    n = t.state_count
    bound = n * n
    up: list[list[int]] = [[] for _ in range(n)]
    down: list[list[int]] = [[] for _ in range(n)]
    for s, c, d in t.signed:
        (down if c & 1 else up)[s].append(d)
    pairs = set()
    for q in range(n):
        seen = {(q, 0)}
        queue = deque(seen)
        while queue:
            s, h = queue.popleft()
            if h == 0:
                pairs.add((q, s))
            steps = [(d, h + 1) for d in up[s]] if h < bound else []
            if h > -bound:
                steps += [(d, h - 1) for d in down[s]]
            for nxt in steps:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return frozenset(pairs)


def unary_extended(a: Nfa) -> ExtNfa:
    t = build_inverse_completion(unary_project(a))
    return t.with_eps(unary_eps_relation(t))


def mod_separable(l1: Nfa, l2: Nfa) -> CoverVerdict:
    machines = [unary_extended(trim(a)) for a in (l1, l2)]
    witness = intersect_emptiness(machines)
    if witness is None:
        return CoverVerdict(True, alphabet=(UNARY,))
    return CoverVerdict(False, SIGNED_WORD, witness, alphabet=(UNARY,))


def residues_mod(a: Nfa, q: int) -> frozenset[int]:
    """``{|w| mod q : w in L(a)}``."""
    if q < 1:
        raise ValueError("modulus must be positive")
    start = [(s, 0) for s in a.initial]
    seen = set(start)
    stack = list(start)
    adj = a.adjacency
    while stack:
        s, r = stack.pop()
        for d in adj[s]:
            nxt = (d, (r + 1) % q)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(r for s, r in seen if s in a.final)


@dataclass(frozen=True)
class ModSeparator:
    """The words whose length is congruent to one of ``residues`` modulo ``q``."""

    q: int
    residues: frozenset[int]

    def contains_length(self, length: int) -> bool:
        return length % self.q in self.residues

    def to_nfa(self, alphabet: Sequence[str]) -> Nfa:
        alphabet = make_alphabet(alphabet)
        transitions = {(i, x, (i + 1) % self.q) for i in range(self.q) for x in range(len(alphabet))}
        return Nfa(alphabet, self.q, frozenset({0}), self.residues, frozenset(transitions))

    def complement(self) -> "ModSeparator":
        return ModSeparator(self.q, frozenset(range(self.q)) - self.residues)

    def describe(self) -> str:
        if not self.residues:
            return "(empty)"
        return " | ".join(f"|w| = {r} (mod {self.q})" for r in sorted(self.residues))

    def to_doc(self) -> dict:
        return {"q": self.q, "residues": sorted(self.residues), "description": self.describe()}


def default_qmax(l1: Nfa, l2: Nfa) -> int:
    return max(1, l1.state_count * l2.state_count)


def synth_mod_separator(l1: Nfa, l2: Nfa, q_max: int | None = None) -> ModSeparator | None:
    """First modulus with disjoint length residues; ``None`` is inconclusive."""
    if q_max is None:
        q_max = default_qmax(l1, l2)
    if q_max < 1:
        raise ValueError("q_max must be positive")
    for q in range(1, q_max + 1):
        r1 = residues_mod(l1, q)
        if not r1 & residues_mod(l2, q):
            sep = ModSeparator(q, r1)
            if not verify_separator(sep, l1, l2):
                raise AssertionError("synthesized separator failed verification")
            return sep
    return None


def verify_separator(sep: ModSeparator, l1: Nfa, l2: Nfa) -> bool:
    """``L(l1)`` inside the separator and ``L(l2)`` outside, by product emptiness."""
    alphabet = union_alphabet(l1.alphabet, l2.alphabet)
    a1, a2 = l1.with_alphabet(alphabet), l2.with_alphabet(alphabet)
    inside = as_ext(sep.to_nfa(alphabet))
    outside = as_ext(sep.complement().to_nfa(alphabet))
    return (intersect_emptiness([as_ext(a1), outside]) is None
            and intersect_emptiness([as_ext(a2), inside]) is None)
