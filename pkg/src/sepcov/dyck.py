"""Inverse completion and epsilon saturation over the signed alphabet.

The epsilon edges of the extended automaton are the pairs ``(q, r)`` joined
by a path whose label freely reduces to the empty word.  They are computed
as a CFL-reachability closure for the two-sided Dyck grammar
``S -> eps | S S | x S x^-1``.  The closure contains every such pair because
the set of trivial words is generated by that grammar, and it contains no
other pair because each rule only glues together paths whose labels are
again trivial.  Running the closure on its own output adds nothing, since an
epsilon edge already stands for a trivial subword.

``cyk_eps_oracle`` decides the same relation by a separate route: a naive
fixpoint over the Bar-Hillel product of a Chomsky-normal-form grammar with
the automaton.  Tests compare the two.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .automata import INVERSE, ORIGINAL, ExtNfa, Nfa, SignedWord, scc_decompose


def free_reduce(w: SignedWord) -> SignedWord:
    stack: list[int] = []
    for code in w.codes:
        if stack and stack[-1] == code ^ 1:
            stack.pop()
        else:
            stack.append(code)
    return SignedWord(tuple(stack))


def is_trivial(w: SignedWord) -> bool:
    return not free_reduce(w).codes


def build_inverse_completion(a: Nfa) -> ExtNfa:
    """Add ``(r, x^-1, q)`` for every ``(q, x, r)`` inside one strongly connected component."""
    scc = scc_decompose(a)
    signed = {(s, 2 * x, d): ORIGINAL for s, x, d in a.transitions}
    for s, x, d in a.transitions:
        if scc.same(s, d):
            signed.setdefault((d, 2 * x + 1, s), INVERSE)
    return ExtNfa(a.alphabet, a.state_count, a.initial, a.final, signed)


def saturate_epsilon(t: ExtNfa) -> frozenset[tuple[int, int]]:
    """Least relation containing ``t.eps``, closed under composition and
    under ``q -x-> s R s' -x^-1-> r  =>  q R r``."""
    return frozenset(_saturate(t))


def _saturate(t: ExtNfa) -> dict[tuple[int, int], tuple]:
    """The saturated relation, each pair mapped to the rule that added it:
    ``("base",)``, ``("compose", m)`` or ``("bracket", p, code, s, s2, r)``
    for the edges ``p -code-> s`` and ``s2 -code^-1-> r``."""
    n = t.state_count
    into: dict[tuple[int, int], list[int]] = {}  # (dst, code) -> sources
    out: dict[tuple[int, int], list[int]] = {}  # (src, code) -> targets
    codes_into: list[set[int]] = [set() for _ in range(n)]
    for s, c, d in sorted(t.signed):
        into.setdefault((d, c), []).append(s)
        out.setdefault((s, c), []).append(d)
        codes_into[d].add(c)

    fwd: list[set[int]] = [set() for _ in range(n)]
    bwd: list[set[int]] = [set() for _ in range(n)]
    reason: dict[tuple[int, int], tuple] = {}
    queue: deque[tuple[int, int]] = deque()

    def add(q: int, r: int, why: tuple) -> None:
        if r not in fwd[q]:
            fwd[q].add(r)
            bwd[r].add(q)
            reason[(q, r)] = why
            queue.append((q, r))

    for q in range(n):
        add(q, q, ("base",))
    for q, r in sorted(t.eps):
        add(q, r, ("base",))

    while queue:
        q, r = queue.popleft()
        for p in sorted(bwd[q]):
            add(p, r, ("compose", q))
        for s in sorted(fwd[r]):
            add(q, s, ("compose", r))
        for c in sorted(codes_into[q]):
            targets = out.get((r, c ^ 1))
            if not targets:
                continue
            for p in into[(q, c)]:
                for s in targets:
                    add(p, s, ("bracket", p, c, q, r, s))
    return reason


def eps_witness(t: ExtNfa, q: int, r: int) -> SignedWord | None:
    """A word labelling a path of ``t`` from ``q`` to ``r`` that reduces to
    the empty word, or ``None``.  Epsilon edges of ``t`` other than the
    identity are treated as given and contribute the empty word."""
    reason = _saturate(t)
    if (q, r) not in reason:
        return None
    codes: list[int] = []
    stack = [(q, r)]
    while stack:
        item = stack.pop()
        if isinstance(item, int):
            codes.append(item)
            continue
        why = reason[item]
        if why[0] == "base":
            continue
        if why[0] == "compose":
            m = why[1]
            stack.append((m, item[1]))
            stack.append((item[0], m))
        else:
            _, p, c, s, s2, dst = why
            stack.append(c ^ 1)
            stack.append((s, s2))
            stack.append(c)
    return SignedWord(tuple(codes))


def build_extended(a: Nfa) -> ExtNfa:
    t = build_inverse_completion(a)
    return t.with_eps(saturate_epsilon(t))


def _bar_hillel_s(t: ExtNfa) -> list[list[bool]]:
    """Naive fixpoint for the grammar

        S -> eps | S S | X_x Z_x        Z_x -> S Y_x
        X_x -> x                        Y_x -> x^-1

    over the triples of the product with ``t``; epsilon edges of ``t`` are
    read as the empty word.  Returns the ``S`` table.
    """
    n = t.state_count
    codes = sorted({c for _, c, _ in t.signed})
    term = {c: [[False] * n for _ in range(n)] for c in codes}
    for s, c, d in t.signed:
        term[c][s][d] = True
    S = [[False] * n for _ in range(n)]
    for p in range(n):
        S[p][p] = True
    for p, r in t.eps:
        S[p][r] = True
    Z = {c: [[False] * n for _ in range(n)] for c in codes}
    changed = True
    while changed:
        changed = False
        for c in codes:
            inv = c ^ 1
            if inv not in term:
                continue
            Y = term[inv]
            Zc = Z[c]
            for p in range(n):
                for r in range(n):
                    if not Zc[p][r] and any(S[p][m] and Y[m][r] for m in range(n)):
                        Zc[p][r] = True
                        changed = True
        for p in range(n):
            for r in range(n):
                if S[p][r]:
                    continue
                if any(S[p][m] and S[m][r] for m in range(n)):
                    S[p][r] = True
                    changed = True
                    continue
                for c in codes:
                    X = term[c]
                    if any(X[p][m] and Z[c][m][r] for m in range(n)):
                        S[p][r] = True
                        changed = True
                        break
    return S


def cyk_eps_oracle(t: ExtNfa, q: int, r: int) -> bool:
    return _bar_hillel_s(t)[q][r]


def cyk_eps_relation(t: ExtNfa) -> frozenset[tuple[int, int]]:
    S = _bar_hillel_s(t)
    n = t.state_count
    return frozenset((p, r) for p in range(n) for r in range(n) if S[p][r])


def grammar_derives(w: SignedWord, alphabet: Iterable[str] = ()) -> bool:
    """CYK-style membership of ``w`` in the trivial-word grammar."""
    alphabet = tuple(alphabet)
    size = max([len(alphabet)] + [(c >> 1) + 1 for c in w.codes])
    names = alphabet if len(alphabet) == size else tuple(f"l{i:03d}" for i in range(size))
    signed = {(i, c, i + 1): ORIGINAL if c % 2 == 0 else INVERSE for i, c in enumerate(w.codes)}
    path = ExtNfa(names, len(w) + 1, {0}, {len(w)}, signed)
    return cyk_eps_oracle(path, 0, len(w))
