"""Independent group-covering oracle through the transition monoid.

Works entirely with relations over the disjoint union of the input state
sets.  It shares no code with the automata-based decider and is meant for
cross-checking small instances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .automata import Nfa, union_alphabet
from .errors import CapacityError

MONOID_BUDGET = 4096
FAMILY_BUDGET = 20000

Relation = tuple[int, ...]  # row bitmasks


def compose(r: Relation, s: Relation) -> Relation:
    out = []
    for row in r:
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc |= s[j]
            row >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def identity_relation(n: int) -> Relation:
    return tuple(1 << i for i in range(n))


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass
class TransitionMonoid:
    """The submonoid generated by the letter relations.

    ``elements[0]`` is the identity; ``letter_map[x]`` is the index of the
    relation of letter ``x``; ``accepting[i]`` holds the indices of elements
    meeting ``initial_i x final_i``.
    """

    size: int
    elements: list[Relation]
    letter_map: list[int]
    accepting: list[frozenset[int]]
    alphabet: tuple[str, ...]
    index: dict[Relation, int] = field(repr=False)
    _table: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        k = self._table.get(key)
        if k is None:
            k = self.index[compose(self.elements[i], self.elements[j])]
            self._table[key] = k
        return k

    def of_word(self, letters: Sequence[int]) -> int:
        e = 0
        for x in letters:
            e = self.mul(e, self.letter_map[x])
        return e


def transition_monoid(inputs: Sequence[Nfa], budget: int = MONOID_BUDGET) -> TransitionMonoid:
    alphabet = union_alphabet(*(a.alphabet for a in inputs))
    offsets, n = [], 0
    for a in inputs:
        offsets.append(n)
        n += a.state_count
    rows = [[0] * n for _ in alphabet]
    for a, off in zip(inputs, offsets):
        for s, x, d in a.transitions:
            rows[alphabet.index(a.alphabet[x])][off + s] |= 1 << (off + d)
    letters = [tuple(r) for r in rows]
    one = identity_relation(n)
    elements = [one]
    index = {one: 0}
    queue = deque([one])
    while queue:
        e = queue.popleft()
        for rel in letters:
            p = compose(e, rel)
            if p not in index:
                index[p] = len(elements)
                elements.append(p)
                if len(elements) > budget:
                    raise CapacityError(f"oracle capacity: monoid exceeds {budget} elements")
                queue.append(p)
    letter_map = [index[rel] for rel in letters]
    accepting = []
    for a, off in zip(inputs, offsets):
        init = [off + q for q in a.initial]
        fin = sum(1 << (off + q) for q in a.final)
        accepting.append(frozenset(i for i, e in enumerate(elements)
                                   if any(e[q] & fin for q in init)))
    return TransitionMonoid(n, elements, letter_map, accepting, alphabet, index)


def weak_inverse_set(m: TransitionMonoid, s: int) -> frozenset[int]:
    return frozenset(t for t in range(len(m.elements)) if m.mul(m.mul(t, s), t) == t)


def gamma(m: TransitionMonoid) -> dict[int, frozenset[int]]:
    """Images of the signed letters, keyed by letter code ``2 * x + negative``."""
    out = {}
    for x, e in enumerate(m.letter_map):
        out[2 * x] = frozenset({e})
        out[2 * x + 1] = weak_inverse_set(m, e)
    return out


def s_epsilon_fixpoint(m: TransitionMonoid, g: dict[int, frozenset[int]]) -> frozenset[int]:
    """Least set holding the identity, closed under products and under
    ``g(x) . S . g(x^-1)`` for every signed letter ``x``."""
    S = {0}
    queue = deque([0])

    def add(e):
        if e not in S:
            S.add(e)
            queue.append(e)

    while queue:
        e = queue.popleft()
        for f in list(S):
            add(m.mul(e, f))
            add(m.mul(f, e))
        for code, left in g.items():
            right = g[code ^ 1]
            for a in left:
                ae = m.mul(a, e)
                for b in right:
                    add(m.mul(ae, b))
    return frozenset(S)


def _set_product(m: TransitionMonoid, x: int, y: int) -> int:
    out = 0
    ys = list(_bits(y))
    for i in _bits(x):
        for j in ys:
            out |= 1 << m.mul(i, j)
    return out


def _to_mask(elems) -> int:
    return sum(1 << e for e in elems)


def igr_closure(m: TransitionMonoid, g: dict[int, frozenset[int]], s_eps: frozenset[int],
                budget: int = FAMILY_BUDGET, stop=None) -> set[int]:
    """Least family closed under set products containing ``s_eps`` and each
    ``g(b)``; members are bitmasks over element indices.  ``stop(member)``
    may end the search early."""
    gens = sorted({_to_mask(s_eps)} | {_to_mask(v) for v in g.values()})
    family = set()
    queue = deque()
    for G in gens:
        if G not in family:
            family.add(G)
            queue.append(G)
    while queue:
        X = queue.popleft()
        if stop is not None and stop(X):
            return family
        for G in gens:
            Y = _set_product(m, X, G)
            if Y not in family:
                family.add(Y)
                if len(family) > budget:
                    raise CapacityError(f"oracle capacity: family exceeds {budget} members")
                queue.append(Y)
    return family


def ash_gr_coverable(inputs: Sequence[Nfa], monoid_budget: int = MONOID_BUDGET,
                     family_budget: int = FAMILY_BUDGET) -> bool:
    m = transition_monoid(inputs, monoid_budget)
    if any(not acc for acc in m.accepting):
        return True
    g = gamma(m)
    s_eps = s_epsilon_fixpoint(m, g)
    targets = [_to_mask(acc) for acc in m.accepting]
    hit = []

    def meets_all(X):
        if all(X & t for t in targets):
            hit.append(X)
            return True
        return False

    igr_closure(m, g, s_eps, family_budget, meets_all)
    return not hit
