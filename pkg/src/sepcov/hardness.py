"""Reductions to the covering problems, with independent ground truth.

* monotone circuits to group separation of ``{eps}`` from one automaton;
* 3-CNF formulas to abelian-group separation of two finite languages;
* 3-CNF formulas to length-modulo covering of unary languages.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Sequence

from .automata import Nfa, make_alphabet, trim
from .errors import NfaFormatError

AND = "and"
OR = "or"
INPUT = "input"


# --------------------------------------------------------------------------
# Monotone circuits


@dataclass(frozen=True)
class Vertex:
    kind: str  # "input", "and", "or"
    value: bool = False
    left: int = -1
    right: int = -1


@dataclass(frozen=True)
class MonotoneCircuit:
    vertices: tuple[Vertex, ...]
    output: int

    def __post_init__(self):
        n = len(self.vertices)
        if not 0 <= self.output < n:
            raise ValueError("output vertex out of range")
        used = set()
        for i, v in enumerate(self.vertices):
            if v.kind == INPUT:
                continue
            if v.kind not in (AND, OR):
                raise ValueError(f"vertex {i}: unknown kind {v.kind!r}")
            for j in (v.left, v.right):
                if not 0 <= j < n:
                    raise ValueError(f"vertex {i}: operand {j} out of range")
            used.update((v.left, v.right))
        sinks = [i for i in range(n) if i not in used]
        if sinks != [self.output]:
            raise ValueError(f"the output must be the only vertex without successors, got {sinks}")

    def to_doc(self) -> dict:
        verts = []
        for v in self.vertices:
            if v.kind == INPUT:
                verts.append({"input": int(v.value)})
            else:
                verts.append({v.kind: [v.left, v.right]})
        return {"vertices": verts, "output": self.output}

    @classmethod
    def from_doc(cls, doc: dict) -> "MonotoneCircuit":
        try:
            verts = []
            for item in doc["vertices"]:
                (kind, arg), = item.items()
                if kind == INPUT:
                    verts.append(Vertex(INPUT, bool(arg)))
                else:
                    verts.append(Vertex(kind, left=int(arg[0]), right=int(arg[1])))
            return cls(tuple(verts), int(doc["output"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise NfaFormatError(f"bad circuit document: {exc}") from None


def _gate(kind, left, right):
    return Vertex(kind, left=left, right=right)


def sample_circuit() -> MonotoneCircuit:
    """The four-input example circuit: inputs w=0, x=1, y=0, z=1."""
    w, x, y, z = range(4)
    v = [Vertex(INPUT, False), Vertex(INPUT, True), Vertex(INPUT, False), Vertex(INPUT, True)]
    v.append(_gate(OR, w, x))  # 4
    v.append(_gate(OR, x, y))  # 5
    v.append(_gate(AND, y, z))  # 6
    v.append(_gate(AND, w, 4))  # 7
    v.append(_gate(AND, 5, 6))  # 8
    v.append(_gate(OR, 6, z))  # 9
    v.append(_gate(OR, 7, 8))  # 10
    v.append(_gate(OR, 8, 9))  # 11
    v.append(_gate(AND, 10, 11))  # 12
    return MonotoneCircuit(tuple(v), 12)


def eval_monotone_circuit(c: MonotoneCircuit) -> bool:
    """Evaluation in topological order (Kahn); raises on a cycle."""
    n = len(c.vertices)
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, v in enumerate(c.vertices):
        if v.kind != INPUT:
            for j in (v.left, v.right):
                succ[j].append(i)
                indeg[i] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    value: dict[int, bool] = {}
    while ready:
        i = ready.pop()
        v = c.vertices[i]
        if v.kind == INPUT:
            value[i] = v.value
        elif v.kind == AND:
            value[i] = value[v.left] and value[v.right]
        else:
            value[i] = value[v.left] or value[v.right]
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    if len(value) != n:
        raise ValueError("circuit contains a cycle")
    return value[c.output]


def eval_recursive(c: MonotoneCircuit) -> bool:
    @lru_cache(maxsize=None)
    def val(i: int) -> bool:
        v = c.vertices[i]
        if v.kind == INPUT:
            return v.value
        if v.kind == AND:
            return val(v.left) and val(v.right)
        return val(v.left) or val(v.right)

    return val(c.output)


def random_circuit(rng: random.Random, max_vertices: int = 15) -> MonotoneCircuit:
    """A random circuit whose only sink is a gate."""
    inputs = rng.randint(2, min(5, (max_vertices + 1) // 2))
    target = rng.randint(2 * inputs - 1, max_vertices)
    verts = [Vertex(INPUT, rng.random() < 0.5) for _ in range(inputs)]
    unused = list(range(inputs))

    def add(a, b):
        verts.append(_gate(rng.choice((AND, OR)), a, b))
        for x in (a, b):
            if x in unused:
                unused.remove(x)
        unused.append(len(verts) - 1)

    while len(verts) + len(unused) - 1 < target:
        a = rng.choice(unused)
        b = rng.choice([i for i in range(len(verts)) if i != a])
        add(a, b)
    while len(unused) > 1:
        a, b = rng.sample(unused, 2)
        add(a, b)
    return MonotoneCircuit(tuple(verts), unused[0])


def unfold_circuit(c: MonotoneCircuit, limit: int = 4096) -> MonotoneCircuit:
    """Equivalent circuit in which every vertex feeds at most one gate.

    Shared subcircuits are copied, so the size may grow exponentially;
    ``limit`` bounds the number of vertices.
    """
    verts: list[Vertex] = []

    def copy(i: int) -> int:
        v = c.vertices[i]
        if v.kind == INPUT:
            verts.append(v)
        else:
            left, right = copy(v.left), copy(v.right)
            verts.append(_gate(v.kind, left, right))
        if len(verts) > limit:
            raise ValueError(f"unfolded circuit exceeds {limit} vertices")
        return len(verts) - 1

    out = copy(c.output)
    return MonotoneCircuit(tuple(verts), out)


def circuit_letter(i: int, n: int) -> str:
    return f"a{i + 1:0{len(str(n))}d}"


def gen_gr_from_circuit(c: MonotoneCircuit) -> tuple[Nfa, Nfa]:
    """``({eps}, A_C)``: the circuit is true iff they are not group-separable.

    Vertex ``i`` owns letter ``a_i`` and states ``q_i = 3i``, ``r_i = 3i + 1``,
    ``s_i = 3i + 2``.
    """
    n = len(c.vertices)
    letters = [circuit_letter(i, n) for i in range(n)]
    q = lambda i: 3 * i  # noqa: E731
    r = lambda i: 3 * i + 1  # noqa: E731
    s = lambda i: 3 * i + 2  # noqa: E731
    trans = []
    for i, v in enumerate(c.vertices):
        a = letters[i]
        if v.kind == INPUT:
            trans.append((q(i), a, r(i)))
            if v.value:
                trans.append((r(i), a, r(i)))
        elif v.kind == OR:
            j, k = v.left, v.right
            trans += [(q(i), a, q(j)), (q(i), a, q(k)), (r(j), a, r(i)), (r(k), a, r(i)),
                      (r(i), a, r(i))]
        else:
            j, k = v.left, v.right
            trans += [(q(i), a, q(j)), (r(j), a, s(i)), (s(i), a, q(k)), (r(k), a, r(i)),
                      (s(i), a, s(i))]
    circuit_nfa = Nfa.build(letters, 3 * n, [q(c.output)], [r(c.output)], trans)
    empty_word = Nfa.build(letters, 1, [0], [0], [])
    return empty_word, circuit_nfa


# --------------------------------------------------------------------------
# 3-CNF formulas


@dataclass(frozen=True)
class Cnf3Formula:
    """Literals are ``+(i + 1)`` for variable ``i`` and ``-(i + 1)`` for its negation."""

    var_count: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("every clause needs exactly three literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ValueError(f"literal {lit} outside 1..{self.var_count}")

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in cl) for cl in self.clauses)

    def to_doc(self) -> dict:
        return {"vars": self.var_count, "clauses": [list(c) for c in self.clauses]}

    @classmethod
    def from_doc(cls, doc: dict) -> "Cnf3Formula":
        try:
            return cls(int(doc["vars"]), tuple(tuple(int(x) for x in c) for c in doc["clauses"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise NfaFormatError(f"bad formula document: {exc}") from None

    @classmethod
    def parse(cls, text: str) -> "Cnf3Formula":
        """``"n: 1 2 -3, -1 2 2"`` or a JSON document."""
        text = text.strip()
        if text.startswith("{"):
            return cls.from_doc(json.loads(text))
        head, _, body = text.partition(":")
        clauses = tuple(tuple(int(x) for x in part.split()) for part in body.split(",") if part.strip())
        return cls(int(head), clauses)


def random_formula(rng: random.Random, max_vars: int, max_clauses: int,
                   min_vars: int = 1, min_clauses: int = 1) -> Cnf3Formula:
    n = rng.randint(min_vars, max_vars)
    k = rng.randint(min_clauses, max_clauses)
    clauses = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3))
                    for _ in range(k))
    return Cnf3Formula(n, clauses)


def brute_sat3(f: Cnf3Formula) -> bool:
    if f.var_count > 20:
        raise ValueError("brute force is limited to 20 variables")
    return any(f.satisfied_by(bits) for bits in iproduct((False, True), repeat=f.var_count))


def dpll_sat3(f: Cnf3Formula) -> bool:
    def solve(clauses: list[frozenset[int]]) -> bool:
        while True:
            if not clauses:
                return True
            if any(not c for c in clauses):
                return False
            unit = next((c for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            (lit,) = unit
            clauses = _assign(clauses, lit)
        lit = next(iter(min(clauses, key=len)))
        return solve(_assign(clauses, lit)) or solve(_assign(clauses, -lit))

    return solve([frozenset(c) for c in f.clauses])


def _assign(clauses, lit):
    return [c - {-lit} for c in clauses if lit not in c]


def literal_letter(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"~x{-lit}"


class _Builder:
    """Small NFA builder with epsilon edges, eliminated on ``build``."""

    def __init__(self):
        self.count = 0
        self.edges: list[tuple[int, str | None, int]] = []

    def state(self) -> int:
        self.count += 1
        return self.count - 1

    def edge(self, s, letter, d):
        self.edges.append((s, letter, d))

    def power_block(self, start: int, end: int, letters: Sequence[str], k: int):
        """``{l^p | l in letters, 1 <= p <= k}`` from ``start`` to ``end``."""
        for letter in letters:
            prev = start
            for p in range(1, k + 1):
                self.edge(prev, letter, end)
                if p < k:
                    nxt = self.state()
                    self.edge(prev, letter, nxt)
                    prev = nxt

    def build(self, alphabet, initial, final) -> Nfa:
        eps: list[set[int]] = [{q} for q in range(self.count)]
        for s, letter, d in self.edges:
            if letter is None:
                eps[s].add(d)
        changed = True
        while changed:
            changed = False
            for q in range(self.count):
                grown = set().union(*(eps[r] for r in eps[q]))
                if grown != eps[q]:
                    eps[q] = grown
                    changed = True
        trans = [(q, letter, d) for q in range(self.count) for s, letter, d in self.edges
                 if letter is not None and s in eps[q]]
        fin = [q for q in range(self.count) if eps[q] & set(final)]
        return trim(Nfa.build(alphabet, self.count, initial, fin, trans))


def gen_amt_from_3sat(f: Cnf3Formula) -> tuple[Nfa, Nfa]:
    """``L1 = H_1 ... H_n`` and ``L2 = T_1 ... T_k (eps + H_1) ... (eps + H_n)``
    where ``H_i`` holds the powers ``x_i^p`` and ``~x_i^p`` for ``1 <= p <= k``
    and ``T_j`` holds the three literals of clause ``j``."""
    n, k = f.var_count, len(f.clauses)
    alphabet = make_alphabet(literal_letter(s * (i + 1)) for i in range(n) for s in (1, -1))
    pair = lambda i: (literal_letter(i + 1), literal_letter(-(i + 1)))  # noqa: E731

    b1 = _Builder()
    cur = start1 = b1.state()
    for i in range(n):
        nxt = b1.state()
        b1.power_block(cur, nxt, pair(i), k)
        cur = nxt
    l1 = b1.build(alphabet, [start1], [cur])

    b2 = _Builder()
    cur = start2 = b2.state()
    for clause in f.clauses:
        nxt = b2.state()
        for lit in sorted(set(clause)):
            b2.edge(cur, literal_letter(lit), nxt)
        cur = nxt
    for i in range(n):
        nxt = b2.state()
        b2.power_block(cur, nxt, pair(i), k)
        b2.edge(cur, None, nxt)
        cur = nxt
    l2 = b2.build(alphabet, [start2], [cur])
    return l1, l2


PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


def gen_mod_from_3sat(f: Cnf3Formula) -> list[Nfa]:
    """One unary automaton per clause.  Variable ``i`` is true in a length
    iff the length is a multiple of the ``i``-th prime; a positive literal
    contributes the multiples, a negative one the other residues."""
    if f.var_count > len(PRIMES):
        raise ValueError(f"at most {len(PRIMES)} variables are supported")
    out = []
    for clause in f.clauses:
        trans, initial, final = [], [], []
        count = 0
        for lit in sorted(set(clause)):
            p = PRIMES[abs(lit) - 1]
            base = count
            count += p
            trans += [(base + j, "$", base + (j + 1) % p) for j in range(p)]
            initial.append(base)
            final += [base] if lit > 0 else [base + j for j in range(1, p)]
        out.append(Nfa.build(["$"], count, initial, final, trans))
    return out
