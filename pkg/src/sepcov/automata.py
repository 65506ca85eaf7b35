"""Automata over a base alphabet and over its signed extension.

Letters are dense indices into a sorted alphabet.  A signed letter is encoded
as the integer ``2 * base + negative`` so that the inverse of a code is
``code ^ 1`` and the natural integer order is (base index, sign) with the
positive letter first.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import AlphabetError, NfaFormatError

EPS_TOKEN = "@eps"
INV_SUFFIX = "^-1"

ORIGINAL = "original"
INVERSE = "inverse"


def make_alphabet(letters: Iterable[str]) -> tuple[str, ...]:
    """Canonical alphabet: distinct names in lexicographic order."""
    letters = list(letters)
    for name in letters:
        if not isinstance(name, str) or not name or name.split() != [name]:
            raise AlphabetError(f"invalid letter name {name!r}")
        if name.endswith(INV_SUFFIX) or name == EPS_TOKEN:
            raise AlphabetError(f"reserved letter name {name!r}")
    return tuple(sorted(set(letters)))


def union_alphabet(*alphabets: Iterable[str]) -> tuple[str, ...]:
    merged: set[str] = set()
    for alphabet in alphabets:
        merged.update(alphabet)
    return make_alphabet(merged)


class SignedLetter(NamedTuple):
    base: int
    negative: bool = False

    def inverse(self) -> "SignedLetter":
        return SignedLetter(self.base, not self.negative)

    @property
    def code(self) -> int:
        return 2 * self.base + int(self.negative)

    @classmethod
    def from_code(cls, code: int) -> "SignedLetter":
        return cls(code >> 1, bool(code & 1))

    def render(self, alphabet: Sequence[str]) -> str:
        name = alphabet[self.base]
        return name + INV_SUFFIX if self.negative else name


@dataclass(frozen=True, order=True)
class SignedWord:
    """A word over the signed alphabet, stored as a tuple of letter codes."""

    codes: tuple[int, ...] = ()

    @classmethod
    def of(cls, letters: Iterable[SignedLetter | int]) -> "SignedWord":
        return cls(tuple(x.code if isinstance(x, SignedLetter) else int(x) for x in letters))

    @classmethod
    def positive(cls, indices: Iterable[int]) -> "SignedWord":
        return cls(tuple(2 * i for i in indices))

    @classmethod
    def parse(cls, text: str, alphabet: Sequence[str]) -> "SignedWord":
        index = {name: i for i, name in enumerate(alphabet)}
        codes = []
        for token in text.split():
            if token == EPS_TOKEN:
                continue
            negative = token.endswith(INV_SUFFIX)
            name = token[: -len(INV_SUFFIX)] if negative else token
            if name not in index:
                raise AlphabetError(f"letter {name!r} not in alphabet {list(alphabet)}")
            codes.append(2 * index[name] + int(negative))
        return cls(tuple(codes))

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return (SignedLetter.from_code(c) for c in self.codes)

    def __add__(self, other: "SignedWord") -> "SignedWord":
        return SignedWord(self.codes + other.codes)

    def __mul__(self, times: int) -> "SignedWord":
        return SignedWord(self.codes * times)

    def inverse(self) -> "SignedWord":
        return SignedWord(tuple(c ^ 1 for c in reversed(self.codes)))

    def is_positive(self) -> bool:
        return all(c & 1 == 0 for c in self.codes)

    def render(self, alphabet: Sequence[str]) -> str:
        if not self.codes:
            return EPS_TOKEN
        return " ".join(SignedLetter.from_code(c).render(alphabet) for c in self.codes)


def _check_states(states, count, what):
    for q in states:
        if not isinstance(q, int) or isinstance(q, bool) or not 0 <= q < count:
            raise NfaFormatError(f"state {q!r} out of range (states={count})", what)


@dataclass(frozen=True)
class Nfa:
    """Finite automaton ``(Q, I, F, delta)`` without epsilon transitions.

    States are ``0 .. state_count - 1``; transitions are ``(src, letter, dst)``
    with ``letter`` an index into ``alphabet``.
    """

    alphabet: tuple[str, ...]
    state_count: int
    initial: frozenset[int]
    final: frozenset[int]
    transitions: frozenset[tuple[int, int, int]]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if list(self.alphabet) != list(make_alphabet(self.alphabet)):
            raise AlphabetError("alphabet must be sorted and duplicate-free")
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        if self.state_count < 0:
            raise NfaFormatError("negative state count", "states")
        _check_states(self.initial, self.state_count, "initial")
        _check_states(self.final, self.state_count, "final")
        for src, letter, dst in self.transitions:
            _check_states((src, dst), self.state_count, "transitions")
            if not 0 <= letter < len(self.alphabet):
                raise AlphabetError(f"letter index {letter} outside alphabet")

    @classmethod
    def build(cls, alphabet, states, initial, final, transitions) -> "Nfa":
        """Construct from letter *names*; the alphabet is canonicalized."""
        letters = make_alphabet(alphabet)
        index = {name: i for i, name in enumerate(letters)}
        triples = set()
        for k, (src, name, dst) in enumerate(transitions):
            if name not in index:
                raise NfaFormatError(f"letter {name!r} not declared", f"transitions[{k}]")
            _check_states((src, dst), states, f"transitions[{k}]")
            triples.add((src, index[name], dst))
        return cls(letters, states, frozenset(initial), frozenset(final), frozenset(triples))

    @cached_property
    def successors(self) -> dict[tuple[int, int], frozenset[int]]:
        out: dict[tuple[int, int], set[int]] = {}
        for src, letter, dst in self.transitions:
            out.setdefault((src, letter), set()).add(dst)
        return {k: frozenset(v) for k, v in out.items()}

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[set[int]] = [set() for _ in range(self.state_count)]
        for src, _, dst in self.transitions:
            adj[src].add(dst)
        return [sorted(s) for s in adj]

    def letter_index(self, name: str) -> int:
        try:
            return self.alphabet.index(name)
        except ValueError:
            raise AlphabetError(f"letter {name!r} not in alphabet {list(self.alphabet)}") from None

    def with_alphabet(self, alphabet: Sequence[str]) -> "Nfa":
        """Re-index onto a superset alphabet."""
        alphabet = make_alphabet(alphabet)
        if tuple(alphabet) == self.alphabet:
            return self
        index = {name: i for i, name in enumerate(alphabet)}
        missing = [a for a in self.alphabet if a not in index]
        if missing:
            raise AlphabetError(f"letters {missing} missing from target alphabet")
        triples = {(s, index[self.alphabet[a]], d) for s, a, d in self.transitions}
        return Nfa(alphabet, self.state_count, self.initial, self.final, frozenset(triples))

    def accepts(self, word) -> bool:
        """``word`` is a sequence of letter names or a positive SignedWord."""
        if isinstance(word, SignedWord):
            if not word.is_positive():
                raise AlphabetError("inverse letters are not part of a base-alphabet NFA")
            letters = [c >> 1 for c in word.codes]
            for x in letters:
                if not 0 <= x < len(self.alphabet):
                    raise AlphabetError(f"letter index {x} outside alphabet")
        else:
            letters = [self.letter_index(name) for name in word]
        current = set(self.initial)
        for x in letters:
            current = {d for q in current for d in self.successors.get((q, x), ())}
            if not current:
                return False
        return bool(current & self.final)


@dataclass(frozen=True)
class ExtNfa:
    """Automaton over the signed alphabet with epsilon edges.

    ``signed`` maps each transition ``(src, code, dst)`` to its provenance tag
    (``"original"`` or ``"inverse"``).  ``eps`` always contains the identity
    pairs.
    """

    alphabet: tuple[str, ...]
    state_count: int
    initial: frozenset[int]
    final: frozenset[int]
    signed: dict = field(hash=False, compare=True)
    eps: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        ident = {(q, q) for q in range(self.state_count)}
        object.__setattr__(self, "eps", frozenset(self.eps) | ident)
        for (src, code, dst), tag in self.signed.items():
            if tag == ORIGINAL and code & 1:
                raise ValueError("original transitions must carry positive letters")

    @property
    def transitions(self) -> frozenset[tuple[int, int, int]]:
        return frozenset(self.signed)

    @cached_property
    def successors(self) -> dict[tuple[int, int], frozenset[int]]:
        out: dict[tuple[int, int], set[int]] = {}
        for src, code, dst in self.signed:
            out.setdefault((src, code), set()).add(dst)
        return {k: frozenset(v) for k, v in out.items()}

    @cached_property
    def closure(self) -> tuple[frozenset[int], ...]:
        """Reflexive-transitive closure of the epsilon edges, per state."""
        adj: list[list[int]] = [[] for _ in range(self.state_count)]
        for q, r in self.eps:
            adj[q].append(r)
        result = []
        for q in range(self.state_count):
            seen = {q}
            stack = [q]
            while stack:
                for r in adj[stack.pop()]:
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
            result.append(frozenset(seen))
        return tuple(result)

    def non_identity_eps(self) -> list[tuple[int, int]]:
        return sorted(p for p in self.eps if p[0] != p[1])

    def with_eps(self, eps: Iterable[tuple[int, int]]) -> "ExtNfa":
        return ExtNfa(self.alphabet, self.state_count, self.initial, self.final,
                      dict(self.signed), frozenset(eps))

    def accepts(self, word: SignedWord) -> bool:
        n = len(self.alphabet)
        closure = self.closure
        current = set().union(*(closure[q] for q in self.initial)) if self.initial else set()
        for code in word.codes:
            if not 0 <= code >> 1 < n:
                raise AlphabetError(f"letter code {code} outside alphabet")
            step = {d for q in current for d in self.successors.get((q, code), ())}
            current = set().union(*(closure[q] for q in step)) if step else set()
            if not current:
                return False
        return bool(current & self.final)


def as_ext(a: Nfa) -> ExtNfa:
    """View a plain NFA as an extended one with only original transitions."""
    signed = {(s, 2 * x, d): ORIGINAL for s, x, d in a.transitions}
    return ExtNfa(a.alphabet, a.state_count, a.initial, a.final, signed)


def accepts(machine: Nfa | ExtNfa, word) -> bool:
    if isinstance(machine, ExtNfa) and not isinstance(word, SignedWord):
        word = SignedWord.positive(machine.alphabet.index(x) for x in word)
    return machine.accepts(word)


# --------------------------------------------------------------------------
# Serialization


def _require(doc, key, kind, where=""):
    if key not in doc:
        raise NfaFormatError(f"missing field {key!r}", where or None)
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise NfaFormatError(f"field {key!r} has wrong type", where + key if where else key)
    return value


def _load_json(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NfaFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise NfaFormatError("top level must be an object")
    return doc


def parse_nfa(text: str) -> Nfa:
    doc = _load_json(text)
    alphabet = _require(doc, "alphabet", list)
    for k, name in enumerate(alphabet):
        if not isinstance(name, str):
            raise NfaFormatError("letters must be strings", f"alphabet[{k}]")
    if len(set(alphabet)) != len(alphabet):
        raise NfaFormatError("duplicate letter", "alphabet")
    states = _require(doc, "states", int)
    if states < 0:
        raise NfaFormatError("negative state count", "states")
    initial = _require(doc, "initial", list)
    final = _require(doc, "final", list)
    for key, values in (("initial", initial), ("final", final)):
        for k, q in enumerate(values):
            _check_states((q,), states, f"{key}[{k}]")
    raw = _require(doc, "transitions", list)
    triples = []
    for k, t in enumerate(raw):
        if not (isinstance(t, list) and len(t) == 3 and isinstance(t[1], str)):
            raise NfaFormatError("expected [src, letter, dst]", f"transitions[{k}]")
        triples.append(tuple(t))
    try:
        return Nfa.build(alphabet, states, initial, final, triples)
    except AlphabetError as exc:
        raise NfaFormatError(str(exc), "alphabet") from None


def nfa_to_doc(a: Nfa) -> dict:
    return {
        "alphabet": list(a.alphabet),
        "states": a.state_count,
        "initial": sorted(a.initial),
        "final": sorted(a.final),
        "transitions": [[s, a.alphabet[x], d] for s, x, d in sorted(a.transitions)],
    }


def serialize_nfa(a: Nfa) -> str:
    return json.dumps(nfa_to_doc(a), indent=None, separators=(", ", ": ")) + "\n"


def ext_to_doc(t: ExtNfa) -> dict:
    return {
        "alphabet": list(t.alphabet),
        "states": t.state_count,
        "initial": sorted(t.initial),
        "final": sorted(t.final),
        "signed_transitions": [
            [s, SignedLetter.from_code(c).render(t.alphabet), d, t.signed[(s, c, d)]]
            for s, c, d in sorted(t.signed)
        ],
        "eps": [list(p) for p in sorted(t.eps)],
    }


def serialize_ext(t: ExtNfa) -> str:
    return json.dumps(ext_to_doc(t), separators=(", ", ": ")) + "\n"


def parse_ext(text: str) -> ExtNfa:
    doc = _load_json(text)
    alphabet = make_alphabet(_require(doc, "alphabet", list))
    states = _require(doc, "states", int)
    signed = {}
    for k, item in enumerate(_require(doc, "signed_transitions", list)):
        if not (isinstance(item, list) and len(item) in (3, 4)):
            raise NfaFormatError("expected [src, letter, dst, tag]", f"signed_transitions[{k}]")
        src, token, dst = item[:3]
        _check_states((src, dst), states, f"signed_transitions[{k}]")
        (code,) = SignedWord.parse(token, alphabet).codes
        tag = item[3] if len(item) == 4 else (INVERSE if code & 1 else ORIGINAL)
        signed[(src, code, dst)] = tag
    eps = set()
    for k, pair in enumerate(doc.get("eps", [])):
        _check_states(tuple(pair), states, f"eps[{k}]")
        eps.add(tuple(pair))
    return ExtNfa(alphabet, states, _require(doc, "initial", list), _require(doc, "final", list),
                  signed, frozenset(eps))


# --------------------------------------------------------------------------
# Graph algorithms


def _reach(start: Iterable[int], adj: Sequence[Iterable[int]]) -> set[int]:
    seen = set(start)
    stack = list(seen)
    while stack:
        for r in adj[stack.pop()]:
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return seen


def useful_states(a: Nfa) -> set[int]:
    forward = _reach(a.initial, a.adjacency)
    backward_adj: list[list[int]] = [[] for _ in range(a.state_count)]
    for s, _, d in a.transitions:
        backward_adj[d].append(s)
    backward = _reach(a.final, backward_adj)
    return forward & backward


def trim(a: Nfa) -> Nfa:
    """Keep states that are both reachable and co-reachable, renumbered in order."""
    keep = sorted(useful_states(a))
    renum = {q: i for i, q in enumerate(keep)}
    return Nfa(
        a.alphabet,
        len(keep),
        frozenset(renum[q] for q in a.initial if q in renum),
        frozenset(renum[q] for q in a.final if q in renum),
        frozenset((renum[s], x, renum[d]) for s, x, d in a.transitions
                  if s in renum and d in renum),
    )


def is_empty(a: Nfa) -> bool:
    return not (useful_states(a) & a.initial)


@dataclass(frozen=True)
class SccDecomposition:
    component_id: tuple[int, ...]
    component_count: int

    def same(self, q: int, r: int) -> bool:
        return self.component_id[q] == self.component_id[r]

    def members(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.component_count)]
        for q, c in enumerate(self.component_id):
            groups[c].append(q)
        return groups


def scc_decompose(a: Nfa) -> SccDecomposition:
    """Tarjan's algorithm, iterative.  Component ids follow discovery order
    of the component roots, which is a reverse topological order."""
    n = a.state_count
    adj = a.adjacency
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(adj[v]):
                w = adj[v][i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return SccDecomposition(tuple(comp), ncomp)


# --------------------------------------------------------------------------
# Products


def _signed_letters(alphabet_size: int) -> range:
    return range(2 * alphabet_size)


def intersect_emptiness(machines: Sequence[ExtNfa]) -> SignedWord | None:
    """Shortest word accepted by every machine, or ``None``.

    Explores the reachable part of the product of the machines, whose nodes
    are tuples of individual states; epsilon closure is applied per
    component before each move.  Among shortest witnesses the
    lexicographically least (by letter code) is returned.
    """
    if not machines:
        raise ValueError("need at least one machine")
    alphabet = machines[0].alphabet
    for m in machines[1:]:
        if m.alphabet != alphabet:
            raise AlphabetError("machines must share one alphabet")
    if any(not m.initial or not m.final for m in machines):
        return None
    codes = _signed_letters(len(alphabet))
    closures = [m.closure for m in machines]

    # Per machine and letter: state -> states reachable by closure then letter.
    moves = []
    for m, clo in zip(machines, closures):
        table = {}
        for q in range(m.state_count):
            for c in codes:
                dst = set()
                for p in clo[q]:
                    dst.update(m.successors.get((p, c), ()))
                if dst:
                    table[(q, c)] = tuple(sorted(dst))
        moves.append(table)

    def accepting(node):
        return all(closures[i][q] & machines[i].final for i, q in enumerate(node))

    def successors(node):
        for c in codes:
            options = []
            for i, q in enumerate(node):
                dst = moves[i].get((q, c))
                if dst is None:
                    break
                options.append(dst)
            else:
                for combo in _product(options):
                    yield c, combo

    starts = list(_product([tuple(sorted(m.initial)) for m in machines]))
    seen = set(starts)
    order = list(starts)
    edges: dict[tuple, list] = {}
    queue = deque(starts)
    while queue:
        node = queue.popleft()
        out = edges.setdefault(node, [])
        for c, nxt in successors(node):
            out.append((c, nxt))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)

    # Distance to acceptance, by backward BFS over the explored graph.
    preds: dict[tuple, list] = {}
    for node, out in edges.items():
        for _, nxt in out:
            preds.setdefault(nxt, []).append(node)
    dist = {node: 0 for node in order if accepting(node)}
    queue = deque(dist)
    while queue:
        node = queue.popleft()
        for p in preds.get(node, ()):
            if p not in dist:
                dist[p] = dist[node] + 1
                queue.append(p)
    reachable_starts = [s for s in starts if s in dist]
    if not reachable_starts:
        return None
    d = min(dist[s] for s in reachable_starts)
    frontier = {s for s in reachable_starts if dist[s] == d}
    word = []
    for remaining in range(d, 0, -1):
        best = None
        nxt_frontier: set = set()
        for node in frontier:
            for c, nxt in edges[node]:
                if dist.get(nxt) != remaining - 1:
                    continue
                if best is None or c < best:
                    best = c
                    nxt_frontier = {nxt}
                elif c == best:
                    nxt_frontier.add(nxt)
        word.append(best)
        frontier = nxt_frontier
    return SignedWord(tuple(word))


def _product(options: Sequence[Sequence]):
    if not options:
        yield ()
        return
    head, rest = options[0], options[1:]
    for x in head:
        for tail in _product(rest):
            yield (x,) + tail


def determinize_complement(a: Nfa) -> Nfa:
    """Subset construction, completion with a sink, and final-set flip."""
    n = len(a.alphabet)
    start = frozenset(a.initial)
    index = {start: 0}
    subsets = [start]
    transitions = set()
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for x in range(n):
            nxt = frozenset(d for q in cur for d in a.successors.get((q, x), ()))
            if nxt not in index:
                index[nxt] = len(subsets)
                subsets.append(nxt)
                queue.append(nxt)
            transitions.add((index[cur], x, index[nxt]))
    final = {i for i, s in enumerate(subsets) if not (s & a.final)}
    return Nfa(a.alphabet, len(subsets), frozenset({0}), frozenset(final), frozenset(transitions))


def enumerate_words(alphabet_size: int, max_len: int):
    """All words over letter indices up to ``max_len``, shortest first."""
    layer = [()]
    for _ in range(max_len + 1):
        yield from layer
        layer = [w + (x,) for w in layer for x in range(alphabet_size)]


def enumerate_signed_words(alphabet_size: int, max_len: int):
    layer = [()]
    for _ in range(max_len + 1):
        for w in layer:
            yield SignedWord(w)
        layer = [w + (c,) for w in layer for c in range(2 * alphabet_size)]


def minimize_ext(t: ExtNfa) -> ExtNfa:
    """A minimal deterministic automaton for ``L(t)`` without a sink state.

    Subset construction through the epsilon closure, then Moore partition
    refinement.  All transitions are tagged ``original`` or ``inverse`` by
    the sign of their letter.
    """
    codes = range(2 * len(t.alphabet))
    closure = t.closure

    def close(states):
        out = set()
        for q in states:
            out |= closure[q]
        return frozenset(out)

    start = close(t.initial)
    index = {start: 0}
    subsets = [start]
    delta: dict[tuple[int, int], int] = {}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for c in codes:
            nxt = close(d for q in cur for d in t.successors.get((q, c), ()))
            if nxt not in index:
                index[nxt] = len(subsets)
                subsets.append(nxt)
                queue.append(nxt)
            delta[(index[cur], c)] = index[nxt]
    size = len(subsets)
    accepting = [bool(s & t.final) for s in subsets]
    block = [int(a) for a in accepting]
    while True:
        sig = {}
        new_block = []
        for q in range(size):
            key = (block[q],) + tuple(block[delta[(q, c)]] for c in codes)
            new_block.append(sig.setdefault(key, len(sig)))
        if len(sig) == len(set(block)):
            block = new_block
            break
        block = new_block
    # Renumber blocks in order of first appearance from the start state.
    order: dict[int, int] = {}
    queue = deque([0])
    seen = {0}
    while queue:
        q = queue.popleft()
        order.setdefault(block[q], len(order))
        for c in codes:
            d = delta[(q, c)]
            if d not in seen:
                seen.add(d)
                queue.append(d)
    n = len(order)
    final = frozenset(order[block[q]] for q in range(size) if accepting[q] and block[q] in order)
    trans = {(order[block[q]], c, order[block[delta[(q, c)]]]) for q in seen for c in codes}
    # Keep only states that can still reach a final state.
    back: list[set[int]] = [set() for _ in range(n)]
    for s, _, d in trans:
        back[d].add(s)
    live = _reach(final, back)
    if 0 not in live:
        return ExtNfa(t.alphabet, 1, {0}, set(), {})
    renum = {q: i for i, q in enumerate(sorted(live))}
    signed = {(renum[s], c, renum[d]): INVERSE if c & 1 else ORIGINAL
              for s, c, d in trans if s in live and d in live}
    return ExtNfa(t.alphabet, len(renum), {renum[0]}, {renum[q] for q in final}, signed)
