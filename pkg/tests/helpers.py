"""Shared instance builders for the test suite."""

import random

from hypothesis import strategies as st

from sepcov.automata import Nfa

LETTERS = "abc"


def random_nfa(rng: random.Random, max_states: int = 4, letters: str = "ab",
               min_letters: int = 1) -> Nfa:
    q = rng.randint(1, max_states)
    alphabet = letters[:rng.randint(min_letters, len(letters))]
    trans = [(rng.randrange(q), rng.choice(alphabet), rng.randrange(q))
             for _ in range(rng.randint(0, 2 * q))]
    initial = [s for s in range(q) if rng.random() < 0.4] or [0]
    final = [s for s in range(q) if rng.random() < 0.5]
    return Nfa.build(alphabet, q, initial, final, trans)


def random_unary(rng: random.Random, max_states: int = 8) -> Nfa:
    q = rng.randint(1, max_states)
    trans = [(rng.randrange(q), "a", rng.randrange(q)) for _ in range(rng.randint(0, 2 * q))]
    initial = [s for s in range(q) if rng.random() < 0.3] or [0]
    final = [s for s in range(q) if rng.random() < 0.4]
    return Nfa.build("a", q, initial, final, trans)


@st.composite
def nfas(draw, max_states=4, letters="ab"):
    q = draw(st.integers(1, max_states))
    alphabet = letters[:draw(st.integers(1, len(letters)))]
    edge = st.tuples(st.integers(0, q - 1), st.sampled_from(alphabet), st.integers(0, q - 1))
    trans = draw(st.lists(edge, max_size=2 * q))
    initial = draw(st.sets(st.integers(0, q - 1), min_size=1))
    final = draw(st.sets(st.integers(0, q - 1)))
    return Nfa.build(alphabet, q, initial, final, trans)


def exa_a1() -> Nfa:
    """b(ab)* with states q0, q1, q2."""
    return Nfa.build("ab", 3, [0], [1], [(0, "b", 1), (1, "a", 2), (2, "b", 1)])


def exa_a2() -> Nfa:
    """aa* with states r0, r1."""
    return Nfa.build("a", 2, [0], [1], [(0, "a", 1), (1, "a", 1)])


def parity(residue: int) -> Nfa:
    """Words over ``a`` of length congruent to ``residue`` modulo 2."""
    return Nfa.build("a", 2, [0], [residue], [(0, "a", 1), (1, "a", 0)])


def permutation_automaton() -> Nfa:
    """(ab*a + ba*b)*: both letters act as permutations of the three states."""
    return Nfa.build("ab", 3, [0], [0], [(0, "a", 1), (1, "b", 1), (1, "a", 0),
                                         (0, "b", 2), (2, "a", 2), (2, "b", 0)])


def empty_language(alphabet="a") -> Nfa:
    return Nfa.build(alphabet, 1, [0], [], [])


def epsilon_language(alphabet="a") -> Nfa:
    return Nfa.build(alphabet, 1, [0], [0], [])


ACCEPTANCE_LINES: list[str] = []


def report(ok: bool, label: str, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL':4}  {label:<44}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
