import random

import pytest

from helpers import empty_language, epsilon_language, exa_a1, exa_a2, parity, random_nfa
from sepcov.automata import Nfa, SignedWord, enumerate_signed_words
from sepcov.dyck import is_trivial
from sepcov.errors import CapacityError
from sepcov.gr import gr_coverable, gr_separable
from sepcov.monoid import (_set_product, _to_mask, ash_gr_coverable, compose, gamma,
                           identity_relation, igr_closure, s_epsilon_fixpoint,
                           transition_monoid, weak_inverse_set)


def word_images(m, g, w: SignedWord) -> set:
    """All elements obtained by choosing one image per signed letter."""
    current = {0}
    for c in w.codes:
        current = {m.mul(x, y) for x in current for y in g[c]}
    return current


def test_monoid_of_a_plus():
    m = transition_monoid([exa_a2()])
    assert m.size == 2 and len(m.elements) == 2
    s = m.letter_map[0]
    assert m.elements[s] == (0b10, 0b10)
    assert m.mul(s, s) == s
    assert m.accepting == [frozenset({s})]


def test_monoid_of_epsilon_language():
    m = transition_monoid([epsilon_language()])
    assert m.elements[0] == identity_relation(1)
    assert m.elements[m.letter_map[0]] == (0,)
    assert m.accepting == [frozenset({0})]


def test_morphism_law():
    rng = random.Random(1)
    for _ in range(40):
        inputs = [random_nfa(rng, 3, "ab", min_letters=2) for _ in range(2)]
        m = transition_monoid(inputs)
        for _ in range(20):
            u = [rng.randrange(2) for _ in range(rng.randint(0, 5))]
            v = [rng.randrange(2) for _ in range(rng.randint(0, 5))]
            assert m.of_word(u + v) == m.mul(m.of_word(u), m.of_word(v))
            assert m.elements[m.of_word(u + v)] == compose(m.elements[m.of_word(u)],
                                                          m.elements[m.of_word(v)])


def test_weak_inverses():
    m = transition_monoid([exa_a2()])
    s = m.letter_map[0]
    assert weak_inverse_set(m, s) == {s}
    assert weak_inverse_set(m, 0) == {0, s}


def test_weak_inverse_in_group():
    m = transition_monoid([parity(0)])
    s = m.letter_map[0]
    inverse = next(t for t in range(len(m.elements)) if m.mul(s, t) == 0)
    assert inverse in weak_inverse_set(m, s)
    assert 0 in weak_inverse_set(m, 0)


def test_s_eps_trivial_monoid():
    m = transition_monoid([Nfa.build((), 1, [0], [0], [])])
    assert s_epsilon_fixpoint(m, gamma(m)) == {0}


def test_s_eps_closure_and_minimality():
    for inputs in ([exa_a2()], [exa_a1(), exa_a2()]):
        m = transition_monoid(inputs)
        g = gamma(m)
        S = s_epsilon_fixpoint(m, g)
        assert 0 in S
        assert all(m.mul(x, y) in S for x in S for y in S)
        for code, left in g.items():
            for a in left:
                for b in g[code ^ 1]:
                    assert all(m.mul(m.mul(a, e), b) in S for e in S)
        # least fixpoint computed naively from below
        naive = {0}
        while True:
            grown = set(naive)
            grown |= {m.mul(x, y) for x in naive for y in naive}
            for code, left in g.items():
                grown |= {m.mul(m.mul(a, e), b) for a in left for e in naive for b in g[code ^ 1]}
            if grown == naive:
                break
            naive = grown
        assert naive == S


def test_trivial_words_land_in_s_eps():
    m = transition_monoid([exa_a1(), exa_a2()])
    g = gamma(m)
    S = s_epsilon_fixpoint(m, g)
    for w in enumerate_signed_words(2, 6):
        if is_trivial(w):
            assert word_images(m, g, w) <= S


def test_igr_closure_trivial():
    m = transition_monoid([Nfa.build((), 1, [0], [0], [])])
    g = gamma(m)
    assert igr_closure(m, g, s_epsilon_fixpoint(m, g)) == {1}


def test_igr_closure_product_closed():
    m = transition_monoid([exa_a1()])
    g = gamma(m)
    fam = igr_closure(m, g, s_epsilon_fixpoint(m, g))
    assert all(x for x in fam)
    for x in fam:
        for y in fam:
            assert _set_product(m, x, y) in fam
    assert _to_mask(s_epsilon_fixpoint(m, g)) in fam


def test_ash_examples():
    assert not ash_gr_coverable([exa_a1(), exa_a2()])
    assert ash_gr_coverable([exa_a1(), empty_language("ab")])


def test_ash_agrees_with_decider():
    rng = random.Random(2)
    for _ in range(150):
        a, b = random_nfa(rng), random_nfa(rng)
        assert ash_gr_coverable([a, b]) == gr_separable(a, b).coverable


def test_ash_triples():
    rng = random.Random(3)
    for _ in range(60):
        inputs = [random_nfa(rng, 3) for _ in range(3)]
        assert ash_gr_coverable(inputs) == gr_coverable(inputs).coverable


def test_capacity():
    with pytest.raises(CapacityError):
        ash_gr_coverable([exa_a1(), exa_a2()], monoid_budget=2)
