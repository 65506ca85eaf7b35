import random
from itertools import permutations

import pytest

from helpers import empty_language, epsilon_language, exa_a1, exa_a2, parity, random_nfa
from sepcov.amt import (CycleTable, ZSemilinearSet, amt_coverable, brute_zeta, image_of,
                        realize_vector, semilinear_image, semilinear_intersection,
                        synth_amt_cover, zeta)
from sepcov.automata import ExtNfa, Nfa, SignedWord, trim
from sepcov.dyck import build_extended, build_inverse_completion
from sepcov.errors import CapacityError
from sepcov.gr import ZETA_VECTOR, common_alphabet, gr_coverable

METHODS = [("product", "join"), ("images", "join"), ("images", "tuples")]


def loop_a() -> Nfa:
    return Nfa.build("a", 1, [0], [0], [(0, "a", 0)])


def test_zeta_examples():
    assert zeta(SignedWord(), "ab") == (0, 0)
    assert zeta(SignedWord.parse("a b a^-1", "ab"), "ab") == (0, 1)
    rng = random.Random(1)
    for _ in range(50):
        w = SignedWord(tuple(rng.randrange(6) for _ in range(rng.randint(0, 8))))
        assert zeta(w + w.inverse(), 3) == (0, 0, 0)


def test_image_of_loop_is_everything():
    img = image_of(loop_a())
    assert all(img.contains((k,)) for k in range(-12, 13))


def test_image_of_even_lengths():
    img = image_of(parity(0))
    t = build_inverse_completion(parity(0))
    assert brute_zeta(t, 8) <= {(k,) for k in range(-8, 9, 2)}
    assert all(img.contains((k,)) == (k % 2 == 0) for k in range(-12, 13))


def test_image_of_empty():
    assert image_of(empty_language()).is_empty()


def test_intersection_examples():
    evens, odds, everything = image_of(parity(0)), image_of(parity(1)), image_of(loop_a())
    assert semilinear_intersection([evens, odds]) is None
    found = semilinear_intersection([everything, evens])
    assert found is not None
    x, _ = found
    assert everything.contains(x) and evens.contains(x)


def test_intersection_of_example_images():
    a1, a2 = common_alphabet([exa_a1(), exa_a2()])
    images = [image_of(a1), image_of(a2)]
    found = semilinear_intersection(images)
    assert found is not None
    assert all(img.contains((-1, 0)) for img in images)
    brute = [brute_zeta(build_inverse_completion(trim(a)), 4) for a in (a1, a2)]
    assert brute[0] & brute[1]


def test_amt_examples():
    assert amt_coverable([parity(0), parity(1)]).coverable
    v = amt_coverable([exa_a1(), exa_a2()])
    assert not v.coverable and v.witness_kind == ZETA_VECTOR
    assert amt_coverable([exa_a1(), empty_language("ab")]).coverable
    with pytest.raises(ValueError):
        amt_coverable([parity(0)], method="other")


def test_realize_zero_coefficients():
    t = build_inverse_completion(loop_a())
    img = semilinear_image(t)
    for i, comp in enumerate(img.components):
        w = realize_vector(img, i, [0] * len(comp.periods))
        assert w == comp.base_witness


def test_realize_a_star():
    t = build_inverse_completion(loop_a())
    img = semilinear_image(t)
    i = next(i for i, c in enumerate(img.components) if c.base == (0,))
    comp = img.components[i]
    k = comp.periods.index((1,))
    coeffs = [0] * len(comp.periods)
    coeffs[k] = 2
    w = realize_vector(img, i, coeffs)
    assert zeta(w, 1) == (2,) and t.accepts(w)


def test_realize_random_coefficients():
    rng = random.Random(2)
    for _ in range(80):
        t = build_inverse_completion(trim(random_nfa(rng, 4, "ab")))
        img = semilinear_image(t)
        for i, comp in enumerate(img.components):
            assert t.accepts(comp.base_witness)
            assert zeta(comp.base_witness, t.alphabet) == comp.base
            coeffs = [rng.randint(-3, 3) for _ in comp.periods]
            w = realize_vector(img, i, coeffs)
            expected = tuple(comp.base[r] + sum(c * p[r] for c, p in zip(coeffs, comp.periods))
                             for r in range(len(comp.base)))
            assert t.accepts(w) and zeta(w, t.alphabet) == expected


def test_cycle_table_witnesses():
    rng = random.Random(3)
    for _ in range(80):
        t = build_inverse_completion(random_nfa(rng, 5, "abc"))
        table = CycleTable(t)
        for q, periods in enumerate(table.periods):
            loop = ExtNfa(t.alphabet, t.state_count, {q}, {q}, dict(t.signed))
            for p in periods:
                assert p.anchor == q and any(p.vector)
                assert loop.accepts(p.word) and zeta(p.word, t.alphabet) == p.vector
                assert all(abs(x) <= t.state_count for x in p.vector)


def test_brute_zeta_examples():
    assert brute_zeta(build_inverse_completion(epsilon_language()), 3) == {(0,)}
    t = build_inverse_completion(exa_a2())
    img = semilinear_image(t)
    small, large = brute_zeta(t, 3), brute_zeta(t, 4)
    assert small <= large
    assert all(img.contains(v) for v in large)


def test_brute_zeta_inside_image():
    rng = random.Random(4)
    for _ in range(100):
        t = build_inverse_completion(trim(random_nfa(rng, 4, "ab")))
        img = semilinear_image(t)
        assert all(img.contains(v) for v in brute_zeta(t, 6))


def test_routes_agree_and_witnesses_check():
    rng = random.Random(5)
    for _ in range(150):
        inputs = [random_nfa(rng, 4, rng.choice(("a", "ab", "abc"))) for _ in range(rng.choice((2, 3)))]
        verdicts = [amt_coverable(inputs, method=m, strategy=s) for m, s in METHODS]
        assert len({v.coverable for v in verdicts}) == 1
        machines = [trim(a) for a in common_alphabet(inputs)]
        for v in verdicts:
            if not v.coverable:
                for a, w in zip(machines, v.realizations):
                    assert build_inverse_completion(a).accepts(w)
                    assert zeta(w, v.alphabet) == v.vector
        if not gr_coverable(inputs).coverable:
            assert not verdicts[0].coverable


def test_permutation_and_trim_invariance():
    rng = random.Random(6)
    for _ in range(60):
        inputs = [random_nfa(rng, 3) for _ in range(3)]
        verdict = amt_coverable(inputs).coverable
        for order in permutations(inputs):
            assert amt_coverable(list(order)).coverable == verdict
        assert amt_coverable([trim(a) for a in inputs]).coverable == verdict


def test_synth_examples():
    cover = synth_amt_cover([parity(0), parity(1)], 4)
    assert cover.d == 2
    assert cover.residues == (frozenset({(0,)}), frozenset({(1,)}))
    assert cover.missed_input((3,)) == 0
    assert synth_amt_cover([exa_a1(), exa_a2()], 6) is None
    assert synth_amt_cover([empty_language(), loop_a()], 3).d == 1


def test_synth_implies_coverable():
    rng = random.Random(7)
    for _ in range(100):
        inputs = [random_nfa(rng, 3) for _ in range(2)]
        cover = synth_amt_cover(inputs, 4)
        if cover is not None:
            assert amt_coverable(inputs).coverable


def test_budget_guard():
    with pytest.raises(CapacityError):
        amt_coverable([exa_a1(), exa_a2()], budget=1)


def test_extended_inputs_rejected():
    with pytest.raises(ValueError):
        semilinear_image(build_extended(exa_a2()))


def test_semilinear_set_dimension_check():
    with pytest.raises(ValueError):
        ZSemilinearSet(2).contains((1,))
