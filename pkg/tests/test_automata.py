import random

import pytest
from hypothesis import given

from helpers import (empty_language, epsilon_language, exa_a1, exa_a2, nfas, random_nfa)
from sepcov.automata import (EPS_TOKEN, ExtNfa, Nfa, SignedWord, accepts, as_ext,
                             determinize_complement, enumerate_signed_words, enumerate_words,
                             intersect_emptiness, is_empty, make_alphabet, parse_ext, parse_nfa,
                             scc_decompose, serialize_ext, serialize_nfa, trim, union_alphabet)
from sepcov.dyck import build_extended
from sepcov.errors import AlphabetError, NfaFormatError

L2_DOC = ('{"alphabet": ["a"], "states": 2, "initial": [0], "final": [1], '
          '"transitions": [[0, "a", 1], [1, "a", 1]]}')


def words_of(a: Nfa, max_len: int):
    return {w for w in enumerate_words(len(a.alphabet), max_len)
            if a.accepts(SignedWord.positive(w))}


def test_parse_example_document():
    a = parse_nfa(L2_DOC)
    assert a == exa_a2()
    assert a.accepts("a") and a.accepts("aaa") and not a.accepts("")


def test_parse_epsilon_language():
    a = parse_nfa('{"alphabet": [], "states": 1, "initial": [0], "final": [0], "transitions": []}')
    assert a.accepts("")
    assert a.alphabet == ()


def test_parse_state_out_of_range():
    doc = '{"alphabet": ["a"], "states": 3, "initial": [0], "final": [1], "transitions": [[0, "a", 5]]}'
    with pytest.raises(NfaFormatError, match="out of range"):
        parse_nfa(doc)


@pytest.mark.parametrize("doc, where", [
    ("[1, 2]", None),
    ('{"alphabet": ["a"], "states": 1, "initial": [0], "final": []}', "transitions"),
    ('{"alphabet": ["a", "a"], "states": 1, "initial": [0], "final": [], "transitions": []}',
     "alphabet"),
    ('{"alphabet": ["a"], "states": 1, "initial": [0], "final": [], "transitions": [[0, "b", 0]]}',
     "transitions[0]"),
    ('{"alphabet": ["a"], "states": 1, "initial": [0], "final": [], "transitions": [[0, 0]]}',
     "transitions[0]"),
    ("{not json", "line 1"),
])
def test_parse_rejects_bad_documents(doc, where):
    with pytest.raises(NfaFormatError) as info:
        parse_nfa(doc)
    if where:
        assert where in str(info.value)


def test_serialize_canonical():
    text = serialize_nfa(epsilon_language(()))
    assert text == '{"alphabet": [], "states": 1, "initial": [0], "final": [0], "transitions": []}\n'
    assert serialize_nfa(parse_nfa(L2_DOC)).strip() == L2_DOC


@given(nfas(max_states=5, letters="abc"))
def test_serialize_round_trip(a):
    assert parse_nfa(serialize_nfa(a)) == a


def test_ext_round_trip():
    t = build_extended(exa_a1())
    assert parse_ext(serialize_ext(t)) == t


def test_alphabet_helpers():
    assert make_alphabet("ba") == ("a", "b")
    assert union_alphabet("ab", ["c", "a"]) == ("a", "b", "c")
    with pytest.raises(AlphabetError):
        make_alphabet(["a^-1"])
    widened = exa_a2().with_alphabet("ab")
    assert widened.alphabet == ("a", "b") and widened.accepts("aa") and not widened.accepts("ab")


def test_signed_word_render_parse():
    w = SignedWord.parse("a b^-1 a", "ab")
    assert w.codes == (0, 3, 0)
    assert w.render("ab") == "a b^-1 a"
    assert SignedWord().render("ab") == EPS_TOKEN
    assert SignedWord.parse(EPS_TOKEN, "ab") == SignedWord()
    assert w.inverse().render("ab") == "a^-1 b a^-1"
    with pytest.raises(AlphabetError):
        SignedWord.parse("c", "ab")


def test_trim_removes_isolated_state():
    a = Nfa.build("a", 3, [0], [1], [(0, "a", 1), (1, "a", 1)])
    assert trim(a).state_count == 2
    assert trim(a) == exa_a2()


def test_trim_empty_final():
    a = Nfa.build("a", 2, [0], [], [(0, "a", 1)])
    assert trim(a).state_count == 0
    assert is_empty(a)


def test_trim_preserves_language():
    rng = random.Random(11)
    for _ in range(150):
        a = random_nfa(rng, 5, "ab")
        assert words_of(trim(a), 6) == words_of(a, 6)


def test_scc_example():
    scc = scc_decompose(exa_a1())
    groups = sorted(sorted(g) for g in scc.members())
    assert groups == [[0], [1, 2]]


def test_scc_single_state():
    assert scc_decompose(epsilon_language()).component_count == 1


def test_scc_against_closure():
    rng = random.Random(5)
    for _ in range(200):
        a = random_nfa(rng, 6, "ab")
        n = a.state_count
        reach = [[i == j for j in range(n)] for i in range(n)]
        for s, _, d in a.transitions:
            reach[s][d] = True
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
        scc = scc_decompose(a)
        for i in range(n):
            for j in range(n):
                assert scc.same(i, j) == (reach[i][j] and reach[j][i])


def test_accepts_examples():
    assert accepts(exa_a1(), "bab")
    assert accepts(build_extended(exa_a1()), SignedWord.parse("a^-1", "ab"))
    assert not accepts(exa_a2(), "")


def test_nfa_rejects_inverse_letters():
    with pytest.raises(AlphabetError):
        exa_a2().accepts(SignedWord.parse("a^-1", "a"))


def test_intersection_example():
    w = intersect_emptiness([build_extended(exa_a1()), build_extended(exa_a2().with_alphabet("ab"))])
    assert w is not None and w.render("ab") == "a^-1"


def test_intersection_with_empty():
    assert intersect_emptiness([build_extended(exa_a1()), as_ext(empty_language("ab"))]) is None


def test_intersection_single_machine():
    rng = random.Random(3)
    for _ in range(100):
        a = random_nfa(rng)
        w = intersect_emptiness([as_ext(a)])
        assert (w is None) == is_empty(a)
        if w is not None:
            assert a.accepts(w)


def test_intersection_against_enumeration():
    rng = random.Random(17)
    for _ in range(60):
        a = random_nfa(rng, 3, "ab", min_letters=2)
        b = random_nfa(rng, 3, "ab", min_letters=2)
        machines = [build_extended(a), build_extended(b)]
        w = intersect_emptiness(machines)
        brute = next((u for u in enumerate_signed_words(2, 5)
                      if all(m.accepts(u) for m in machines)), None)
        if brute is not None:
            assert w is not None
            assert len(w) == len(brute)
            assert w <= brute
        if w is not None:
            assert all(m.accepts(w) for m in machines)
            if brute is None:
                assert len(w) > 5


def test_complement_of_epsilon():
    c = determinize_complement(epsilon_language("a"))
    assert not c.accepts("")
    assert all(c.accepts("a" * k) for k in range(1, 7))


def test_double_complement():
    a = exa_a2()
    cc = determinize_complement(determinize_complement(a))
    assert words_of(cc, 8) == words_of(a, 8)


def test_ext_validation():
    with pytest.raises(ValueError):
        ExtNfa(("a",), 1, {0}, {0}, {(0, 1, 0): "original"})
