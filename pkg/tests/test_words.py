import itertools

import pytest
from hypothesis import given, settings, strategies as st

from msokit.caps import Caps, get_caps, set_caps
from msokit.errors import InputError, ResourceError
from msokit.words import (
    Alphabet, MsoStructure, SubStructure, Word, all_words, mso, oplus, set_str, union_iso,
)

AB = Alphabet.of("ab")


def w(s):
    return Word.parse(AB, s)


def naive_before(a, b):
    return any(i < j for i in range(16) if a >> i & 1 for j in range(16) if b >> j & 1)


def test_alphabet_validation():
    assert Alphabet.of("ab").symbols == ("a", "b")
    with pytest.raises(InputError):
        Alphabet.of("aa")
    with pytest.raises(InputError):
        Alphabet.of("")
    with pytest.raises(InputError):
        Word.parse(AB, "abc")


def test_word_basics():
    assert str(w("ab") + w("ba")) == "abba"
    assert str(w("abba")[1:3]) == "bb"
    assert len(Word.empty(AB)) == 0
    assert [str(x) for x in all_words(AB, 2)] == ["", "a", "b", "aa", "ab", "ba", "bb"]
    assert sum(1 for _ in all_words(AB, 4)) == 31


def test_mso_universe_and_relations():
    S = mso(w("aba"))
    assert list(S.elements) == list(range(8))
    assert S.bottom == 0
    assert S.atoms == (1, 2, 4)
    assert [S.has_label(0, x) for x in S.atoms] == [True, False, True]
    assert not S.has_label(0, 5)  # labels hold only of atoms
    for a, b in itertools.product(S.elements, repeat=2):
        assert S.sub(a, b) == (a & ~b == 0)
        assert S.before(a, b) == naive_before(a, b)


def test_empty_word_structure():
    S = mso(Word.empty(AB))
    assert list(S.elements) == [0]
    assert S.atoms == ()
    assert not S.before(0, 0)


def test_features_match_scalar_relations():
    for word in ["", "a", "ab", "bba"]:
        S = mso(w(word))
        F = S.features
        for i in S.elements:
            assert list(F.sub_row(i)) == [S.sub(i, c) for c in S.elements]
            assert list(F.sub_col(i)) == [S.sub(c, i) for c in S.elements]
            assert list(F.bef_row(i)) == [S.before(i, c) for c in S.elements]
            assert list(F.bef_col(i)) == [S.before(c, i) for c in S.elements]


def test_position_cap():
    with pytest.raises(ResourceError):
        mso(w("a" * (get_caps().positions + 1)))


def test_product_clauses():
    P = oplus(mso(w("a")), mso(w("b")))
    assert P.size == 4
    assert P.bottom == (0, 0)
    assert P.atoms == ((0, 1), (1, 0))
    # (A, B) < (C, D) iff (A nonempty and D nonempty) or A < C or B < D
    assert P.before((1, 0), (0, 1))
    assert not P.before((0, 1), (1, 0))
    assert P.has_label(0, (1, 0)) and P.has_label(1, (0, 1))


def test_union_iso_examples():
    assert union_iso(w("ab"), w("ba"))
    assert union_iso(Word.empty(AB), w("abb"))
    assert union_iso(w("aa"), Word.empty(AB))


@settings(max_examples=40, deadline=None)
@given(st.text("ab", max_size=3), st.text("ab", max_size=3))
def test_union_iso_property(a, b):
    assert union_iso(w(a), w(b))


def test_union_iso_cap():
    with pytest.raises(ResourceError):
        union_iso(w("aaaaa"), w("aaaa"))


def test_corrupted_labels_allowed():
    S = MsoStructure(AB, [1, 3])
    # per-position label masks: position 1 carries both letters
    assert S.has_label(0, 2) and S.has_label(1, 2)
    assert not S.has_label(1, 1)


def test_substructure():
    S = mso(w("abab"))
    T = SubStructure(S, 0b0110)
    assert sorted(T.elements) == [0, 2, 4, 6]
    assert set_str(0b101) == "{0,2}"


def test_caps_env_parsing(monkeypatch):
    from msokit import caps as capsmod

    monkeypatch.setenv("MSOKIT_CAPS", "positions=9,max_k=2")
    assert capsmod._parse_overrides("positions=9,max_k=2") == {"positions": 9, "max_k": 2}
    assert capsmod._parse_overrides('{"positions": 7}') == {"positions": 7}
    with pytest.raises(InputError):
        capsmod._parse_overrides("nonsense=1")
    prev = set_caps(Caps(positions=3))
    try:
        with pytest.raises(ResourceError):
            mso(w("aaaa"))
    finally:
        set_caps(prev)
