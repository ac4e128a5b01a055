import pytest

from msokit.errors import InputError, ResourceError
from msokit.evaluate import check_axioms, evaluate
from msokit.logic import parse
from msokit.words import Alphabet, MsoStructure, Word, all_words, mso, oplus

AB = Alphabet.of("ab")


def w(s):
    return Word.parse(AB, s)


def test_spec_examples():
    assert evaluate(mso(w("ab")), parse("ex x. P_a(x)", AB))
    assert not evaluate(mso(Word.empty(AB)), parse("ex X. !(X = empty)"))


def test_atom_variables_range_over_atoms():
    # every atom is nonempty, but X ranges over empty too
    assert evaluate(mso(w("ab")), parse("all x. !x = empty"))
    assert not evaluate(mso(w("ab")), parse("all X. !X = empty"))


def test_assignment():
    S = mso(w("aba"))
    f = parse("X < Y")
    assert evaluate(S, f, {"X": 0b001, "Y": 0b100})
    assert not evaluate(S, f, {"X": 0b100, "Y": 0b001})
    with pytest.raises(InputError):
        evaluate(S, f, {"X": 1})
    with pytest.raises(InputError):
        evaluate(S, parse("at(x)"), {"x": 0b011})


def test_against_direct_semantics():
    # ex x. ex y. x < y & P_a(x) & P_b(y): some a before some b
    f = parse("ex x. ex y. x < y & P_a(x) & P_b(y)", AB)
    for word in all_words(AB, 5):
        s = str(word)
        expect = "a" in s and "b" in s[s.index("a"):]
        assert evaluate(mso(word), f) == expect


def test_first_order_unary_ok_on_product_structure():
    P = oplus(mso(w("ab")), mso(w("b")))
    assert evaluate(P, parse("ex x. ex y. x < y & P_a(x) & P_b(y)", AB))
    assert evaluate(P, parse("all X. X <= X"))


def test_depth_cap():
    long = w("ab" * 5)
    assert evaluate(mso(long), parse("ex X. at(X)"))
    with pytest.raises(ResourceError):
        evaluate(mso(long), parse("ex X. ex Y. X < Y"))


def test_axioms_hold_on_words():
    for s in ["", "a", "abba", "babab"]:
        report = check_axioms(w(s))
        assert report.passed, report.failures()
    assert "overall: pass" in check_axioms(w("ab")).render()


def test_axioms_detect_corruption():
    # position 1 carries both labels
    report = check_axioms(MsoStructure(AB, [1, 3]))
    assert report.failures() == ["labels.disjoint.a.b"]
    # a position with no label breaks the cover axiom
    assert report_failures(MsoStructure(AB, [0, 2])) == ["labels.cover"]


def report_failures(S):
    return check_axioms(S).failures()


def test_axioms_length_limit():
    with pytest.raises(ResourceError):
        check_axioms(w("aaaaaa"))
