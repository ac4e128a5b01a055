import itertools
import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from msokit.automata import compile_formula, fixture_dfas
from msokit.ef import equiv_k, word_type
from msokit.errors import InputError, ResourceError
from msokit.logic import parse
from msokit.monoid import (
    Concat, CoherentSequence, Letter, OmegaPower, build_sk, class_of, hom_eval, member_closure,
    membership, omega_eval, parent, parse_term, refinement_report, refines, render_term,
)
from msokit.semigroup import FiniteMonoid
from msokit.words import Alphabet, Word, all_words

AB = Alphabet.of("ab")
UNARY = Alphabet.of("a")


def test_sizes_and_representatives():
    assert build_sk("a", 0).size == 1
    assert build_sk("ab", 0).size == 1
    S1 = build_sk("a", 1)
    assert [str(r) for r in S1.reps] == ["", "a", "aa"]
    assert [str(r) for r in build_sk("ab", 1).reps] == ["", "a", "b", "aa", "ab", "bb"]
    assert build_sk("a", 2).size == 7


def test_unary_s1_oracle():
    # partition unary words up to length 6 by ≈_1
    classes = []
    for v in all_words(UNARY, 6):
        for c in classes:
            if equiv_k(c[0], v, 1):
                c.append(v)
                break
        else:
            classes.append([v])
    assert [str(c[0]) for c in classes] == ["", "a", "aa"]


def test_symbolic_and_direct_closures_agree():
    for al, k in [("a", 1), ("ab", 1), ("a", 2)]:
        a, b = build_sk(al, k), build_sk(al, k, method="direct")
        assert a.table == b.table and a.reps == b.reps


def test_tables_are_monoids():
    for al, k in [("a", 0), ("ab", 0), ("a", 1), ("ab", 1), ("a", 2)]:
        M = build_sk(al, k)
        assert M.identity == 0 and str(M.reps[0]) == ""
        assert M.check_associative() and M.check_identity()
        for e, r in enumerate(M.reps):
            assert hom_eval(M, r) == e == class_of(M, r)


def test_hom_eval_homomorphism_sampled():
    rng = random.Random(0)
    for al, k, n in [("a", 1, 6), ("ab", 1, 5), ("a", 2, 4)]:
        M = build_sk(al, k)
        words = list(all_words(al, n))
        for _ in range(200):
            a, b = rng.choice(words), rng.choice(words)
            assert hom_eval(M, a + b) == M.mul(hom_eval(M, a), hom_eval(M, b))
            assert hom_eval(M, a + b) == class_of(M, a + b)


def test_hom_eval_example():
    M = build_sk("a", 1)
    assert str(M.reps[hom_eval(M, Word.parse(UNARY, "aaaa"))]) == "aa"
    assert hom_eval(M, Word.empty(UNARY)) == M.identity


def test_parent_maps():
    for al, k in [("a", 0), ("a", 1), ("ab", 0)]:
        up, low = build_sk(al, k + 1), build_sk(al, k)
        assert parent(up, low, up.identity) == low.identity
        for x, y in itertools.product(range(up.size), repeat=2):
            assert parent(up, low, up.mul(x, y)) == low.mul(parent(up, low, x), parent(up, low, y))
        for v in all_words(al, 5):
            assert parent(up, low, hom_eval(up, v)) == hom_eval(low, v)
    with pytest.raises(InputError):
        parent(build_sk("a", 1), build_sk("ab", 0), 0)


def test_feasibility_caps():
    with pytest.raises(ResourceError):
        build_sk("ab", 2)
    with pytest.raises(ResourceError):
        build_sk("abc", 1)


def test_json_format():
    M = build_sk("a", 1)
    assert M.to_json() == {"size": 3, "identity": 0,
                           "table": [[0, 1, 2], [1, 2, 2], [2, 2, 2]], "reps": ["", "a", "aa"]}
    back = FiniteMonoid.from_json(M.to_json(), "a")
    assert back.table == M.table and back.letter_image == M.letter_image


def test_term_parser():
    assert parse_term("a", "a") == Letter("a")
    assert parse_term("(a)^w", "a") == OmegaPower(Letter("a"))
    t = parse_term("(ab)^w a", "ab")
    assert t == Concat(OmegaPower(Concat(Letter("a"), Letter("b"))), Letter("a"))
    assert render_term(t) == "(ab)^wa"
    assert parse_term(render_term(t), "ab") == t
    assert parse_term("ab^w", "ab") == Concat(Letter("a"), OmegaPower(Letter("b")))
    for bad in ["", "(a", "a)", "^w", "c", "()"]:
        with pytest.raises(InputError):
            parse_term(bad, "ab")


def test_omega_eval():
    M = build_sk("a", 1)
    assert omega_eval(parse_term("a", "a"), "a", 1) == hom_eval(M, Word.parse(UNARY, "a"))
    e = omega_eval(parse_term("a^w", "a"), "a", 1)
    assert str(M.reps[e]) == "aa"
    M2 = build_sk("a", 2)
    e2 = omega_eval(parse_term("a^w", "a"), "a", 2)
    assert M2.mul(e2, e2) == e2


def test_coherent_sequences():
    for al, text in [("a", "a^w"), ("a", "(aa)^w a"), ("ab", "(ab)^w a"), ("ab", "a^w b^w")]:
        seq = CoherentSequence(parse_term(text, al), al)
        with ThreadPoolExecutor(3) as pool:
            values = list(pool.map(seq.at, [0, 1, 0, 1]))
        assert values[0] == values[2] and values[1] == values[3]
        seq.fill()
        assert seq.coherent()


def test_refines():
    contains_b = compile_formula(parse("ex x. P_b(x)", AB), AB)
    assert refines(build_sk("ab", 1), contains_b)
    assert not refines(build_sk("a", 2), fixture_dfas()["even-length-a"])
    assert refines(build_sk("ab", 0), fixture_dfas()["sigma-star"])


def test_refinement_reports():
    for name, A in fixture_dfas().items():
        r = refinement_report(A)
        assert r.passed, name
        assert r.downgraded == (r.k > 2)


def test_member_closure_examples():
    even = fixture_dfas()["even-length-a"]
    assert member_closure(even, parse_term("(a)^w", "a"))
    contains_b = compile_formula(parse("ex x. P_b(x)", AB), AB)
    m = membership(contains_b, parse_term("a^w", "ab"))
    assert not m.result and m.via == "S_1"
    assert member_closure(contains_b, parse_term("a^w b", "ab"))
    with pytest.raises(ResourceError):
        member_closure(even, parse_term("a", "a"), allow_syntactic=False)


def test_member_closure_on_finite_words():
    for A in fixture_dfas().values():
        from msokit.automata import accepts
        for v in all_words(A.base, 5, 1):
            assert member_closure(A, parse_term(str(v), A.base)) == accepts(A, v)


def test_omega_in_syntactic_and_type_monoid_agree_when_refining():
    contains_b = compile_formula(parse("ex x. P_b(x)", AB), AB)
    for text in ["a^w", "b^w", "(ab)^w", "a^w b a^w"]:
        t = parse_term(text, "ab")
        via_type = membership(contains_b, t)
        assert via_type.via == "S_1"
        assert via_type.result == ("b" in text)
