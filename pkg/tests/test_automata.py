import json
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msokit.automata import (
    Dfa, accepts, accepts_tracked, cofinal_k, compile_formula, complement, dfa_to_sentence,
    equivalent, fixture_dfas, is_empty, lang_concat, language, load_dfa, minimize, product,
    project, syntactic_monoid, transformation, universal,
)
from msokit.caps import get_caps, set_caps
from msokit.corpus import sentence_corpus
from msokit.errors import InputError, ResourceError
from msokit.evaluate import evaluate
from msokit.logic import parse
from msokit.semigroup import FiniteMonoid, idempotent_power
from msokit.words import Alphabet, Word, all_words, mso

AB = Alphabet.of("ab")
UNARY = Alphabet.of("a")

# independent oracles for the fixture languages
FIXTURE_REGEX = {
    "sigma-star": r"[ab]*",
    "even-length-a": r"(aa)*",
    "contains-ab": r"[ab]*ab[ab]*",
    "length-0-mod-3": r"(aaa)*",
    "ends-in-b": r"[ab]*b",
}


def test_fixtures_against_regex():
    for name, A in fixture_dfas().items():
        for w in all_words(A.base, 7):
            assert accepts(A, w) == bool(re.fullmatch(FIXTURE_REGEX[name], str(w))), (name, w)


def test_json_round_trip(tmp_path):
    A = fixture_dfas()["contains-ab"]
    data = A.to_json()
    assert data == {"alphabet": ["a", "b"], "states": 3, "start": 0, "accepting": [2],
                    "delta": [[1, 0], [1, 2], [2, 2]]}
    path = tmp_path / "d.json"
    path.write_text(A.dumps())
    B = load_dfa(str(path))
    assert B == A
    with pytest.raises(InputError):
        Dfa.from_json('{"alphabet": ["a"]}')
    with pytest.raises(InputError):
        load_dfa(str(tmp_path / "missing.json"))


def test_delta_is_read_only():
    A = fixture_dfas()["ends-in-b"]
    with pytest.raises(ValueError):
        A.delta[0, 0] = 1


def test_compile_agrees_with_evaluate_sample():
    words = list(all_words(AB, 4))
    for phi in sentence_corpus()[:80]:
        A = compile_formula(phi, AB)
        for w in words:
            assert accepts(A, w) == evaluate(mso(w), phi), (phi, w)


def test_compile_free_variables():
    f = parse("ex y. x < y & P_b(y)", AB)
    A = compile_formula(f, AB, free=["x"])
    w = Word.parse(AB, "abab")
    for pos in range(4):
        track = [1 if i == pos else 0 for i in range(4)]
        assert accepts_tracked(A, w, [track]) == evaluate(mso(w), f, {"x": 1 << pos})
    # x must be a singleton
    assert not accepts_tracked(A, w, [[1, 1, 0, 0]])
    with pytest.raises(InputError):
        compile_formula(f, AB)


def test_minimal_dfas_are_canonical():
    a = compile_formula(parse("ex x. ex y. x < y & P_a(x) & P_b(y)", AB), AB)
    b = compile_formula(parse("ex y. P_b(y) & (ex x. x < y & P_a(x))", AB), AB)
    assert a == b
    assert a == fixture_dfas()["contains-ab"]


def test_boolean_operations():
    A, B = fixture_dfas()["contains-ab"], fixture_dfas()["ends-in-b"]
    for op, fn in [("and", lambda p, q: p and q), ("or", lambda p, q: p or q),
                   ("implies", lambda p, q: (not p) or q), ("iff", lambda p, q: p == q),
                   ("xor", lambda p, q: p != q)]:
        C = product(A, B, op)
        for w in all_words(AB, 5):
            assert accepts(C, w) == fn(accepts(A, w), accepts(B, w))
    assert equivalent(complement(complement(A)), A)
    assert is_empty(product(A, complement(A), "and"))
    assert equivalent(universal(AB), fixture_dfas()["sigma-star"])


def test_projection_is_existential():
    f = parse("X < X & (all x. X(x) -> P_a(x))", AB)
    A = compile_formula(f, AB, free=["X"])
    P = project(A, 0)
    for w in all_words(AB, 5):
        s = str(w)
        assert accepts(P, w) == (s.count("a") >= 2)


def test_state_cap():
    prev = set_caps(get_caps().replace(dfa_states=2))
    try:
        with pytest.raises(ResourceError):
            compile_formula(parse("ex x. ex y. x < y & P_a(x) & P_b(y)", AB), AB)
    finally:
        set_caps(prev)


def test_track_cap():
    prev = set_caps(get_caps().replace(tracks=1))
    try:
        with pytest.raises(ResourceError):
            compile_formula(parse("ex X. ex Y. X < Y"), AB)
    finally:
        set_caps(prev)


def test_lang_concat():
    A, B = fixture_dfas()["even-length-a"], fixture_dfas()["length-0-mod-3"]
    C = lang_concat(A, B)
    # (aa)*(aaa)* = every length except 1
    assert language(C, 10) == {"a" * n for n in range(11) if n != 1}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(fixture_dfas())), st.sampled_from(sorted(fixture_dfas())))
def test_lang_concat_split_oracle(n1, n2):
    A, B = fixture_dfas()[n1], fixture_dfas()[n2]
    if A.base != B.base:
        return
    C = lang_concat(A, B)
    for w in all_words(A.base, 5):
        split = any(accepts(A, w[:i]) and accepts(B, w[i:]) for i in range(len(w) + 1))
        assert accepts(C, w) == split


def test_syntactic_monoid_sizes():
    sizes = {n: syntactic_monoid(A).size for n, A in fixture_dfas().items()}
    # hand-computed transition monoids of the minimal automata
    assert sizes == {"sigma-star": 1, "even-length-a": 2, "contains-ab": 5,
                     "length-0-mod-3": 3, "ends-in-b": 3}
    M = syntactic_monoid(fixture_dfas()["contains-ab"])
    assert M.check_associative() and M.check_identity()
    for w in all_words(AB, 5):
        assert M.reps[M.evaluate(w)] is not None
        assert transformation(fixture_dfas()["contains-ab"], M.reps[M.evaluate(w)]) == \
            transformation(fixture_dfas()["contains-ab"], w)


def test_idempotent_power():
    parity = FiniteMonoid(((0, 1), (1, 0)), 0, ())
    assert idempotent_power(parity, 1) == 0
    assert idempotent_power(parity, 0) == 0
    M = syntactic_monoid(fixture_dfas()["length-0-mod-3"])
    for x in range(M.size):
        e = idempotent_power(M, x)
        assert M.mul(e, e) == e


def test_dfa_to_sentence_round_trip():
    for name, A in fixture_dfas().items():
        f, k = dfa_to_sentence(A)
        assert equivalent(compile_formula(f, A.base), A), name
        n = minimize(A).states
        assert k == (0 if n == 1 else n + 3)
        assert cofinal_k(A) == k


def test_dfa_to_sentence_evaluates_correctly():
    A = fixture_dfas()["even-length-a"]
    f, _ = dfa_to_sentence(A)
    for n in range(5):
        assert evaluate(mso(Word.parse(UNARY, "a" * n)), f) == (n % 2 == 0)
