import itertools
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from msokit.corpus import sentence_corpus
from msokit.ef import (
    Mismatch, SpoilerMove, ef_witness, equiv_k, project, render_strategy, replay, tp,
    type_product, word_type,
)
from msokit.errors import ResourceError
from msokit.evaluate import evaluate
from msokit.logic import qd
from msokit.words import Alphabet, Word, all_words, mso, oplus

AB = Alphabet.of("ab")
UNARY = Alphabet.of("a")


def u(n):
    return Word.parse(UNARY, "a" * n)


def w(s):
    return Word.parse(AB, s)


def test_spec_examples():
    assert equiv_k(u(2), u(2), 1)
    assert not equiv_k(u(1), u(2), 1)
    assert equiv_k(u(2), u(3), 1)
    assert tp(mso(u(1)), (), 1) is not tp(mso(u(2)), (), 1)


def test_depth_zero_is_trivial():
    types = {word_type(v, 0) for v in all_words(AB, 4)}
    assert len(types) == 1


def test_isomorphism_invariance_via_products():
    # mso(w) (x) mso(v) is isomorphic to mso(wv), so the types must coincide
    for a, b in [("", ""), ("a", "b"), ("ab", "a"), ("b", "ba")]:
        P = oplus(mso(w(a)), mso(w(b)))
        for k in (0, 1, 2):
            assert tp(P, (), k) is word_type(w(a + b), k)


def test_witness_first_move():
    s = ef_witness(u(1), u(2), 1)
    assert isinstance(s, SpoilerMove)
    assert s.side == 2 and s.element == 0b11
    assert replay(s, mso(u(1)), mso(u(2)), 1)
    text = render_strategy(s, mso(u(1)), mso(u(2)))
    assert text.startswith("Spoiler plays X1 = {0,1} in M2")
    assert ef_witness(u(2), u(3), 1) is None


def test_witnesses_replay_exhaustively():
    words = list(all_words(AB, 3))
    for k in (1, 2):
        for a, b in itertools.combinations(words, 2):
            s = ef_witness(a, b, k)
            assert (s is None) == equiv_k(a, b, k)
            if s is not None:
                assert replay(s, mso(a), mso(b), k)


def test_replay_rejects_tampered_strategy():
    s = ef_witness(u(1), u(2), 1)
    broken = SpoilerMove(s.side, s.element, s.replies[:-1])
    assert not replay(broken, mso(u(1)), mso(u(2)), 1)
    fake = SpoilerMove(2, 0b01, tuple((d, Mismatch("at(X1)", 1)) for d in (0, 1)))
    assert not replay(fake, mso(u(1)), mso(u(2)), 1)


def test_monotone_refinement():
    words = list(all_words(AB, 4))
    for a, b in itertools.combinations(words, 2):
        if equiv_k(a, b, 2):
            assert equiv_k(a, b, 1)
        if equiv_k(a, b, 1):
            assert equiv_k(a, b, 0)


def test_projection_matches_direct():
    for v in all_words(AB, 3):
        t2 = word_type(v, 2)
        assert project(t2, 1) is word_type(v, 1)
        assert project(t2, 0) is word_type(v, 0)
    S = mso(w("ab"))
    assert project(tp(S, (0b01,), 2), 1) is tp(S, (0b01,), 1)


def test_sentence_agreement():
    corpus = [f for f in sentence_corpus() if qd(f) <= 1]
    groups = {}
    for v in all_words(AB, 4):
        groups.setdefault(word_type(v, 1), []).append(v)
    for members in groups.values():
        for f in corpus:
            assert len({evaluate(mso(v), f) for v in members}) == 1


def test_prefix_recurrence():
    for k in (0, 1, 2):
        for v in all_words(AB, 5 if k < 2 else 4):
            for i in range(1, len(v) + 1):
                lhs = word_type(v[:i], k)
                rhs = type_product(word_type(v[:i - 1], k), word_type(v[i - 1:i], k), AB)
                assert lhs is rhs


@settings(max_examples=40, deadline=None)
@given(st.text("ab", max_size=4), st.text("ab", max_size=4), st.integers(0, 1))
def test_type_product_matches_concatenation(a, b, k):
    assert type_product(word_type(w(a), k), word_type(w(b), k), AB) is word_type(w(a + b), k)


def test_caps():
    with pytest.raises(ResourceError):
        word_type(u(9), 2)
    with pytest.raises(ResourceError):
        word_type(u(2), 4)
    with pytest.raises(ResourceError):
        equiv_k(u(6), u(6), 3)


def test_canonical_form_and_threads():
    words = [u(n) for n in range(7)]
    with ThreadPoolExecutor(4) as pool:
        first = list(pool.map(lambda v: word_type(v, 1), words))
        second = list(pool.map(lambda v: word_type(v, 1), words))
    assert all(a is b for a, b in zip(first, second))
    assert first[2].canonical_bytes() == first[5].canonical_bytes()
    assert first[1].canonical_bytes() != first[2].canonical_bytes()
