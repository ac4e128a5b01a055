"""The acceptance suite, runnable as ``msokit selftest``.

Each check returns a ``Result``; ``run`` prints one line per check in a fixed
order. Sampling is driven by ``random.Random(seed)`` so runs are repeatable.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import duality
from .automata import (
    accepts, compile_formula, fixture_dfas, lang_concat, language,
)
from .corpus import comprehension_corpus, plus_pairs, sentence_corpus
from .ef import word_type
from .evaluate import check_axioms, evaluate
from .logic import plus
from .logic.ast import BOTTOM, At, Before, Eq, IsP, Sub
from .monoid import (
    CoherentSequence, build_sk, class_of, hom_eval, membership, parent, parse_term,
    refinement_report,
)
from .words import Alphabet, Word, all_words, mso, union_iso


@dataclass(frozen=True)
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} [{self.number}] {self.name}: {self.detail} ({self.seconds:.1f}s, limit {self.limit:.0f}s)"


def _timed(number: int, name: str, limit: float, body: Callable[[], tuple[bool, str]]) -> Result:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    if elapsed > limit:
        ok = False
        detail += "; over the time limit"
    return Result(number, name, ok, detail, elapsed, limit)


AB = Alphabet.of("ab")
UNARY = Alphabet.of("a")


# ---------------------------------------------------------------------------
# 1


def check_oracle_equivalence(seed: int = 0) -> tuple[bool, str]:
    corpus = sentence_corpus()
    words = list(all_words(AB, 4))
    structures = [mso(w) for w in words]
    checked = agree = 0
    for phi in corpus:
        A = compile_formula(phi, AB)
        for w, S in zip(words, structures):
            checked += 1
            agree += accepts(A, w) == evaluate(S, phi)
    return agree == checked, f"{len(corpus)} sentences x {len(words)} words, {agree}/{checked} agree"


# 2


def _classes(alphabet: Alphabet, k: int, max_len: int) -> dict:
    groups: dict = {}
    for w in all_words(alphabet, max_len):
        groups.setdefault(word_type(w, k), []).append(w)
    return groups


def _quadruples(rng: random.Random, alphabet: Alphabet, k: int, max_len: int, total_cap: int,
                count: int) -> list:
    groups = _classes(alphabet, k, max_len)
    pairs = [(w, v) for g in groups.values() for w in g for v in g]
    quads = [(p, q) for p in pairs for q in pairs
             if len(p[0]) + len(q[0]) <= total_cap and len(p[1]) + len(q[1]) <= total_cap]
    return [rng.choice(quads) for _ in range(count)]


def check_congruence(seed: int = 0, count: int = 200) -> tuple[bool, str]:
    rng = random.Random(seed)
    configs = [(UNARY, 1, 5, 10), (AB, 1, 5, 10), (UNARY, 2, 8, 8)]
    parts = []
    ok_all = True
    for alphabet, k, max_len, cap in configs:
        good = nontrivial = 0
        for (w1, v1), (w2, v2) in _quadruples(rng, alphabet, k, max_len, cap, count):
            nontrivial += (w1 != v1) or (w2 != v2)
            good += word_type(w1 + w2, k) is word_type(v1 + v2, k)
        ok_all &= good == count
        parts.append(f"|Σ|={len(alphabet)} k={k}: {good}/{count} ({nontrivial} nontrivial)")
    return ok_all, "; ".join(parts)


# 3


def atomic_sentence_profile(w: Word) -> tuple:
    """Truth values of every unnested atomic sentence (only the term bottom)."""
    S = mso(w)
    b = BOTTOM
    sentences = [Eq(b, b), Sub(b, b), Before(b, b), At(b)] + [IsP(s, b) for s in w.alphabet]
    return tuple(evaluate(S, f) for f in sentences)


def one_round_profile(w: Word) -> frozenset:
    """The set of atomic types of single elements next to bottom, from scalar relations."""
    S = mso(w)
    bot = S.bottom
    out = set()
    for c in S.elements:
        terms = (bot, c)
        facts = [S.is_atom(c)] + [S.has_label(s, c) for s in range(len(S.alphabet))]
        facts += [rel(x, y) for x in terms for y in terms for rel in (S.sub, S.before)]
        facts.append(c == bot)
        out.add(tuple(facts))
    return frozenset(out)


def check_type_monoids(seed: int = 0, count: int = 200) -> tuple[bool, str]:
    rng = random.Random(seed)
    notes = []
    ok = True
    # oracles first
    for alphabet in (UNARY, AB):
        profiles = {atomic_sentence_profile(w) for w in all_words(alphabet, 3)}
        ok &= len(profiles) == 1
    unary_classes: dict = {}
    for w in all_words(UNARY, 6):
        unary_classes.setdefault(one_round_profile(w), []).append(str(w))
    oracle_reps = sorted((min(g, key=len) for g in unary_classes.values()), key=len)
    ok &= oracle_reps == ["", "a", "aa"]
    notes.append(f"oracle: S_0 trivial, unary S_1 reps {oracle_reps}")

    sizes = {(a, 0): build_sk(a, 0).size for a in ("a", "ab")}
    ok &= all(s == 1 for s in sizes.values())
    S1 = build_sk(UNARY, 1)
    ok &= S1.size == 3 and [str(w) for w in S1.reps] == ["", "a", "aa"]
    notes.append(f"|S_0| = 1 for both, unary S_1 = {[str(w) for w in S1.reps]}")

    hom_ok = 0
    configs = [(UNARY, 1, 6), (AB, 1, 6), (UNARY, 2, 4)]
    for alphabet, k, max_len in configs:
        M = build_sk(alphabet, k)
        words = list(all_words(alphabet, max_len))
        for _ in range(count):
            w, v = rng.choice(words), rng.choice(words)
            e = hom_eval(M, w + v)
            hom_ok += e == M.mul(hom_eval(M, w), hom_eval(M, v)) == class_of(M, w + v)
    ok &= hom_ok == count * len(configs)
    notes.append(f"hom_eval {hom_ok}/{count * len(configs)}")

    commute = total = 0
    for alphabet, k in ((UNARY, 0), (UNARY, 1), (AB, 0)):
        upper, lower = build_sk(alphabet, k + 1), build_sk(alphabet, k)
        for w in all_words(alphabet, 6):
            total += 1
            commute += parent(upper, lower, hom_eval(upper, w)) == hom_eval(lower, w)
        for x, y in itertools.product(range(upper.size), repeat=2):
            total += 1
            commute += parent(upper, lower, upper.mul(x, y)) == lower.mul(
                parent(upper, lower, x), parent(upper, lower, y))
    ok &= commute == total
    notes.append(f"parent maps {commute}/{total}")
    return ok, "; ".join(notes)


# 4


def check_concatenation(seed: int = 0, max_len: int = 6) -> tuple[bool, str]:
    words = list(all_words(AB, max_len))
    sat_cache: dict = {}

    def satisfied(phi):
        if phi not in sat_cache:
            sat_cache[phi] = {str(w) for w in words if evaluate(mso(w), phi)}
        return sat_cache[phi]

    agree = oracle_agree = 0
    pairs = plus_pairs()
    for phi, psi in pairs:
        via_plus = language(compile_formula(plus(phi, psi), AB), max_len)
        via_concat = language(lang_concat(compile_formula(phi, AB), compile_formula(psi, AB)), max_len)
        agree += via_plus == via_concat
        left, right = satisfied(phi), satisfied(psi)
        split = {str(w) for w in words
                 if any(str(w[:i]) in left and str(w[i:]) in right for i in range(len(w) + 1))}
        oracle_agree += via_plus == split
    n = len(pairs)
    return agree == n and oracle_agree == n, (
        f"{agree}/{n} pairs match the concatenated automaton, {oracle_agree}/{n} match "
        f"split enumeration, words to length {max_len}")


# 5


def check_axiom_soundness(seed: int = 0) -> tuple[bool, str]:
    corpus = comprehension_corpus()
    words = list(all_words(AB, 5))
    failures = []
    count = 0
    for w in words:
        report = check_axioms(w, corpus)
        count = len(report.results)
        failures.extend(f"{w!s}:{name}" for name in report.failures())
    return not failures, (f"{count} axioms and instances on {len(words)} words (ε included), "
                          f"{len(failures)} failures" + (f" {failures[:3]}" if failures else ""))


# 6


def check_union_iso(seed: int = 0, max_total: int = 6) -> tuple[bool, str]:
    good = total = 0
    for n in range(max_total + 1):
        for w in all_words(AB, n, n):
            for v in all_words(AB, max_total - n):
                total += 1
                good += union_iso(w, v)
    return good == total, f"{good}/{total} pairs with |w|+|v| <= {max_total}"


# 7


def check_cofinality(seed: int = 0) -> tuple[bool, str]:
    parts = []
    ok = True
    for name, A in fixture_dfas().items():
        r = refinement_report(A)
        ok &= r.passed
        note = f"{name}: k={r.k}"
        if r.downgraded:
            note += f" (checked at level {r.level}, downgraded)"
        note += f" {r.pairs} pairs, {len(r.violations)} violations"
        if r.downgraded and r.pairs == 0:
            note += f" (≈_{r.level} already separates all words to length {r.max_len})"
        parts.append(note)
    return ok, "; ".join(parts)


# 8


def check_duality(seed: int = 0) -> tuple[bool, str]:
    monoids = [("S_0(a)", build_sk("a", 0)), ("S_0(ab)", build_sk("ab", 0)),
               ("S_1(a)", build_sk("a", 1)), ("S_1(ab)", build_sk("ab", 1))]
    graph = [(n, duality.graph_check(M)) for n, M in monoids]
    trips = [(n, duality.round_trip(B).passed) for n, B in duality.fixture_algebras().items()]
    ok = all(v for _, v in graph + trips)
    g = sum(v for _, v in graph)
    t = sum(v for _, v in trips)
    return ok, f"graph_check {g}/{len(graph)}, round_trip {t}/{len(trips)}"


# 9

OMEGA_FIXTURES = (("a", "a"), ("a", "a^w"), ("ab", "a"), ("ab", "a^w"), ("ab", "(ab)^w a"))


def check_profinite(seed: int = 0, max_len: int = 6) -> tuple[bool, str]:
    ok = True
    levels = 0
    for alphabet, text in OMEGA_FIXTURES:
        seq = CoherentSequence(parse_term(text, alphabet), alphabet)
        cells = seq.fill()
        levels += len(cells)
        ok &= seq.coherent()
    for alphabet in ("a", "ab"):
        seq = CoherentSequence(parse_term("a^w", alphabet), alphabet)
        for k, e in seq.fill().items():
            M = build_sk(alphabet, k)
            ok &= M.mul(e, e) == e
    agree = total = 0
    for A in fixture_dfas().values():
        for w in all_words(A.base, max_len, 1):
            total += 1
            agree += membership(A, parse_term(str(w), A.base)).result == accepts(A, w)
    ok &= agree == total
    return ok, (f"{len(OMEGA_FIXTURES)} terms coherent over {levels} levels, a^w idempotent, "
                f"membership {agree}/{total} finite words")


CHECKS: Sequence[tuple[int, str, float, Callable]] = (
    (1, "oracle equivalence", 60, check_oracle_equivalence),
    (2, "congruence", 60, check_congruence),
    (3, "type monoids", 30, check_type_monoids),
    (4, "concatenation homomorphism", 120, check_concatenation),
    (5, "axiom soundness", 120, check_axiom_soundness),
    (6, "product isomorphism", 30, check_union_iso),
    (7, "cofinality", 60, check_cofinality),
    (8, "duality", 60, check_duality),
    (9, "profinite coherence", 60, check_profinite),
)

TOTAL_LIMIT = 600


def run(seed: int = 0, only: Optional[Sequence[int]] = None, out=print) -> list[Result]:
    results = []
    start = time.perf_counter()
    for number, name, limit, fn in CHECKS:
        if only and number not in only:
            continue
        r = _timed(number, name, limit, lambda: fn(seed))
        out(r.line())
        results.append(r)
    if not only or 10 in only:
        elapsed = time.perf_counter() - start
        passed = sum(r.passed for r in results)
        r = Result(10, "full selftest", elapsed < TOTAL_LIMIT,
                   f"{len(results)} checks completed ({passed} passed), seed {seed}", elapsed, TOTAL_LIMIT)
        out(r.line())
        results.append(r)
    return results
