"""Deterministic formula corpora for the property checks."""

from __future__ import annotations

import random
from functools import lru_cache

from .logic.ast import (
    BOTTOM, FALSE, TRUE, And, At, Before, Eq, Exists, Forall, Formula, Iff, Implies, IsP, Mem,
    Not, Or, Sub, Var, free_vars,
)
from .logic.syntax import parse, render
from .logic.transform import qd
from .words import Alphabet

SET_VARS = ("X", "Y")
ATOM_VARS = ("x", "y")

HAND_SENTENCES = (
    "true",
    "ex x. P_a(x)",
    "all x. P_a(x)",
    "ex x. ex y. x < y & P_a(x) & P_b(y)",
    "ex x. all y. y = x | y < x & P_b(x)",
    "ex x. (all y. !y < x) & P_a(x)",
    "all x. all y. x < y -> !(P_b(x) & P_b(y))",
    "ex X. !X = empty & (all x. X(x) -> P_a(x))",
    "ex X. ex Y. X < Y & Y < X",
    "ex X. ex Y. !X = Y & X <= Y & at(X)",
    "all X. X <= X",
    "ex X. X < X",
    "ex X. !X < X & !X = empty",
    "all X. at(X) -> (P_a(X) | P_b(X))",
    "ex X. (all x. X(x) <-> P_a(x)) & (ex Y. Y < X)",
    "!(ex x. true)",
    "ex x. ex y. !x = y & (all X. X(x) -> X(y))",
    "ex x. ex y. x < y & P_a(x) & P_a(y)",
    "ex x. P_a(x) & (all y. y < x -> P_b(y))",
    "all x. P_a(x) -> (ex y. x < y & P_b(y))",
    "ex x. ex y. x < y & P_a(x) & P_b(y) & (all z. !(x < z & z < y))",
    "all x. all y. x < y & (all z. !(x < z & z < y)) -> !(P_a(x) & P_a(y))",
    "ex X. (all x. X(x) -> P_b(x)) & (all x. P_b(x) -> X(x)) & !X = empty",
)

HAND_COMPREHENSION = (
    "P_a(x)",
    "P_b(x)",
    "ex y. x < y",
    "ex y. y < x & P_b(y)",
    "all y. y < x -> P_a(y)",
    "x < x",
    "ex Y. Y < x & at(Y)",
    "!x = empty",
)


def _terms(scope: list[Var]) -> list:
    return [BOTTOM] + scope


def _atomic(rng: random.Random, alphabet: Alphabet, scope: list[Var]) -> Formula:
    terms = _terms(scope)
    atoms_in_scope = [v for v in scope if v.is_atom]
    sets_in_scope = [v for v in scope if not v.is_atom]
    kind = rng.choice(["eq", "sub", "before", "before", "before", "at",
                       "label", "label", "label", "mem", "mem"])
    if kind == "mem" and atoms_in_scope and sets_in_scope:
        return Mem(rng.choice(atoms_in_scope), rng.choice(sets_in_scope))
    if kind == "label" and scope:
        return IsP(rng.choice(alphabet.symbols), rng.choice(scope))
    if kind == "at" and scope:
        return At(rng.choice(scope))
    if not scope:
        return rng.choice([TRUE, FALSE])
    left = rng.choice(scope)
    right = rng.choice(terms) if rng.random() < 0.3 else rng.choice(scope)
    if rng.random() < 0.5:
        left, right = right, left
    return {"eq": Eq, "sub": Sub, "before": Before}.get(kind, Before)(left, right)


def _formula(rng, alphabet, scope, depth, size) -> Formula:
    free = [Var(n) for n in SET_VARS + ATOM_VARS if Var(n) not in scope]
    r = rng.random()
    if size <= 1 or (r < 0.3 and scope):
        return _atomic(rng, alphabet, scope)
    if depth > 0 and free and (r < 0.7 or not scope):
        v = rng.choice(free)
        body = _formula(rng, alphabet, scope + [v], depth - 1, size - 1)
        return (Exists if rng.random() < 0.55 else Forall)(v, body)
    if r < 0.75:
        return Not(_formula(rng, alphabet, scope, depth, size - 1))
    op = rng.choice([And, And, Or, Or, Implies, Iff])
    half = (size - 1) // 2
    return op(_formula(rng, alphabet, scope, depth, half),
              _formula(rng, alphabet, scope, depth, size - 1 - half))


def _prenex(rng, alphabet, depth) -> Formula:
    """Quantifier prefix over distinct variables, then a small Boolean body."""
    names = list(SET_VARS[:1] + ATOM_VARS) if depth == 3 else list(SET_VARS + ATOM_VARS)
    rng.shuffle(names)
    scope = [Var(n) for n in names[:depth]]
    parts = [_atomic(rng, alphabet, scope) for _ in range(rng.randint(2, 4))]
    parts = [Not(p) if rng.random() < 0.3 else p for p in parts]
    body = parts[0]
    for p in parts[1:]:
        body = rng.choice([And, Or, Implies, Iff])(body, p)
    for v in reversed(scope):
        body = (Exists if rng.random() < 0.6 else Forall)(v, body)
    return body


@lru_cache(maxsize=None)
def sentence_corpus(count: int = 200, seed: int = 0, alphabet: str = "ab") -> tuple[Formula, ...]:
    """Hand-picked sentences followed by ``count`` distinct generated ones.

    Quantifier depth is at most 3 and at most two set variables occur.
    """
    al = Alphabet.of(alphabet)
    out = [parse(t, al) for t in HAND_SENTENCES]
    seen = {render(f) for f in out}
    rng = random.Random(seed)
    quotas = {1: count * 3 // 10, 2: count * 7 // 20}
    quotas[3] = count - quotas[1] - quotas[2]
    for depth, quota in quotas.items():
        made = 0
        while made < quota:
            if made % 2:
                f = _prenex(rng, al, depth)
            else:
                f = _formula(rng, al, [], depth, rng.randint(2 + 2 * depth, 6 + 3 * depth))
            text = render(f)
            if free_vars(f) or text in seen or qd(f) != depth:
                continue
            seen.add(text)
            out.append(f)
            made += 1
    return tuple(out)


@lru_cache(maxsize=None)
def comprehension_corpus(count: int = 24, seed: int = 1, alphabet: str = "ab") -> tuple[Formula, ...]:
    """Formulas with the atom variable ``x`` free and depth at most 1."""
    al = Alphabet.of(alphabet)
    out = [parse(t, al) for t in HAND_COMPREHENSION]
    seen = {render(f) for f in out}
    rng = random.Random(seed)
    x = Var("x")
    while len(out) < len(HAND_COMPREHENSION) + count:
        f = _formula(rng, al, [x], 1, rng.randint(2, 6))
        text = render(f)
        if free_vars(f) != {x} or text in seen or qd(f) > 1:
            continue
        seen.add(text)
        out.append(f)
    return tuple(out)


@lru_cache(maxsize=None)
def plus_pairs(count: int = 50, seed: int = 2, alphabet: str = "ab") -> tuple[tuple[Formula, Formula], ...]:
    """Sentence pairs (depth at most 2) for the concatenation checks."""
    pool = [f for f in sentence_corpus(alphabet=alphabet) if qd(f) <= 2]
    rng = random.Random(seed)
    pairs = []
    seen = set()
    while len(pairs) < count:
        a, b = rng.choice(pool), rng.choice(pool)
        key = (render(a), render(b))
        if key in seen:
            continue
        seen.add(key)
        pairs.append((a, b))
    return tuple(pairs)
