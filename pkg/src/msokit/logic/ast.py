"""Formula trees for the signature {<=, <, At, bottom, P_sigma}.

Variables carry their sort in the case of their first letter: uppercase names
range over all elements (set variables), lowercase names over atoms only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class Var:
    name: str

    @property
    def is_atom(self) -> bool:
        return self.name[0].islower()

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Bottom:
    def __str__(self):
        return "empty"


BOTTOM = Bottom()
Term = Union[Var, Bottom]


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        from .syntax import render

        return render(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Formula):
    """left <= right"""
    left: Term
    right: Term


@dataclass(frozen=True)
class Before(Formula):
    """left < right: some position of left precedes some position of right."""
    left: Term
    right: Term


@dataclass(frozen=True)
class At(Formula):
    term: Term


@dataclass(frozen=True)
class IsP(Formula):
    symbol: str
    term: Term


@dataclass(frozen=True)
class Mem(Formula):
    """``S(e)`` sugar for ``e <= S``; removed by desugar."""
    element: Term
    set: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    body: Formula


ATOMIC = (Const, Eq, Sub, Before, At, IsP, Mem)
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Exists, Forall)


def terms_of(f: Formula) -> tuple:
    if isinstance(f, (Eq, Sub, Before)):
        return (f.left, f.right)
    if isinstance(f, (At, IsP)):
        return (f.term,)
    if isinstance(f, Mem):
        return (f.element, f.set)
    return ()


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def exists(names, body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Exists(name if isinstance(name, Var) else Var(name), body)
    return body


def forall(names, body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Forall(name if isinstance(name, Var) else Var(name), body)
    return body


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from subformulas(f.body)


def free_vars(f: Formula) -> frozenset[Var]:
    if isinstance(f, ATOMIC):
        return frozenset(t for t in terms_of(f) if isinstance(t, Var))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def bound_vars(f: Formula) -> frozenset[Var]:
    return frozenset(g.var for g in subformulas(f) if isinstance(g, QUANTIFIERS))


def var_names(f: Formula) -> set[str]:
    names = {v.name for v in bound_vars(f)}
    for g in subformulas(f):
        names.update(t.name for t in terms_of(g) if isinstance(t, Var))
    return names


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def symbols_used(f: Formula) -> set[str]:
    return {g.symbol for g in subformulas(f) if isinstance(g, IsP)}


def fresh_name(base: str, used: set[str]) -> str:
    """``base`` if unused, else ``base1``, ``base2``, ..."""
    if base not in used:
        return base
    i = 1
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"
