"""Syntactic operations: quantifier depth, desugaring, relativisation, the
``+`` combinator and comprehension instances."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ..errors import InputError
from .ast import (
    ATOMIC, BINARY, BOTTOM, TRUE, And, At, Before, Const, Eq, Exists, Forall, Formula, Iff,
    Implies, IsP, Mem, Not, Or, Sub, Var, bound_vars, free_vars, fresh_name, terms_of, var_names,
)

# qd(plus(f, g)) <= max(qd(f), qd(g)) + PLUS_QD_OVERHEAD, tight when both are
# quantifier-free: the downward-closure prelude alone has depth 2 under the
# outer quantifier.
PLUS_QD_OVERHEAD = 3


def qd(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 0
    if isinstance(f, Not):
        return qd(f.body)
    if isinstance(f, BINARY):
        return max(qd(f.left), qd(f.right))
    if isinstance(f, (Exists, Forall)):
        return qd(f.body) + 1
    raise TypeError(f"not a formula: {f!r}")


def _map_terms(f: Formula, fn) -> Formula:
    """Apply ``fn`` to every term of an atomic formula."""
    if isinstance(f, Const):
        return f
    if isinstance(f, (Eq, Sub, Before)):
        return type(f)(fn(f.left), fn(f.right))
    if isinstance(f, At):
        return At(fn(f.term))
    if isinstance(f, IsP):
        return IsP(f.symbol, fn(f.term))
    if isinstance(f, Mem):
        return Mem(fn(f.element), fn(f.set))
    raise TypeError(f)


def rename_free(f: Formula, old: Var, new: Var) -> Formula:
    """Replace free occurrences of ``old`` by ``new``. ``new`` must not be bound in ``f``."""
    if isinstance(f, ATOMIC):
        return _map_terms(f, lambda t: new if t == old else t)
    if isinstance(f, Not):
        return Not(rename_free(f.body, old, new))
    if isinstance(f, BINARY):
        return type(f)(rename_free(f.left, old, new), rename_free(f.right, old, new))
    if isinstance(f, (Exists, Forall)):
        if f.var == old:
            return f
        return type(f)(f.var, rename_free(f.body, old, new))
    raise TypeError(f)


def desugar(f: Formula) -> Formula:
    """Eliminate atom-variable quantifiers and ``X(x)`` sugar.

    ``ex x. g`` becomes ``ex X. (at(X) & g[X/x])`` and ``all x. g`` becomes
    ``all X. (at(X) -> g[X/x])``; the new set variable is the uppercase form
    of ``x`` made fresh against every name in the input. Free atom variables
    are left alone since renaming them would change the formula's interface.
    """
    used = var_names(f)
    return _desugar(f, used)


def _desugar(f: Formula, used: set[str]) -> Formula:
    if isinstance(f, Mem):
        return Sub(f.element, f.set)
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(_desugar(f.body, used))
    if isinstance(f, BINARY):
        return type(f)(_desugar(f.left, used), _desugar(f.right, used))
    if isinstance(f, (Exists, Forall)):
        if not f.var.is_atom:
            return type(f)(f.var, _desugar(f.body, used))
        base = f.var.name[0].upper() + f.var.name[1:]
        new = Var(fresh_name(base, used))
        used.add(new.name)
        body = _desugar(rename_free(f.body, f.var, new), used)
        if isinstance(f, Exists):
            return Exists(new, And(At(new), body))
        return Forall(new, Implies(At(new), body))
    raise TypeError(f)


def relativize(f: Formula, bound: Var) -> Formula:
    """Restrict every quantifier of ``f`` to elements below ``bound``."""
    if bound in free_vars(f):
        raise InputError(f"{bound.name} is free in the formula being relativised")
    if bound in bound_vars(f):
        raise InputError(f"relativising to {bound.name} would be captured by a quantifier over it")
    return _relativize(f, bound)


def _relativize(f: Formula, bound: Var) -> Formula:
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(_relativize(f.body, bound))
    if isinstance(f, BINARY):
        return type(f)(_relativize(f.left, bound), _relativize(f.right, bound))
    body = _relativize(f.body, bound)
    guard = Sub(f.var, bound)
    if isinstance(f, Exists):
        return Exists(f.var, And(guard, body))
    return Forall(f.var, Implies(guard, body))


def downward_closed(X: Var, used: set[str]) -> Formula:
    """dwcl(X): all y. all z. ((X(y) & z < y) -> X(z))"""
    y = Var(fresh_name("y", used))
    used.add(y.name)
    z = Var(fresh_name("z", used))
    used.add(z.name)
    return Forall(y, Forall(z, Implies(And(Mem(y, X), Before(z, y)), Mem(z, X))))


def complement_of(W: Var, X: Var, used: set[str]) -> Formula:
    """W is the complement of X: all u. (at(u) -> (u <= W <-> !u <= X))"""
    u = Var(fresh_name("u", used))
    used.add(u.name)
    return Forall(u, Implies(At(u), Iff(Sub(u, W), Not(Sub(u, X)))))


def plus(phi: Formula, psi: Formula) -> Formula:
    """The sentence true in mso(w) iff w splits as uv with u |= phi, v |= psi.

    ex X. (dwcl(X) & phi|X & ex W. (W = complement of X & psi|W))
    """
    for g in (phi, psi):
        if free_vars(g):
            names = ", ".join(sorted(v.name for v in free_vars(g)))
            raise InputError(f"plus expects sentences; free variables: {names}")
    used = var_names(phi) | var_names(psi)
    X = Var(fresh_name("X", used))
    used.add(X.name)
    W = Var(fresh_name("W", used))
    used.add(W.name)
    dwcl = downward_closed(X, used)
    cmpl = complement_of(W, X, used)
    return Exists(X, And(And(dwcl, relativize(phi, X)),
                         Exists(W, And(cmpl, relativize(psi, W)))))


def plus_qd_overhead() -> int:
    return PLUS_QD_OVERHEAD


def comprehension_instance(phi: Formula, x: Var, params: Optional[Sequence[Var]] = None) -> Formula:
    """all params. ex Z. all x. (Z(x) <-> phi)"""
    if not x.is_atom:
        raise InputError(f"distinguished variable {x.name} must be an atom variable")
    fv = free_vars(phi)
    if x not in fv:
        raise InputError(f"{x.name} is not free in the comprehension formula")
    if params is None:
        params = sorted(fv - {x}, key=lambda v: v.name)
    missing = fv - {x} - set(params)
    if missing:
        raise InputError("unlisted free variables: " + ", ".join(sorted(v.name for v in missing)))
    Z = Var(fresh_name("Z", var_names(phi) | {v.name for v in params}))
    body = Exists(Z, Forall(x, Iff(Mem(x, Z), phi)))
    for v in reversed(list(params)):
        body = Forall(v, body)
    return body
