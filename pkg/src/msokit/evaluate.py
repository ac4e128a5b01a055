"""Brute-force model checking over finite structures.

This is the ground truth that the automaton compiler is tested against, so it
stays deliberately naive: quantifiers enumerate the whole universe (atoms
only, for lowercase variables) in element order, connectives short-circuit,
nothing is cached between calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .caps import get_caps
from .errors import InputError, ResourceError
from .logic.ast import (
    Before, Bottom, Const, Eq, Exists, Forall, Formula, Iff, Implies, IsP, Mem, Not, Or, And,
    At, Sub, Var, free_vars,
)
from .logic.axioms import Axiom, tmso_axioms
from .logic.transform import qd
from .words import MsoStructure, Structure, Word, mso

_UNSET = object()


def _check_size(S: Structure, f: Formula):
    caps = get_caps()
    limit = caps.positions if qd(f) <= 1 else caps.eval_positions_deep
    n = S.n if isinstance(S, MsoStructure) else (S.size - 1).bit_length()
    if n > limit:
        raise ResourceError(f"structure with {n} positions exceeds the evaluation cap {limit} "
                            f"for formulas of depth {qd(f)}")


def evaluate(S: Structure, f: Formula, assignment: Optional[Mapping] = None) -> bool:
    """Truth of ``f`` in ``S`` under ``assignment`` (variable or name -> element)."""
    env = {}
    for key, value in (assignment or {}).items():
        var = key if isinstance(key, Var) else Var(key)
        if var.is_atom and not S.is_atom(value):
            raise InputError(f"atom variable {var.name} assigned the non-atom {S.element_str(value)}")
        env[var.name] = value
    missing = sorted(v.name for v in free_vars(f) if v.name not in env)
    if missing:
        raise InputError("unbound variables: " + ", ".join(missing))
    _check_size(S, f)
    return _compile(f, S)(env)


def _term(t, S: Structure):
    if isinstance(t, Bottom):
        bot = S.bottom
        return lambda env: bot
    name = t.name
    return lambda env: env[name]


def _compile(f: Formula, S: Structure):
    if isinstance(f, Const):
        value = f.value
        return lambda env: value
    if isinstance(f, (Eq, Sub, Before)):
        left, right = _term(f.left, S), _term(f.right, S)
        if isinstance(f, Eq):
            return lambda env: left(env) == right(env)
        rel = S.sub if isinstance(f, Sub) else S.before
        return lambda env: rel(left(env), right(env))
    if isinstance(f, Mem):
        el, st = _term(f.element, S), _term(f.set, S)
        sub = S.sub
        return lambda env: sub(el(env), st(env))
    if isinstance(f, At):
        t = _term(f.term, S)
        is_atom = S.is_atom
        return lambda env: is_atom(t(env))
    if isinstance(f, IsP):
        t = _term(f.term, S)
        sigma = S.alphabet.index(f.symbol)
        has_label = S.has_label
        return lambda env: has_label(sigma, t(env))
    if isinstance(f, Not):
        body = _compile(f.body, S)
        return lambda env: not body(env)
    if isinstance(f, (And, Or, Implies, Iff)):
        left, right = _compile(f.left, S), _compile(f.right, S)
        if isinstance(f, And):
            return lambda env: left(env) and right(env)
        if isinstance(f, Or):
            return lambda env: left(env) or right(env)
        if isinstance(f, Implies):
            return lambda env: (not left(env)) or right(env)
        return lambda env: left(env) == right(env)
    if isinstance(f, (Exists, Forall)):
        body = _compile(f.body, S)
        name = f.var.name
        domain = S.atoms if f.var.is_atom else S.elements
        want = isinstance(f, Exists)

        def quantifier(env):
            saved = env.get(name, _UNSET)
            try:
                for e in domain:
                    env[name] = e
                    if body(env) == want:
                        return want
                return not want
            finally:
                if saved is _UNSET:
                    env.pop(name, None)
                else:
                    env[name] = saved

        return quantifier
    raise TypeError(f"not a formula: {f!r}")


@dataclass
class AxiomReport:
    results: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.results)

    def failures(self) -> list[str]:
        return [name for name, ok in self.results if not ok]

    def render(self) -> str:
        lines = [f"{'pass' if ok else 'FAIL'}  {name}" for name, ok in self.results]
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def check_axioms(target: "Word | Structure", comprehension_corpus: Sequence[Formula] = (),
                 comprehension_qd_cap: int = 1) -> AxiomReport:
    S = mso(target) if isinstance(target, Word) else target
    if isinstance(S, MsoStructure) and S.n > 5:
        raise ResourceError(f"check_axioms is limited to words of length <= 5 (got {S.n})")
    report = AxiomReport()
    for ax in tmso_axioms(S.alphabet, comprehension_qd_cap, comprehension_corpus):
        report.results.append((ax.name, evaluate(S, ax.sentence)))
    return report
