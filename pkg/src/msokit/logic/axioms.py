"""The finite fragment of the word theory that gets materialised.

The structural axioms are fixed sentences; the comprehension schema is represented
only by its instances for a supplied corpus of formulas.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from ..words import Alphabet
from .ast import Formula, Var, free_vars
from .syntax import parse
from .transform import comprehension_instance, qd


class Axiom(NamedTuple):
    name: str
    sentence: Formula


_BOOLEAN_ALGEBRA = [
    # atomic Boolean algebra under <=, phrased as a field of sets on the atoms
    ("ba.reflexive", "all X. X <= X"),
    ("ba.antisymmetric", "all X. all Y. X <= Y & Y <= X -> X = Y"),
    ("ba.transitive", "all X. all Y. all Z. X <= Y & Y <= Z -> X <= Z"),
    ("ba.atoms", "all X. at(X) <-> !X = empty & (all Y. Y <= X -> Y = empty | Y = X)"),
    ("ba.atomic", "all X. !X = empty -> (ex u. u <= X)"),
    ("ba.extensional", "all X. all Y. (all u. u <= X <-> u <= Y) -> X = Y"),
    ("ba.order-by-atoms", "all X. all Y. X <= Y <-> (all u. u <= X -> u <= Y)"),
    ("ba.unions", "all X. all Y. ex Z. all u. u <= Z <-> u <= X | u <= Y"),
    ("ba.complements", "all X. ex Y. all u. u <= Y <-> !u <= X"),
    ("bottom", "all X. empty <= X"),
    # atoms linearly ordered by <
    ("order.irreflexive", "all x. !x < x"),
    ("order.transitive", "all x. all y. all z. x < y & y < z -> x < z"),
    ("order.total", "all x. all y. x < y | x = y | y < x"),
    # discrete with endpoints; endpoints only demanded when an atom exists
    ("discrete.first", "(ex x. true) -> (ex x. all y. y = x | x < y)"),
    ("discrete.last", "(ex x. true) -> (ex x. all y. y = x | y < x)"),
    ("discrete.successor", "all x. (ex y. x < y) -> (ex y. x < y & (all z. x < z -> z = y | y < z))"),
    ("discrete.predecessor", "all x. (ex y. y < x) -> (ex y. y < x & (all z. z < x -> z = y | z < y))"),
    # every non-bottom element lies above a least atom
    ("least-atom", "all X. !X = empty -> (ex x. X(x) & (all y. X(y) -> y = x | x < y))"),
    # the exists-earlier relation is determined by atoms
    ("bridge", "all X. all Y. X < Y <-> (ex x. ex y. X(x) & Y(y) & x < y)"),
]


def _partition_axioms(alphabet: Alphabet) -> list[tuple[str, str]]:
    syms = alphabet.symbols
    out = [("labels.cover", "all x. " + " | ".join(f"P_{s}(x)" for s in syms))]
    for i, s in enumerate(syms):
        for t in syms[i + 1:]:
            out.append((f"labels.disjoint.{s}.{t}", f"all x. !(P_{s}(x) & P_{t}(x))"))
    for s in syms:
        out.append((f"labels.on-atoms.{s}", f"all X. P_{s}(X) -> at(X)"))
    return out


def tmso_axioms(alphabet: "Alphabet | str", comprehension_qd_cap: int = 1,
                corpus: Sequence[Formula] = ()) -> list[Axiom]:
    """The structural axioms plus comprehension instances for ``corpus``.

    A corpus formula contributes an instance when it has exactly one free
    atom variable, or a free variable named ``x`` (the remaining free
    variables become parameters), and its depth is at most the cap.
    """
    alphabet = Alphabet.of(alphabet)
    axioms = [Axiom(name, parse(text, alphabet))
              for name, text in _BOOLEAN_ALGEBRA + _partition_axioms(alphabet)]
    for i, phi in enumerate(corpus):
        if qd(phi) > comprehension_qd_cap:
            continue
        x = _distinguished(phi)
        if x is None:
            continue
        axioms.append(Axiom(f"comprehension[{i}]", comprehension_instance(phi, x)))
    return axioms


def _distinguished(phi: Formula):
    fv = free_vars(phi)
    if Var("x") in fv:
        return Var("x")
    atoms = sorted((v for v in fv if v.is_atom), key=lambda v: v.name)
    return atoms[0] if atoms else None
