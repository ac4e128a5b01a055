"""Formulas: syntax, rewriting and the axiom fragment."""

from .ast import (
    BOTTOM, FALSE, TRUE, And, At, Before, Bottom, Const, Eq, Exists, Forall, Formula, Iff,
    Implies, IsP, Mem, Not, Or, Sub, Var, bound_vars, conj, disj, free_vars, is_sentence,
    subformulas, var_names,
)
from .axioms import Axiom, tmso_axioms
from .syntax import ParseError, parse, render
from .transform import (
    PLUS_QD_OVERHEAD, comprehension_instance, desugar, plus, plus_qd_overhead, qd, relativize,
    rename_free,
)
