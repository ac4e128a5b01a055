import itertools

import numpy as np
import pytest

from msokit.duality import (
    FiniteBAO, RelSpace, dual_op, fixture_algebras, graph_check, graph_report, lt_algebra,
    prime_filters, prime_filters_bruteforce, round_trip,
)
from msokit.errors import InputError
from msokit.monoid import build_sk
from msokit.semigroup import FiniteMonoid

PARITY = FiniteMonoid(((0, 1), (1, 0)), 0, ())


def test_points_equal_atoms():
    for B in fixture_algebras().values():
        assert len(prime_filters(B).points) == B.atoms
    assert len(prime_filters(lt_algebra(build_sk("a", 1))).points) == 3


def test_atom_characterisation_matches_bruteforce():
    algebras = [FiniteBAO.from_function(2, lambda a, b: a & b),
                FiniteBAO.from_atom_op(2, lambda x, y: 1 << (1 - x) if x == y else 0),
                lt_algebra(PARITY),
                lt_algebra(build_sk("a", 1))]
    for B in algebras:
        filters, rel = prime_filters_bruteforce(B)
        assert len(filters) == B.atoms
        # identify each filter with the unique atom it contains
        atom_of = [next(i for i in range(B.atoms) if (1 << i) in F) for F in filters]
        mapped = {(atom_of[i], atom_of[j], atom_of[l]) for i, j, l in rel}
        assert mapped == set(prime_filters(B).relation)


def test_normality_violation():
    with pytest.raises(InputError, match="not normal.*0b1"):
        FiniteBAO.from_function(1, lambda a, b: a)


def test_additivity_violation():
    # {0,1} . x = {0,1} only for the top element: not additive
    with pytest.raises(InputError, match="not additive"):
        FiniteBAO.from_function(2, lambda a, b: 3 if a == 3 and b else 0)


def test_dual_op_laws():
    X = RelSpace(("p", "q", "r"), frozenset({(0, 1, 2), (1, 0, 2), (2, 2, 0), (2, 2, 1)}))
    B = dual_op(X)
    for b in range(B.size):
        assert B.mul(0, b) == 0 and B.mul(b, 0) == 0
    assert B.mul(0b001, 0b010) == 0b100
    # additivity is re-validated by the constructor; check one instance explicitly
    assert B.mul(0b011, 0b011) == B.mul(0b001, 0b011) | B.mul(0b010, 0b011)
    assert prime_filters(B).relation == X.relation


def test_dual_op_additivity_exhaustive_six_points():
    rel = {(x, y, (x + y) % 6) for x in range(6) for y in range(6)}
    rel |= {(x, x, 0) for x in range(6)}
    B = dual_op(RelSpace(tuple(range(6)), frozenset(rel)))
    t = B.op
    for a, b in itertools.product(range(0, 64, 7), repeat=2):
        assert np.array_equal(t[a | b], t[a] | t[b])


def test_round_trips():
    for name, B in fixture_algebras().items():
        report = round_trip(B)
        assert report.passed, (name, report.render())
    assert round_trip(FiniteBAO.from_function(1, lambda a, b: a & b)).passed


def test_lt_algebra():
    M = build_sk("ab", 1)
    B = lt_algebra(M)
    for x, y in itertools.product(range(M.size), repeat=2):
        assert B.mul(1 << x, 1 << y) == 1 << M.mul(x, y)
    unit = 1 << M.identity
    for x in range(M.size):
        assert B.mul(unit, 1 << x) == 1 << x == B.mul(1 << x, unit)


def test_graph_check():
    for al, k in [("a", 0), ("ab", 0), ("a", 1), ("ab", 1), ("a", 2)]:
        assert graph_check(build_sk(al, k))
    assert graph_check(PARITY)
    r = graph_report(build_sk("a", 1))
    assert "R_+ = graph: true" in r.render(1)


def test_graph_check_detects_non_functional():
    # two products at (0, 0): not the graph of any operation
    X = RelSpace((0, 1), frozenset({(0, 0, 0), (0, 0, 1), (1, 1, 1)}))
    B = dual_op(X)
    assert not all(len(prime_filters(B).image(x, y)) == 1 for x in range(2) for y in range(2))
