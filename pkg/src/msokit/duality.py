"""Finite Boolean algebras with a binary operator, and their dual relational spaces.

Every finite Boolean algebra is the powerset of its atoms, so carriers are
bitmasks over ``n`` atoms and the operator is an ``2^n x 2^n`` table. The
topology on the dual space is discrete and never represented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InputError, ResourceError
from .semigroup import FiniteMonoid

MAX_ATOMS = 8


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True, eq=False)
class FiniteBAO:
    """Powerset algebra over ``atoms`` atoms with operator table ``op``.

    Normality and additivity of ``op`` are checked exhaustively when the
    object is created; a violation raises ``InputError`` naming the law and a
    witness.
    """

    atoms: int
    op: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        if not 0 <= self.atoms <= MAX_ATOMS:
            raise ResourceError(f"at most {MAX_ATOMS} atoms are supported (got {self.atoms})")
        size = 1 << self.atoms
        table = np.asarray(self.op, dtype=np.int64)
        if table.shape != (size, size):
            raise InputError(f"operator table must be {size}x{size}, got {table.shape}")
        if table.min(initial=0) < 0 or table.max(initial=0) >= size:
            raise InputError("operator values outside the carrier")
        table.setflags(write=False)
        object.__setattr__(self, "op", table)
        labels = tuple(self.labels) or tuple(str(i) for i in range(self.atoms))
        if len(labels) != self.atoms:
            raise InputError("one label per atom required")
        object.__setattr__(self, "labels", labels)
        _validate(table)

    @property
    def size(self) -> int:
        return 1 << self.atoms

    @property
    def top(self) -> int:
        return self.size - 1

    def join(self, a: int, b: int) -> int:
        return a | b

    def meet(self, a: int, b: int) -> int:
        return a & b

    def complement(self, a: int) -> int:
        return self.top & ~a

    def mul(self, a: int, b: int) -> int:
        return int(self.op[a, b])

    def atom_masks(self) -> list[int]:
        return [1 << i for i in range(self.atoms)]

    @classmethod
    def from_function(cls, atoms: int, f: Callable[[int, int], int], labels: Sequence = ()):
        size = 1 << atoms
        table = [[f(a, b) for b in range(size)] for a in range(size)]
        return cls(atoms, np.array(table, dtype=np.int64).reshape(size, size), tuple(labels))

    @classmethod
    def from_atom_op(cls, atoms: int, f: Callable[[int, int], int], labels: Sequence = ()):
        """Extend ``f`` (atom index pair -> mask) to the unique normal additive operator."""
        size = 1 << atoms
        table = np.zeros((size, size), dtype=np.int64)
        for a in range(1, size):
            low = a & -a
            x = low.bit_length() - 1
            for b in range(1, size):
                lowb = b & -b
                if a == low and b == lowb:
                    table[a, b] = f(x, lowb.bit_length() - 1)
                elif a == low:
                    table[a, b] = table[a, lowb] | table[a, b ^ lowb]
                else:
                    table[a, b] = table[low, b] | table[a ^ low, b]
        return cls(atoms, table, tuple(labels))


def _validate(table: np.ndarray):
    size = table.shape[0]
    for a in range(size):
        if table[a, 0] != 0:
            raise InputError(f"operator is not normal: a . bottom != bottom for a = {a:#b}")
        if table[0, a] != 0:
            raise InputError(f"operator is not normal: bottom . a != bottom for a = {a:#b}")
    idx = np.arange(size)
    for a in range(size):
        # left: (a | b) . c = a . c | b . c ; right: c . (a | b) = c . a | c . b
        left = table[a | idx, :] != (table[a][None, :] | table)
        if left.any():
            b, c = map(int, np.argwhere(left)[0])
            raise InputError(f"operator is not additive in its first argument: "
                             f"a = {a:#b}, b = {b:#b}, c = {c:#b}")
        right = table[:, a | idx] != (table[:, a][:, None] | table)
        if right.any():
            c, b = map(int, np.argwhere(right)[0])
            raise InputError(f"operator is not additive in its second argument: "
                             f"a = {a:#b}, b = {b:#b}, c = {c:#b}")


@dataclass(frozen=True)
class RelSpace:
    """A finite set of points with a ternary relation."""

    points: tuple
    relation: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.points)
        rel = frozenset(tuple(int(i) for i in t) for t in self.relation)
        if any(len(t) != 3 or not all(0 <= i < n for i in t) for t in rel):
            raise InputError("relation triples must index points")
        object.__setattr__(self, "relation", rel)

    def R(self, x: int, y: int, z: int) -> bool:
        return (x, y, z) in self.relation

    def image(self, x: int, y: int) -> list[int]:
        return sorted(z for (a, b, z) in self.relation if a == x and b == y)


def prime_filters(B: FiniteBAO) -> RelSpace:
    """The dual space: prime filters are the principal filters at atoms.

    R(p, q, r) holds iff a . b lies in r for all a in p, b in q; for filters
    at atoms x, y, z this is z in {x} . {y}.
    """
    rel = set()
    for x in range(B.atoms):
        for y in range(B.atoms):
            prod = B.mul(1 << x, 1 << y)
            rel.update((x, y, z) for z in _bits(prod))
    return RelSpace(B.labels, frozenset(rel))


def prime_filters_bruteforce(B: FiniteBAO) -> tuple[list[frozenset], set]:
    """Prime filters and their relation straight from the definitions.

    Enumerates all subsets of the carrier, so only for tiny algebras.
    """
    if B.atoms > 3:
        raise ResourceError("brute-force filter enumeration is limited to 3 atoms")
    size = B.size
    filters = []
    for bits in range(1, 1 << size):
        F = frozenset(a for a in range(size) if bits >> a & 1)
        if 0 in F:
            continue
        if any((a & b) not in F for a in F for b in F):
            continue
        if any(b not in F for a in F for b in range(size) if a & b == a):
            continue
        if any(a not in F and B.complement(a) not in F for a in range(size)):
            continue
        filters.append(F)
    rel = set()
    for i, p in enumerate(filters):
        for j, q in enumerate(filters):
            for l, r in enumerate(filters):
                if all(B.mul(a, b) in r for a in p for b in q):
                    rel.add((i, j, l))
    return filters, rel


def dual_op(X: RelSpace) -> FiniteBAO:
    """Complex algebra: A . B = {z : R(x, y, z) for some x in A, y in B}."""
    n = len(X.points)
    if n > MAX_ATOMS:
        raise ResourceError(f"at most {MAX_ATOMS} points are supported")
    images = {}
    for x, y, z in X.relation:
        images[(x, y)] = images.get((x, y), 0) | (1 << z)
    return FiniteBAO.from_atom_op(n, lambda x, y: images.get((x, y), 0), X.points)


@dataclass
class RoundTripReport:
    laws: list[tuple[str, bool]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.laws)

    def render(self) -> str:
        return "\n".join(f"{'pass' if ok else 'FAIL'}  {name}" for name, ok in self.laws)


def round_trip(B: FiniteBAO) -> RoundTripReport:
    """Compare B with the complex algebra of its dual along a -> {filters containing a}."""
    X = prime_filters(B)
    C = dual_op(X)
    # the filter at atom x contains a iff x lies below a
    iso = [sum(1 << x for x in range(B.atoms) if a >> x & 1) for a in range(B.size)]
    carrier = range(B.size)
    laws = [
        ("points = atoms", len(X.points) == B.atoms),
        ("bijective", sorted(iso) == list(range(C.size))),
        ("joins", all(iso[a | b] == C.join(iso[a], iso[b]) for a in carrier for b in carrier)),
        ("meets", all(iso[a & b] == C.meet(iso[a], iso[b]) for a in carrier for b in carrier)),
        ("complement", all(iso[B.complement(a)] == C.complement(iso[a]) for a in carrier)),
        ("operator", all(iso[B.mul(a, b)] == C.mul(iso[a], iso[b]) for a in carrier for b in carrier)),
    ]
    return RoundTripReport(laws)


def lt_algebra(M: FiniteMonoid) -> FiniteBAO:
    """Powerset of M with the multiplication lifted to sets."""
    labels = tuple(str(w) or "ε" for w in M.reps) if M.reps else ()
    return FiniteBAO.from_atom_op(M.size, lambda x, y: 1 << M.mul(x, y), labels)


@dataclass(frozen=True)
class GraphReport:
    points: int
    functional: bool
    matches_table: bool

    @property
    def passed(self) -> bool:
        return self.functional and self.matches_table

    def render(self, k: Optional[int] = None) -> str:
        op = "⊗" if k is None else f"⊗_{k}"
        return "\n".join([
            f"points: {self.points}",
            f"R_+ functional: {str(self.functional).lower()}",
            f"R_+ = graph: {str(self.passed).lower()} (graph of {op})",
        ])


def graph_report(M: FiniteMonoid) -> GraphReport:
    X = prime_filters(lt_algebra(M))
    n = len(X.points)
    images = {(x, y): X.image(x, y) for x in range(n) for y in range(n)}
    functional = all(len(zs) == 1 for zs in images.values())
    matches = functional and all(images[(x, y)][0] == M.mul(x, y) for x in range(n) for y in range(n))
    return GraphReport(n, functional, matches)


def graph_check(M: FiniteMonoid) -> bool:
    return graph_report(M).passed


def fixture_algebras() -> dict[str, FiniteBAO]:
    """Small algebras exercised by the round-trip checks."""
    from .monoid import build_sk

    parity = FiniteMonoid(((0, 1), (1, 0)), 0, ())
    return {
        "two-element/meet": FiniteBAO.from_function(1, lambda a, b: a & b),
        "four-element/meet": FiniteBAO.from_function(2, lambda a, b: a & b),
        "four-element/swap": FiniteBAO.from_atom_op(2, lambda x, y: 1 << (1 - x) if x == y else 0),
        "parity": lt_algebra(parity),
        "S_1(a)": lt_algebra(build_sk("a", 1)),
        "S_1(ab)": lt_algebra(build_sk("ab", 1)),
    }
