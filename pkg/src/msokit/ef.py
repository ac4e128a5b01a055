"""Depth-k types for the unnested Ehrenfeucht-Fraisse game.

The depth-0 type of a tuple (a_1..a_m) records every unnested atomic formula
over the terms bottom, a_1, ..., a_m. It is stored incrementally: entry ``j``
of ``code`` is a bit pattern describing how a_{j+1} relates to bottom and to
a_1..a_j. The depth-(j+1) type of a tuple is its code together with the set of
depth-j types of all one-element extensions.

Types are hash-consed in a process-wide pool, so two types are equal exactly
when they are the same object. Bottom is an always-available term of every
atomic type, which plays the role of a 0-th pebble.

Layout of one code entry for an element c added after terms t_0=bottom..t_m::

    bit 0          At(c)
    bit 1          c < c
    bits 2..2+L-1  P_sigma(c), one bit per symbol
    then 5 bits per term t_i:  t_i = c, t_i <= c, c <= t_i, t_i < c, c < t_i
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .caps import get_caps
from .errors import InputError, ResourceError
from .words import Alphabet, MsoStructure, Structure, Word, mso

_EQ, _SUB_TC, _SUB_CT, _BEF_TC, _BEF_CT = range(5)


class KType:
    """An interned depth-k type. Compare with ``==`` (identity)."""

    __slots__ = ("id", "depth", "code", "children", "__weakref__")

    def __init__(self, id_, depth, code, children):
        self.id = id_
        self.depth = depth
        self.code = code
        self.children = children

    def __repr__(self):
        return f"KType(id={self.id}, depth={self.depth}, arity={len(self.code)}, children={len(self.children)})"

    def __hash__(self):
        return self.id

    def __lt__(self, other):
        return self.id < other.id

    def canonical(self) -> tuple:
        """Pool-independent canonical value (nested, children sorted)."""
        return (self.depth, self.code, tuple(sorted(c.canonical() for c in self.children)))

    def canonical_bytes(self) -> bytes:
        return repr(self.canonical()).encode()


class _Pool:
    def __init__(self):
        self._lock = threading.Lock()
        self._table: dict = {}

    def get(self, depth: int, code: tuple, children: Sequence[KType]) -> KType:
        kids = tuple(sorted(set(children), key=lambda t: t.id))
        key = (depth, code, tuple(t.id for t in kids))
        node = self._table.get(key)
        if node is not None:
            return node
        with self._lock:
            node = self._table.get(key)
            if node is None:
                node = KType(len(self._table), depth, code, kids)
                self._table[key] = node
            return node

    def __len__(self):
        return len(self._table)


_pool = _Pool()


def _layout(nsym: int):
    return 2 + nsym


def _term_base(nsym: int, i: int) -> int:
    return 2 + nsym + 5 * i


# ---------------------------------------------------------------------------
# Direct computation on a structure


def _structure_positions(S: Structure) -> int:
    if isinstance(S, MsoStructure):
        return S.n
    return (S.size - 1).bit_length()


def _check(S: Structure, k: int):
    caps = get_caps()
    if k < 0:
        raise InputError("k must be non-negative")
    limit = caps.ef_positions(k)
    n = _structure_positions(S)
    if n > limit:
        raise ResourceError(f"structure with {n} positions exceeds the EF cap {limit} at depth {k}")


class _TypeComputer:
    """Per-call memo for tp on one structure."""

    def __init__(self, S: Structure):
        self.S = S
        self.F = S.features
        self.nsym = len(S.alphabet)
        F = self.F
        self.unary = (F.atom.astype(np.int64) | (F.selfb.astype(np.int64) << 1)
                      | (F.labels.astype(np.int64) << 2))
        self.index = np.arange(F.size)
        self.memo: dict = {}

    def term_bits(self, t: int, i: int) -> np.ndarray:
        F = self.F
        base = _term_base(self.nsym, i)
        return (((self.index == t).astype(np.int64) << (base + _EQ))
                | (F.sub_row(t).astype(np.int64) << (base + _SUB_TC))
                | (F.sub_col(t).astype(np.int64) << (base + _SUB_CT))
                | (F.bef_row(t).astype(np.int64) << (base + _BEF_TC))
                | (F.bef_col(t).astype(np.int64) << (base + _BEF_CT)))

    def root_partial(self) -> np.ndarray:
        return self.unary | self.term_bits(self.F.bottom, 0)

    def tp(self, tup: tuple, code: tuple, partial: np.ndarray, depth: int) -> KType:
        key = (tup, depth)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if depth == 0:
            node = _pool.get(0, code, ())
        elif depth == 1:
            kids = [_pool.get(0, code + (int(b),), ()) for b in np.unique(partial)]
            node = _pool.get(1, code, kids)
        else:
            kids = set()
            arity = len(tup) + 1
            for c in range(self.F.size):
                b = int(partial[c])
                child_partial = partial | self.term_bits(c, arity)
                kids.add(self.tp(tup + (c,), code + (b,), child_partial, depth - 1))
            node = _pool.get(depth, code, kids)
        self.memo[key] = node
        return node

    def code_of(self, tup: tuple) -> tuple[tuple, np.ndarray]:
        partial = self.root_partial()
        code = ()
        for i, t in enumerate(tup, start=1):
            code += (int(partial[t]),)
            partial = partial | self.term_bits(t, i)
        return code, partial


def tp(S: Structure, elements: Sequence = (), k: int = 0) -> KType:
    """The depth-k type of ``elements`` (given as element values) in ``S``."""
    _check(S, k)
    comp = _TypeComputer(S)
    tup = tuple(S.index(e) for e in elements)
    code, partial = comp.code_of(tup)
    return comp.tp(tup, code, partial, k)


def word_type(w: Word, k: int) -> KType:
    return tp(mso(w), (), k)


def equiv_k(w: Word, v: Word, k: int) -> bool:
    if w.alphabet != v.alphabet:
        raise InputError("words over different alphabets")
    return word_type(w, k) is word_type(v, k)


def project(t: KType, depth: int) -> KType:
    """Forget nesting below ``depth``."""
    if depth > t.depth or depth < 0:
        raise InputError(f"cannot project a depth-{t.depth} type to depth {depth}")
    if depth == t.depth:
        return t
    if depth == 0:
        return _pool.get(0, t.code, ())
    return _pool.get(depth, t.code, [project(c, depth - 1) for c in t.children])


# ---------------------------------------------------------------------------
# Types of products, computed from the types of the factors


def _combine_code(code1: tuple, code2: tuple, nsym: int) -> tuple:
    """Atomic type of a paired tuple in M (x) N from the factors' atomic types."""
    botbit = _term_base(nsym, 0) + _EQ
    label_mask = ((1 << nsym) - 1) << 2
    nb1, nb2 = [False], [False]  # term 0 is bottom
    out = []
    for b1, b2 in zip(code1, code2):
        bot1 = bool(b1 >> botbit & 1)
        bot2 = bool(b2 >> botbit & 1)
        at1, at2 = b1 & 1, b2 & 1
        s1, s2 = b1 >> 1 & 1, b2 >> 1 & 1
        r = 0
        if (at1 and bot2) or (bot1 and at2):
            r |= 1
        if ((not bot1) and (not bot2)) or s1 or s2:
            r |= 2
        if bot2:
            r |= b1 & label_mask
        if bot1:
            r |= b2 & label_mask
        for i in range(len(nb1)):
            base = _term_base(nsym, i)
            g1 = [b1 >> (base + j) & 1 for j in range(5)]
            g2 = [b2 >> (base + j) & 1 for j in range(5)]
            bits = [
                g1[_EQ] & g2[_EQ],
                g1[_SUB_TC] & g2[_SUB_TC],
                g1[_SUB_CT] & g2[_SUB_CT],
                int((nb1[i] and not bot2) or g1[_BEF_TC] or g2[_BEF_TC]),
                int(((not bot1) and nb2[i]) or g1[_BEF_CT] or g2[_BEF_CT]),
            ]
            for j, v in enumerate(bits):
                r |= v << (base + j)
        out.append(r)
        nb1.append(not bot1)
        nb2.append(not bot2)
    return tuple(out)


class TypeAlgebra:
    """Computes the type of M (x) N from the types of M and N (memoised)."""

    def __init__(self, nsym: int):
        self.nsym = nsym
        self._memo: dict = {}
        self._lock = threading.Lock()

    def product(self, t1: KType, t2: KType) -> KType:
        if t1.depth != t2.depth or len(t1.code) != len(t2.code):
            raise InputError("types of different depth or arity")
        key = (t1.id, t2.id)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        code = _combine_code(t1.code, t2.code, self.nsym)
        if t1.depth == 0:
            node = _pool.get(0, code, ())
        else:
            node = _pool.get(t1.depth, code,
                             {self.product(c1, c2) for c1 in t1.children for c2 in t2.children})
        self._memo[key] = node
        return node


_algebras: dict[int, TypeAlgebra] = {}


def type_algebra(alphabet: Alphabet) -> TypeAlgebra:
    n = len(alphabet)
    if n not in _algebras:
        _algebras[n] = TypeAlgebra(n)
    return _algebras[n]


def type_product(t1: KType, t2: KType, alphabet: Alphabet) -> KType:
    return type_algebra(alphabet).product(t1, t2)


# ---------------------------------------------------------------------------
# Spoiler strategies


@dataclass(frozen=True)
class Mismatch:
    formula: str          # an unnested atomic formula true on exactly one side
    true_on: int          # 1 or 2


@dataclass(frozen=True)
class SpoilerMove:
    side: int                                  # structure Spoiler plays in (1 or 2)
    element: object
    replies: tuple                             # ((reply element, Strategy), ...)


Strategy = Union[Mismatch, SpoilerMove]


def _pebble(i: int) -> str:
    return "empty" if i == 0 else f"X{i}"


def _describe_difference(b1: int, b2: int, j: int, symbols: Sequence[str]) -> tuple[str, int]:
    """First atomic formula that differs between code entries b1, b2 for pebble j."""
    nsym = len(symbols)
    c = _pebble(j)
    names = [f"at({c})", f"{c} < {c}"] + [f"P_{s}({c})" for s in symbols]
    for i in range(j):
        t = _pebble(i)
        names += [f"{t} = {c}", f"{t} <= {c}", f"{c} <= {t}", f"{t} < {c}", f"{c} < {t}"]
    diff = b1 ^ b2
    bit = (diff & -diff).bit_length() - 1
    return names[bit], 1 if b1 >> bit & 1 else 2


def ef_witness(w: Word, v: Word, k: int) -> Optional[Strategy]:
    """A winning Spoiler strategy for the k-round game on mso(w), mso(v), or None."""
    if w.alphabet != v.alphabet:
        raise InputError("words over different alphabets")
    S1, S2 = mso(w), mso(v)
    return strategy(S1, S2, k)


def strategy(S1: Structure, S2: Structure, k: int) -> Optional[Strategy]:
    for S in (S1, S2):
        _check(S, k)
    comps = (_TypeComputer(S1), _TypeComputer(S2))
    parts = [c.code_of(()) for c in comps]
    t1 = comps[0].tp((), parts[0][0], parts[0][1], k)
    t2 = comps[1].tp((), parts[1][0], parts[1][1], k)
    if t1 is t2:
        return None
    return _build(comps, (), (), parts[0][1], parts[1][1], (), (), k, S1.alphabet.symbols)


def _build(comps, tup1, tup2, part1, part2, code1, code2, depth, symbols):
    for j, (b1, b2) in enumerate(zip(code1, code2), start=1):
        if b1 != b2:
            formula, side = _describe_difference(b1, b2, j, symbols)
            return Mismatch(formula, side)
    if depth == 0:
        raise AssertionError("types differ but atomic codes agree")
    arity = len(tup1) + 1
    for side in (1, 2):
        me, other = (comps[0], comps[1]) if side == 1 else (comps[1], comps[0])
        my_tup, other_tup = (tup1, tup2) if side == 1 else (tup2, tup1)
        my_part, other_part = (part1, part2) if side == 1 else (part2, part1)
        my_code, other_code = (code1, code2) if side == 1 else (code2, code1)
        other_type = other.tp(other_tup, other_code, other_part, depth)
        options = set(other_type.children)
        for c in range(me.F.size):
            mine = me.tp(my_tup + (c,), my_code + (int(my_part[c]),),
                         my_part | me.term_bits(c, arity), depth - 1)
            if mine in options:
                continue
            replies = []
            for d in range(other.F.size):
                o_tup = other_tup + (d,)
                o_code = other_code + (int(other_part[d]),)
                o_part = other_part | other.term_bits(d, arity)
                m_tup = my_tup + (c,)
                m_code = my_code + (int(my_part[c]),)
                m_part = my_part | me.term_bits(c, arity)
                if side == 1:
                    sub = _build(comps, m_tup, o_tup, m_part, o_part, m_code, o_code, depth - 1, symbols)
                else:
                    sub = _build(comps, o_tup, m_tup, o_part, m_part, o_code, m_code, depth - 1, symbols)
                replies.append((other.S.elements[d], sub))
            return SpoilerMove(side, me.S.elements[c], tuple(replies))
    raise AssertionError("types differ but Spoiler has no distinguishing move")


def _atomic_facts(S: Structure, tup: Sequence) -> tuple:
    """Atomic type of ``tup`` computed straight from the scalar relations."""
    terms = [S.bottom] + list(tup)
    facts = []
    for x in terms:
        facts.append(S.is_atom(x))
        facts.extend(S.has_label(s, x) for s in range(len(S.alphabet)))
        for y in terms:
            facts.extend([x == y, S.sub(x, y), S.before(x, y)])
    return tuple(facts)


def replay(strat: Strategy, S1: Structure, S2: Structure, k: int) -> bool:
    """Check a strategy against every Duplicator reply, from first principles."""
    return _replay(strat, S1, S2, (), (), k)


def _replay(node, S1, S2, t1, t2, rounds) -> bool:
    if isinstance(node, Mismatch):
        return _atomic_facts(S1, t1) != _atomic_facts(S2, t2)
    if rounds == 0:
        return False
    me, other = (S1, S2) if node.side == 1 else (S2, S1)
    if node.element not in set(me.elements):
        return False
    replies = dict(node.replies)
    if set(replies) != set(other.elements):
        return False
    for d, sub in replies.items():
        if node.side == 1:
            nt1, nt2 = t1 + (node.element,), t2 + (d,)
        else:
            nt1, nt2 = t1 + (d,), t2 + (node.element,)
        if not _replay(sub, S1, S2, nt1, nt2, rounds - 1):
            return False
    return True


def render_strategy(strat: Optional[Strategy], S1: Structure, S2: Structure,
                    names: Sequence[str] = ("M1", "M2")) -> str:
    if strat is None:
        return "none (Duplicator wins)"
    lines: list[str] = []
    structures = {1: S1, 2: S2}

    def walk(node, indent, pebble):
        pad = "  " * indent
        if isinstance(node, Mismatch):
            lines.append(f"{pad}mismatch: {node.formula} holds only in {names[node.true_on - 1]}")
            return
        S = structures[node.side]
        O = structures[3 - node.side]
        lines.append(f"{pad}Spoiler plays X{pebble} = {S.element_str(node.element)} "
                     f"in {names[node.side - 1]}")
        for d, sub in node.replies:
            lines.append(f"{pad}  Duplicator answers {O.element_str(d)} in {names[2 - node.side]}")
            walk(sub, indent + 2, pebble + 1)

    walk(strat, 0, 1)
    return "\n".join(lines)
