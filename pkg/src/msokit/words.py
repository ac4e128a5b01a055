"""Words over a finite alphabet and the MSO structures they induce.

``mso(w)`` is the structure whose universe is the powerset of the positions of
``w``. Position sets are encoded as bit-vectors (bit ``i`` set iff position
``i`` is in the set), so the universe of a length-``n`` word is exactly
``range(2**n)`` in integer order.

``oplus(M, N)`` builds the product structure directly from its defining
clauses; it is never flattened into a concatenated word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .caps import get_caps
from .errors import InputError, ResourceError


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        syms = tuple(self.symbols)
        object.__setattr__(self, "symbols", syms)
        if not syms:
            raise InputError("alphabet must be nonempty")
        if any(not isinstance(s, str) or not s for s in syms):
            raise InputError("alphabet symbols must be nonempty strings")
        if len(set(syms)) != len(syms):
            raise InputError(f"duplicate symbols in alphabet {syms}")

    @classmethod
    def of(cls, symbols: "str | Iterable[str] | Alphabet") -> "Alphabet":
        """Build from ``"ab"`` (one symbol per character) or a list of names."""
        if isinstance(symbols, Alphabet):
            return symbols
        return cls(tuple(symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise InputError(f"symbol {symbol!r} not in alphabet {''.join(self.symbols)!r}") from None

    def __str__(self) -> str:
        return "".join(self.symbols) if all(len(s) == 1 for s in self.symbols) else ",".join(self.symbols)


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(i) for i in self.letters)
        object.__setattr__(self, "letters", letters)
        n = len(self.alphabet)
        for i in letters:
            if not 0 <= i < n:
                raise InputError(f"letter index {i} out of range for alphabet of size {n}")

    @classmethod
    def parse(cls, alphabet: "Alphabet | str", text: str) -> "Word":
        alphabet = Alphabet.of(alphabet)
        return cls(alphabet, tuple(alphabet.index(ch) for ch in text))

    @classmethod
    def empty(cls, alphabet: "Alphabet | str") -> "Word":
        return cls(Alphabet.of(alphabet), ())

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(self.alphabet.symbols[i] for i in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __add__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.alphabet, self.letters[item])
        return self.letters[item]


def concat(w: Word, v: Word) -> Word:
    if w.alphabet != v.alphabet:
        raise InputError("cannot concatenate words over different alphabets")
    return Word(w.alphabet, w.letters + v.letters)


def all_words(alphabet: "Alphabet | str", max_len: int, min_len: int = 0):
    """All words of length min_len..max_len, shortlex order."""
    alphabet = Alphabet.of(alphabet)
    from itertools import product

    for n in range(min_len, max_len + 1):
        for letters in product(range(len(alphabet)), repeat=n):
            yield Word(alphabet, letters)


# ---------------------------------------------------------------------------
# Structures


class Features:
    """Vectorised view of a structure used by the EF type computation.

    Elements are addressed by index ``0..size-1``. The four ``*_row`` methods
    return boolean vectors over all elements ``y``:

    * ``sub_row(i)[y]``   : e_i <= y
    * ``sub_col(i)[y]``   : y <= e_i
    * ``bef_row(i)[y]``   : e_i < y   (the exists-earlier relation)
    * ``bef_col(i)[y]``   : y < e_i
    """

    size: int
    bottom: int
    notbot: np.ndarray
    atom: np.ndarray
    selfb: np.ndarray
    labels: np.ndarray

    def sub_row(self, i: int) -> np.ndarray:
        raise NotImplementedError

    def sub_col(self, i: int) -> np.ndarray:
        raise NotImplementedError

    def bef_row(self, i: int) -> np.ndarray:
        raise NotImplementedError

    def bef_col(self, i: int) -> np.ndarray:
        raise NotImplementedError


class _MatrixFeatures(Features):
    def __init__(self, size, bottom, atom, selfb, labels, sub, bef):
        self.size = size
        self.bottom = bottom
        self.notbot = np.arange(size) != bottom
        self.atom = atom
        self.selfb = selfb
        self.labels = labels
        self._sub = sub
        self._bef = bef

    def sub_row(self, i):
        return self._sub[i]

    def sub_col(self, i):
        return self._sub[:, i]

    def bef_row(self, i):
        return self._bef[i]

    def bef_col(self, i):
        return self._bef[:, i]


class Structure:
    """A finite L-structure for the signature {<=, <, At, bottom, P_sigma}.

    Subclasses provide ``elements`` (in enumeration order), ``bottom`` and the
    scalar relations. Equality is equality of element values.
    """

    alphabet: Alphabet

    @property
    def elements(self) -> Sequence[Hashable]:
        raise NotImplementedError

    @property
    def bottom(self) -> Hashable:
        raise NotImplementedError

    def sub(self, a, b) -> bool:
        raise NotImplementedError

    def before(self, a, b) -> bool:
        raise NotImplementedError

    def is_atom(self, a) -> bool:
        raise NotImplementedError

    def has_label(self, sigma: int, a) -> bool:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def atoms(self) -> tuple:
        return tuple(e for e in self.elements if self.is_atom(e))

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def index(self, element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise InputError(f"{element!r} is not an element of this structure") from None

    def label_mask(self, a) -> int:
        return sum(1 << s for s in range(len(self.alphabet)) if self.has_label(s, a))

    @cached_property
    def features(self) -> Features:
        els = self.elements
        n = len(els)
        sub = np.array([[self.sub(x, y) for y in els] for x in els], dtype=bool).reshape(n, n)
        bef = np.array([[self.before(x, y) for y in els] for x in els], dtype=bool).reshape(n, n)
        atom = np.array([self.is_atom(x) for x in els], dtype=bool)
        labels = np.array([self.label_mask(x) for x in els], dtype=np.int64)
        return _MatrixFeatures(n, self.index(self.bottom), atom, bef.diagonal().copy(), labels, sub, bef)

    def element_str(self, a) -> str:
        return str(a)


def _bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def set_str(mask: int) -> str:
    return "{" + ",".join(map(str, _bits(mask))) + "}"


class _MsoFeatures(Features):
    def __init__(self, n: int, label_masks: tuple[int, ...]):
        size = 1 << n
        e = np.arange(size, dtype=np.int64)
        self.size = size
        self.bottom = 0
        self._e = e
        self.notbot = e != 0
        # lowest / highest set bit; undefined (but masked by notbot) for 0
        low = np.full(size, n, dtype=np.int64)
        high = np.full(size, -1, dtype=np.int64)
        for p in range(n - 1, -1, -1):
            low[(e >> p) & 1 == 1] = p
        for p in range(n):
            high[(e >> p) & 1 == 1] = p
        self._low, self._high = low, high
        popcount = np.zeros(size, dtype=np.int64)
        labels = np.zeros(size, dtype=np.int64)
        for p in range(n):
            popcount += (e >> p) & 1
        for p in range(n):
            labels[e == (1 << p)] = label_masks[p]
        self.atom = popcount == 1
        self.selfb = popcount >= 2
        self.labels = labels

    def sub_row(self, i):
        return (i & ~self._e) == 0

    def sub_col(self, i):
        return (self._e & ~i) == 0

    def bef_row(self, i):
        if i == 0:
            return np.zeros(self.size, dtype=bool)
        return self._high > self._low[i]

    def bef_col(self, i):
        if i == 0:
            return np.zeros(self.size, dtype=bool)
        return self.notbot & (self._low < self._high[i])


class MsoStructure(Structure):
    """mso(w): all subsets of the positions of a word.

    ``label_masks[p]`` is the set of symbols (as a bitmask) carried by position
    ``p``. For a genuine word every mask has exactly one bit; other masks are
    allowed so that deliberately corrupted structures can be built.
    """

    def __init__(self, alphabet: Alphabet, label_masks: Sequence[int]):
        self.alphabet = alphabet
        self.label_masks = tuple(int(m) for m in label_masks)
        self.n = len(self.label_masks)
        if self.n > get_caps().positions:
            raise ResourceError(f"{self.n} positions exceeds the position cap {get_caps().positions}")

    @classmethod
    def of_word(cls, w: Word) -> "MsoStructure":
        return cls(w.alphabet, [1 << i for i in w.letters])

    @property
    def elements(self) -> range:
        return range(1 << self.n)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return (1 << self.n) - 1

    def index(self, element) -> int:
        if not isinstance(element, (int, np.integer)) or not 0 <= element < (1 << self.n):
            raise InputError(f"{element!r} is not an element of this structure")
        return int(element)

    def sub(self, a, b):
        return a & ~b == 0

    def before(self, a, b):
        if a == 0 or b == 0:
            return False
        return (a & -a).bit_length() < b.bit_length()

    def is_atom(self, a):
        return a != 0 and a & (a - 1) == 0

    def has_label(self, sigma, a):
        return self.is_atom(a) and bool(self.label_masks[a.bit_length() - 1] >> sigma & 1)

    @cached_property
    def atoms(self) -> tuple:
        return tuple(1 << p for p in range(self.n))

    @cached_property
    def features(self) -> Features:
        return _MsoFeatures(self.n, self.label_masks)

    def element_str(self, a) -> str:
        return set_str(a)

    def __repr__(self):
        return f"MsoStructure(n={self.n}, labels={self.label_masks})"


def mso(w: Word) -> MsoStructure:
    return MsoStructure.of_word(w)


class _ProductFeatures(Features):
    def __init__(self, fm: Features, fn: Features):
        self.fm, self.fn = fm, fn
        m, n = fm.size, fn.size
        self.size = m * n
        self.bottom = fm.bottom * n + fn.bottom
        self._m, self._n = m, n
        self.notbot = np.arange(self.size) != self.bottom
        botm, botn = ~fm.notbot, ~fn.notbot
        self.atom = ((fm.atom[:, None] & botn[None, :]) | (botm[:, None] & fn.atom[None, :])).ravel()
        self.selfb = ((fm.notbot[:, None] & fn.notbot[None, :])
                      | fm.selfb[:, None] | fn.selfb[None, :]).ravel()
        self.labels = (np.where(botn[None, :], fm.labels[:, None], 0)
                       | np.where(botm[:, None], fn.labels[None, :], 0)).ravel()

    def _split(self, i):
        return divmod(i, self._n)

    def sub_row(self, i):
        a, b = self._split(i)
        return (self.fm.sub_row(a)[:, None] & self.fn.sub_row(b)[None, :]).ravel()

    def sub_col(self, i):
        a, b = self._split(i)
        return (self.fm.sub_col(a)[:, None] & self.fn.sub_col(b)[None, :]).ravel()

    def bef_row(self, i):
        # (A,B) < (C,D)  iff  (A != bot and D != bot) or A < C or B < D
        a, b = self._split(i)
        first = self.fm.notbot[a] & self.fn.notbot[None, :]
        return (first | self.fm.bef_row(a)[:, None] | self.fn.bef_row(b)[None, :]).ravel()

    def bef_col(self, i):
        a, b = self._split(i)
        first = self.fm.notbot[:, None] & self.fn.notbot[b]
        return (first | self.fm.bef_col(a)[:, None] | self.fn.bef_col(b)[None, :]).ravel()


class ProductStructure(Structure):
    """M (x) N, with every relation evaluated from the six product clauses."""

    def __init__(self, left: Structure, right: Structure):
        if left.alphabet != right.alphabet:
            raise InputError("cannot form a product of structures over different alphabets")
        self.alphabet = left.alphabet
        self.left, self.right = left, right

    @cached_property
    def elements(self) -> tuple:
        return tuple((a, b) for a in self.left.elements for b in self.right.elements)

    @property
    def bottom(self):
        return (self.left.bottom, self.right.bottom)

    def index(self, element) -> int:
        a, b = element
        return self.left.index(a) * self.right.size + self.right.index(b)

    def _is_bot(self, side, x):
        return x == side.bottom

    def sub(self, p, q):
        return self.left.sub(p[0], q[0]) and self.right.sub(p[1], q[1])

    def before(self, p, q):
        (a, b), (c, d) = p, q
        M, N = self.left, self.right
        return ((a != M.bottom and d != N.bottom)
                or M.before(a, c)
                or N.before(b, d))

    def is_atom(self, p):
        a, b = p
        M, N = self.left, self.right
        return (M.is_atom(a) and b == N.bottom) or (a == M.bottom and N.is_atom(b))

    def has_label(self, sigma, p):
        a, b = p
        M, N = self.left, self.right
        return ((M.has_label(sigma, a) and b == N.bottom)
                or (a == M.bottom and N.has_label(sigma, b)))

    @cached_property
    def features(self) -> Features:
        return _ProductFeatures(self.left.features, self.right.features)

    def element_str(self, p) -> str:
        return f"({self.left.element_str(p[0])},{self.right.element_str(p[1])})"


def oplus(M: Structure, N: Structure) -> ProductStructure:
    return ProductStructure(M, N)


class SubStructure(Structure):
    """The substructure on the elements below ``bound`` (relations inherited)."""

    def __init__(self, parent: Structure, bound):
        self.alphabet = parent.alphabet
        self.parent = parent
        self.bound = bound
        self._elements = tuple(e for e in parent.elements if parent.sub(e, bound))

    @property
    def elements(self):
        return self._elements

    @property
    def bottom(self):
        return self.parent.bottom

    def sub(self, a, b):
        return self.parent.sub(a, b)

    def before(self, a, b):
        return self.parent.before(a, b)

    def is_atom(self, a):
        return self.parent.is_atom(a)

    def has_label(self, sigma, a):
        return self.parent.has_label(sigma, a)

    def element_str(self, a):
        return self.parent.element_str(a)


def union_iso(w: Word, v: Word) -> bool:
    """Check exhaustively that (A, B) -> A | (B << |w|) is an isomorphism
    mso(w) (x) mso(v) -> mso(wv)."""
    cap = get_caps().union_iso_positions
    if len(w) + len(v) > cap:
        raise ResourceError(f"|w|+|v| = {len(w) + len(v)} exceeds the union_iso cap {cap}")
    P = oplus(mso(w), mso(v))
    T = mso(concat(w, v))
    shift = len(w)

    def f(p):
        return p[0] | (p[1] << shift)

    els = P.elements
    image = [f(p) for p in els]
    if sorted(image) != list(T.elements):
        return False
    if f(P.bottom) != T.bottom:
        return False
    sigmas = range(len(P.alphabet))
    for p, fp in zip(els, image):
        if P.is_atom(p) != T.is_atom(fp):
            return False
        if any(P.has_label(s, p) != T.has_label(s, fp) for s in sigmas):
            return False
        for q, fq in zip(els, image):
            if P.sub(p, q) != T.sub(fp, fq):
                return False
            if P.before(p, q) != T.before(fp, fq):
                return False
            if (p == q) != (fp == fq):
                return False
    return True
