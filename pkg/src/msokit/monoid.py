"""The finite type monoids S_k, their parent maps, and omega-terms.

S_k is built by a breadth-first closure starting from the class of the empty
word and multiplying on the right by the letter classes. The class of a
product is computed from the factors' types (``ef.TypeAlgebra``), or by
recomputing the type of the concatenated representative when
``method="direct"``; both must agree and the tests hold them to it.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional, Union

from .automata import Dfa, accepts, cofinal_k, syntactic_monoid
from .caps import get_caps
from .ef import KType, type_algebra, word_type
from .errors import InputError, ResourceError
from .semigroup import FiniteMonoid, idempotent_power
from .words import Alphabet, Word, all_words

_cache: dict = {}
_cache_lock = threading.Lock()
_types: dict = {}


def _feasible(alphabet: Alphabet, k: int):
    caps = get_caps()
    limit = caps.sk_max_k(len(alphabet))
    if k < 0:
        raise InputError("k must be non-negative")
    if k > limit:
        raise ResourceError(f"S_{k} over a {len(alphabet)}-letter alphabet is beyond the "
                            f"feasibility cap (k <= {limit})")


def build_sk(alphabet: "Alphabet | str", k: int, method: str = "symbolic") -> FiniteMonoid:
    """The monoid of ≈_k classes of word structures, in discovery order."""
    alphabet = Alphabet.of(alphabet)
    if method not in ("symbolic", "direct"):
        raise InputError(f"unknown method {method!r}")
    _feasible(alphabet, k)
    key = (alphabet, k, method, get_caps())
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    M, types = _closure(alphabet, k, method)
    with _cache_lock:
        _cache.setdefault(key, M)
        _types.setdefault(id(_cache[key]), types)
        return _cache[key]


def _closure(alphabet: Alphabet, k: int, method: str):
    cap = get_caps().monoid_size
    algebra = type_algebra(alphabet)
    letters = [Word(alphabet, (s,)) for s in range(len(alphabet))]
    try:
        gens = [word_type(w, k) for w in letters]
        types = [word_type(Word.empty(alphabet), k)]
    except ResourceError as exc:
        raise ResourceError(f"cannot type the generators of S_{k}: {exc}") from None
    reps = [Word.empty(alphabet)]
    index = {types[0]: 0}
    right = []  # right[i][s] = class of reps[i] followed by letter s
    i = 0
    while i < len(types):
        row = []
        for s, g in enumerate(gens):
            if method == "symbolic":
                t = algebra.product(types[i], g)
            else:
                w = reps[i] + letters[s]
                try:
                    t = word_type(w, k)
                except ResourceError:
                    raise ResourceError(
                        f"closure for S_{k} needs a representative of length {len(w)}, beyond the "
                        f"EF cap; {len(types)} classes found so far") from None
            if t not in index:
                index[t] = len(types)
                types.append(t)
                reps.append(reps[i] + letters[s])
                if len(types) > cap:
                    raise ResourceError(f"S_{k} exceeds the monoid size cap {cap}")
            row.append(index[t])
        right.append(row)
        i += 1
    n = len(types)
    table = []
    for a in range(n):
        out = []
        for b in range(n):
            x = a
            for s in reps[b].letters:
                x = right[x][s]
            out.append(x)
        table.append(tuple(out))
    letter_image = tuple(right[0])
    M = FiniteMonoid(tuple(table), 0, tuple(reps), alphabet, letter_image, name=f"S_{k}")
    return M, tuple(types)


def sk_types(M: FiniteMonoid) -> tuple[KType, ...]:
    """The depth-k type of each element of a monoid returned by ``build_sk``."""
    try:
        return _types[id(M)]
    except KeyError:
        raise InputError("monoid was not produced by build_sk") from None


def level_of(M: FiniteMonoid) -> int:
    if not M.name.startswith("S_"):
        raise InputError("monoid was not produced by build_sk")
    return int(M.name[2:])


def hom_eval(M: FiniteMonoid, w: Word) -> int:
    if M.alphabet is not None and w.alphabet != M.alphabet:
        raise InputError("word over a different alphabet")
    return M.evaluate(w)


def class_of(M: FiniteMonoid, w: Word) -> int:
    """The element whose type equals the directly computed type of ``w``."""
    t = word_type(w, level_of(M))
    try:
        return sk_types(M).index(t)
    except ValueError:
        raise AssertionError("type of a word missing from S_k") from None


def parent(upper: FiniteMonoid, lower: FiniteMonoid, e: int) -> int:
    if upper.alphabet != lower.alphabet:
        raise InputError("monoids over different alphabets")
    return hom_eval(lower, upper.reps[e])


# ---------------------------------------------------------------------------
# Omega terms


@dataclass(frozen=True)
class Letter:
    symbol: str


@dataclass(frozen=True)
class Concat:
    left: "OmegaTerm"
    right: "OmegaTerm"


@dataclass(frozen=True)
class OmegaPower:
    body: "OmegaTerm"


OmegaTerm = Union[Letter, Concat, OmegaPower]


def parse_term(text: str, alphabet: "Alphabet | str") -> OmegaTerm:
    """term := SYM | term term | '(' term ')' | term '^w'"""
    alphabet = Alphabet.of(alphabet)
    symbols = sorted(alphabet.symbols, key=len, reverse=True)
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch in "()":
            tokens.append((ch, pos))
            pos += 1
        elif text.startswith("^w", pos):
            tokens.append(("^w", pos))
            pos += 2
        else:
            sym = next((s for s in symbols if text.startswith(s, pos)), None)
            if sym is None:
                raise InputError(f"unexpected character {ch!r} at {pos} in term {text!r}")
            tokens.append((Letter(sym), pos))
            pos += len(sym)
    if not tokens:
        raise InputError("empty term (the empty word has no term syntax)")
    term, i = _parse_seq(tokens, 0, text)
    if i != len(tokens):
        raise InputError(f"unexpected {tokens[i][0]!r} at {tokens[i][1]} in term {text!r}")
    return term


def _parse_seq(tokens, i, text):
    parts = []
    while i < len(tokens) and tokens[i][0] != ")":
        tok, pos = tokens[i]
        if tok == "(":
            inner, i = _parse_seq(tokens, i + 1, text)
            if i >= len(tokens) or tokens[i][0] != ")":
                raise InputError(f"unbalanced parenthesis at {pos} in term {text!r}")
            factor = inner
            i += 1
        elif tok == "^w":
            raise InputError(f"'^w' without a base at {pos} in term {text!r}")
        else:
            factor = tok
            i += 1
        while i < len(tokens) and tokens[i][0] == "^w":
            factor = OmegaPower(factor)
            i += 1
        parts.append(factor)
    if not parts:
        raise InputError(f"empty group in term {text!r}")
    term = parts[0]
    for p in parts[1:]:
        term = Concat(term, p)
    return term, i


def render_term(t: OmegaTerm) -> str:
    if isinstance(t, Letter):
        return t.symbol
    if isinstance(t, Concat):
        return render_term(t.left) + render_term(t.right)
    body = render_term(t.body)
    return (body if isinstance(t.body, Letter) else f"({body})") + "^w"


def finite_word(t: OmegaTerm, alphabet: "Alphabet | str") -> Optional[Word]:
    """The word denoted by ``t`` when it has no omega-powers."""
    alphabet = Alphabet.of(alphabet)
    if isinstance(t, Letter):
        return Word.parse(alphabet, t.symbol)
    if isinstance(t, Concat):
        a, b = finite_word(t.left, alphabet), finite_word(t.right, alphabet)
        return None if a is None or b is None else a + b
    return None


def evaluate_term(M: FiniteMonoid, t: OmegaTerm) -> int:
    """Value of ``t`` in any finite monoid with letter images."""
    if isinstance(t, Letter):
        if M.alphabet is None or M.letter_image is None:
            raise InputError("monoid has no letter images")
        return M.letter_image[M.alphabet.index(t.symbol)]
    if isinstance(t, Concat):
        return M.mul(evaluate_term(M, t.left), evaluate_term(M, t.right))
    return idempotent_power(M, evaluate_term(M, t.body))


def omega_eval(t: OmegaTerm, alphabet: "Alphabet | str", k: int) -> int:
    return evaluate_term(build_sk(alphabet, k), t)


class CoherentSequence:
    """The levels ``k -> omega_eval(t, k)``, filled on demand."""

    def __init__(self, term: OmegaTerm, alphabet: "Alphabet | str"):
        self.term = term
        self.alphabet = Alphabet.of(alphabet)
        self._cells: dict[int, int] = {}
        self._lock = threading.Lock()

    def at(self, k: int) -> int:
        with self._lock:
            if k in self._cells:
                return self._cells[k]
        value = omega_eval(self.term, self.alphabet, k)
        with self._lock:
            return self._cells.setdefault(k, value)

    def computed(self) -> dict[int, int]:
        with self._lock:
            return dict(sorted(self._cells.items()))

    def fill(self, max_k: Optional[int] = None) -> dict[int, int]:
        """Compute every feasible level up to ``max_k``."""
        top = get_caps().sk_max_k(len(self.alphabet))
        if max_k is not None:
            top = min(top, max_k)
        for k in range(top + 1):
            self.at(k)
        return self.computed()

    def coherent(self) -> bool:
        cells = self.computed()
        for k in cells:
            if k + 1 in cells:
                upper, lower = build_sk(self.alphabet, k + 1), build_sk(self.alphabet, k)
                if parent(upper, lower, cells[k + 1]) != cells[k]:
                    return False
        return True


# ---------------------------------------------------------------------------
# Refinement of syntactic congruences and clopen membership


def refines(M: FiniteMonoid, A: Dfa) -> bool:
    """Whether the congruence behind M refines the syntactic congruence of L(A).

    Exact: with f(e) the syntactic image of the representative of e, the
    refinement holds iff f is a monoid morphism agreeing on letters.
    """
    synt = syntactic_monoid(A)
    if M.alphabet != synt.alphabet:
        raise InputError("monoid and automaton over different alphabets")
    f = [synt.evaluate(w) for w in M.reps]
    if f[M.identity] != synt.identity:
        return False
    if any(f[M.letter_image[s]] != synt.letter_image[s] for s in range(len(M.alphabet))):
        return False
    return all(f[M.table[a][b]] == synt.table[f[a]][f[b]]
               for a in range(M.size) for b in range(M.size))


@dataclass(frozen=True)
class RefinementReport:
    k: int                      # cofinal_k(A)
    level: int                  # level at which pairs were grouped
    downgraded: bool            # level < k because k is beyond the EF caps
    max_len: int
    pairs: int                  # ≈_level-equivalent pairs of distinct words
    violations: tuple           # pairs with different syntactic images
    level_refines: Optional[bool]   # exact check for S_level, when buildable

    @property
    def passed(self) -> bool:
        return not self.violations

    def render(self) -> str:
        lines = [f"cofinal k = {self.k}"]
        if self.downgraded:
            lines.append(f"k exceeds the EF caps; pairs grouped at level {self.level} "
                         f"(every ≈_{self.k} pair is a ≈_{self.level} pair)")
        lines.append(f"words up to length {self.max_len}: {self.pairs} equivalent pairs of "
                     f"distinct words, {len(self.violations)} with different transformations")
        if self.level_refines is not None:
            lines.append(f"S_{self.level} refines the syntactic congruence: "
                         f"{str(self.level_refines).lower()}")
        lines.append(f"refinement: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def max_pair_level(max_len: int) -> int:
    caps = get_caps()
    level = 0
    for j in range(caps.max_k + 1):
        if caps.ef_positions(j) >= max_len:
            level = j
    return level


def refinement_report(A: Dfa, max_len: int = 6) -> RefinementReport:
    """Check that ≈_k, k = cofinal_k(A), identifies only syntactically equal words.

    When k is beyond the EF caps, pairs are grouped at the deepest feasible
    level j < k. Since ≈_k refines ≈_j, a pass at level j is a pass at k.
    """
    if A.tracks:
        raise InputError("refinement check needs a DFA over the base alphabet")
    k = cofinal_k(A)
    level = min(k, max_pair_level(max_len))
    synt = syntactic_monoid(A)
    groups: dict = {}
    for w in all_words(A.base, max_len):
        groups.setdefault(word_type(w, level), []).append(w)
    pairs = 0
    violations = []
    for words in groups.values():
        pairs += len(words) * (len(words) - 1) // 2
        images = {}
        for w in words:
            images.setdefault(synt.evaluate(w), w)
        if len(images) > 1:
            ws = list(images.values())
            violations.extend((str(ws[0]), str(v)) for v in ws[1:])
    try:
        level_refines = refines(build_sk(A.base, level), A)
    except ResourceError:
        level_refines = None
    return RefinementReport(k, level, level < k, max_len, pairs, tuple(violations), level_refines)


@dataclass(frozen=True)
class Membership:
    result: bool
    via: str          # "S_j" or "syntactic"
    element: int
    representative: Word


def member_closure(A: Dfa, t: OmegaTerm, allow_syntactic: bool = True) -> bool:
    return membership(A, t, allow_syntactic).result


def membership(A: Dfa, t: OmegaTerm, allow_syntactic: bool = True) -> Membership:
    """Whether the profinite point named by ``t`` lies in the clopen dual to L(A).

    Uses the smallest feasible S_j (j <= cofinal_k(A)) whose congruence
    refines the syntactic one. If none does and ``allow_syntactic`` is set,
    evaluates in the syntactic monoid, which is itself a finite quotient
    through which L(A) factors.
    """
    if A.tracks:
        raise InputError("membership needs a DFA over the base alphabet")
    k = cofinal_k(A)
    top = min(k, get_caps().sk_max_k(len(A.base)))
    for j in range(top + 1):
        M = build_sk(A.base, j)
        if refines(M, A):
            e = evaluate_term(M, t)
            return Membership(accepts(A, M.reps[e]), f"S_{j}", e, M.reps[e])
    if not allow_syntactic:
        raise ResourceError(f"membership needs S_{k} (k = cofinal_k), beyond the feasibility cap "
                            f"k <= {get_caps().sk_max_k(len(A.base))}")
    synt = syntactic_monoid(A)
    e = evaluate_term(synt, t)
    return Membership(accepts(A, synt.reps[e]), "syntactic", e, synt.reps[e])

