"""Deterministic automata and the formula-to-automaton compiler.

A DFA reads either plain words over the base alphabet or *tracked* words: the
base word together with ``m`` parallel 0/1 tracks, one per set variable. The
symbol index of (letter ``s``, track bits ``b``) is ``s * 2**m + b`` where bit
``i`` of ``b`` is the value of track ``i``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

from .caps import get_caps
from .errors import InputError, ResourceError
from .logic.ast import (
    FALSE, TRUE, And, At, Before, Bottom, Const, Eq, Exists, Forall, Formula, Iff, Implies, IsP,
    Mem, Not, Or, Sub, Var, conj, disj, free_vars,
)
from .logic.transform import desugar, qd
from .semigroup import FiniteMonoid
from .words import Alphabet, Word


class Dfa:
    """Complete DFA with states ``0..n-1``; ``delta`` has shape (n, symbols)."""

    __slots__ = ("base", "tracks", "start", "accepting", "delta")

    def __init__(self, base: Alphabet, tracks: int, start: int, accepting, delta):
        delta = np.asarray(delta, dtype=np.int64)
        nsym = len(base) << tracks
        if delta.ndim != 2 or delta.shape[1] != nsym:
            raise InputError(f"transition table must have {nsym} columns")
        n = delta.shape[0]
        if n == 0:
            raise InputError("a DFA needs at least one state")
        if not 0 <= start < n:
            raise InputError(f"start state {start} out of range")
        if delta.size and (delta.min() < 0 or delta.max() >= n):
            raise InputError("transition target out of range")
        acc = np.zeros(n, dtype=bool)
        for q in accepting:
            if not 0 <= q < n:
                raise InputError(f"accepting state {q} out of range")
            acc[q] = True
        delta.setflags(write=False)
        acc.setflags(write=False)
        self.base = base
        self.tracks = tracks
        self.start = int(start)
        self.accepting = acc
        self.delta = delta

    @property
    def states(self) -> int:
        return self.delta.shape[0]

    @property
    def symbols(self) -> int:
        return self.delta.shape[1]

    def accepting_states(self) -> list[int]:
        return [int(q) for q in np.flatnonzero(self.accepting)]

    def __eq__(self, other):
        return (isinstance(other, Dfa) and self.base == other.base and self.tracks == other.tracks
                and self.start == other.start and np.array_equal(self.accepting, other.accepting)
                and np.array_equal(self.delta, other.delta))

    def __hash__(self):
        return hash((self.base, self.tracks, self.start, self.accepting.tobytes(), self.delta.tobytes()))

    def __repr__(self):
        return (f"Dfa(states={self.states}, tracks={self.tracks}, start={self.start}, "
                f"accepting={self.accepting_states()})")

    def run(self, symbols: Iterable[int]) -> int:
        q = self.start
        d = self.delta
        for s in symbols:
            q = d[q, s]
        return int(q)

    # -- JSON --------------------------------------------------------------

    def to_json(self) -> dict:
        if self.tracks:
            raise InputError("only DFAs over the base alphabet can be serialised")
        return {
            "alphabet": list(self.base.symbols),
            "states": self.states,
            "start": self.start,
            "accepting": self.accepting_states(),
            "delta": self.delta.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "Dfa":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise InputError(f"invalid DFA JSON: {exc}") from None
        try:
            alphabet = Alphabet.of(list(data["alphabet"]))
            n = int(data["states"])
            delta = data["delta"]
            if len(delta) != n:
                raise InputError(f"delta has {len(delta)} rows, expected {n}")
            return cls(alphabet, 0, int(data["start"]), list(data["accepting"]), delta)
        except (KeyError, TypeError) as exc:
            raise InputError(f"DFA file missing or malformed field {exc}") from None


def load_dfa(path: str) -> Dfa:
    try:
        with open(path, encoding="utf-8") as fh:
            return Dfa.from_json(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read DFA file: {exc}") from None


def _check_states(n: int):
    cap = get_caps().dfa_states
    if n > cap:
        raise ResourceError(f"automaton construction exceeded the state cap {cap}")


# ---------------------------------------------------------------------------
# Construction helpers


def from_step(base: Alphabet, tracks: int, start: Hashable,
              step: Callable[[Hashable, int], Hashable],
              accept: Callable[[Hashable], bool]) -> Dfa:
    """Explore the reachable part of an implicitly given automaton."""
    nsym = len(base) << tracks
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        q = order[i]
        row = []
        for s in range(nsym):
            r = step(q, s)
            j = ids.get(r)
            if j is None:
                j = ids[r] = len(order)
                order.append(r)
                _check_states(len(order))
            row.append(j)
        rows.append(row)
        i += 1
    return Dfa(base, tracks, 0, [ids[q] for q in order if accept(q)], rows)


def minimize(A: Dfa) -> Dfa:
    """Minimal complete DFA, states numbered breadth-first from the start."""
    d = A.delta
    reach = _reachable(A)
    # Moore refinement on the reachable part
    idx = np.flatnonzero(reach)
    remap = np.full(A.states, -1, dtype=np.int64)
    remap[idx] = np.arange(len(idx))
    sub = remap[d[idx]]
    block = A.accepting[idx].astype(np.int64)
    nblocks = len(np.unique(block))
    while True:
        sig = np.concatenate([block[:, None], block[sub]], axis=1)
        _, new_block = np.unique(sig, axis=0, return_inverse=True)
        new_block = new_block.reshape(-1)
        count = int(new_block.max()) + 1
        if count == nblocks:
            block = new_block
            break
        block, nblocks = new_block, count
    # quotient automaton, then canonical BFS numbering
    qdelta = np.zeros((nblocks, A.symbols), dtype=np.int64)
    qacc = np.zeros(nblocks, dtype=bool)
    qdelta[block] = block[sub]
    qacc[block] = A.accepting[idx]
    qstart = block[remap[A.start]]
    order = [int(qstart)]
    pos = {int(qstart): 0}
    i = 0
    while i < len(order):
        for t in qdelta[order[i]]:
            t = int(t)
            if t not in pos:
                pos[t] = len(order)
                order.append(t)
        i += 1
    perm = np.array([pos[b] for b in range(nblocks)], dtype=np.int64)
    new_delta = perm[qdelta[order]]
    return Dfa(A.base, A.tracks, 0, [pos[b] for b in range(nblocks) if qacc[b]], new_delta)


def _reachable(A: Dfa) -> np.ndarray:
    seen = np.zeros(A.states, dtype=bool)
    seen[A.start] = True
    frontier = np.array([A.start])
    while frontier.size:
        nxt = np.unique(A.delta[frontier])
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


def complement(A: Dfa) -> Dfa:
    return Dfa(A.base, A.tracks, A.start, np.flatnonzero(~A.accepting), A.delta)


_BOOL_OPS = {
    "and": lambda a, b: a & b,
    "or": lambda a, b: a | b,
    "implies": lambda a, b: ~a | b,
    "iff": lambda a, b: a == b,
    "xor": lambda a, b: a != b,
}


def product(A: Dfa, B: Dfa, op: str) -> Dfa:
    """Reachable synchronous product with acceptance combined by ``op``."""
    if A.base != B.base or A.tracks != B.tracks:
        raise InputError("product of automata over different alphabets")
    nb = B.states
    start = A.start * nb + B.start
    seen = {start}
    codes = [start]
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        p, q = np.divmod(frontier, nb)
        nxt = np.unique(A.delta[p] * nb + B.delta[q])
        new = [c for c in nxt.tolist() if c not in seen]
        seen.update(new)
        codes.extend(new)
        _check_states(len(codes))
        frontier = np.array(new, dtype=np.int64)
    codes_arr = np.array(sorted(codes), dtype=np.int64)
    p, q = np.divmod(codes_arr, nb)
    targets = A.delta[p] * nb + B.delta[q]
    delta = np.searchsorted(codes_arr, targets)
    acc = _BOOL_OPS[op](A.accepting[p], B.accepting[q])
    start_idx = int(np.searchsorted(codes_arr, start))
    return minimize(Dfa(A.base, A.tracks, start_idx, np.flatnonzero(acc), delta))


def project(A: Dfa, track: int) -> Dfa:
    """Existentially quantify ``track`` away (subset construction + minimisation)."""
    m = A.tracks
    if not 0 <= track < m:
        raise InputError(f"no track {track}")
    new_m = m - 1
    low_mask = (1 << track) - 1
    nsym = len(A.base) << new_m
    pairs = []
    for s in range(nsym):
        sigma, bits = divmod(s, 1 << new_m)
        low = bits & low_mask
        high = bits >> track
        old = (high << (track + 1)) | low
        pairs.append((sigma * (1 << m) + old, sigma * (1 << m) + old + (1 << track)))
    cols0 = np.array([p[0] for p in pairs])
    cols1 = np.array([p[1] for p in pairs])
    d0 = A.delta[:, cols0]
    d1 = A.delta[:, cols1]
    start = (A.start,)
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        members = np.array(order[i])
        targets = np.concatenate([d0[members], d1[members]], axis=0)
        row = []
        for s in range(nsym):
            key = tuple(np.unique(targets[:, s]).tolist())
            j = ids.get(key)
            if j is None:
                j = ids[key] = len(order)
                order.append(key)
                _check_states(len(order))
            row.append(j)
        rows.append(row)
        i += 1
    acc = [j for j, key in enumerate(order) if A.accepting[list(key)].any()]
    return minimize(Dfa(A.base, new_m, 0, acc, rows))


def universal(base: Alphabet, tracks: int = 0) -> Dfa:
    return Dfa(base, tracks, 0, [0], np.zeros((1, len(base) << tracks), dtype=np.int64))


def empty(base: Alphabet, tracks: int = 0) -> Dfa:
    return Dfa(base, tracks, 0, [], np.zeros((1, len(base) << tracks), dtype=np.int64))


# ---------------------------------------------------------------------------
# Compiler


def _bit(tracks: int, t: Optional[int]):
    if t is None:
        return lambda s: 0
    mask = 1 << t
    return lambda s: 1 if s & mask else 0


def _atomic(f: Formula, base: Alphabet, tracks: int, track_of) -> Dfa:
    if isinstance(f, Const):
        return universal(base, tracks) if f.value else empty(base, tracks)
    args = [None if isinstance(t, Bottom) else track_of(t) for t in _terms(f)]
    bits = [_bit(tracks, t) for t in args]
    dead = "dead"
    if isinstance(f, Sub):
        x, y = bits
        step = lambda q, s: dead if q == dead or (x(s) and not y(s)) else 0
        return from_step(base, tracks, 0, step, lambda q: q == 0)
    if isinstance(f, Eq):
        x, y = bits
        step = lambda q, s: dead if q == dead or x(s) != y(s) else 0
        return from_step(base, tracks, 0, step, lambda q: q == 0)
    if isinstance(f, Before):
        x, y = bits

        def step(q, s):
            if q == 2 or (q == 1 and y(s)):
                return 2
            return 1 if x(s) else q

        return from_step(base, tracks, 0, step, lambda q: q == 2)
    if isinstance(f, At):
        (x,) = bits
        step = lambda q, s: min(q + x(s), 2)
        return from_step(base, tracks, 0, step, lambda q: q == 1)
    if isinstance(f, IsP):
        (x,) = bits
        sigma = base.index(f.symbol)
        shift = tracks

        def step(q, s):
            if q == dead or not x(s):
                return q
            if q == 1 or (s >> shift) != sigma:
                return dead
            return 1

        return from_step(base, tracks, 0, step, lambda q: q == 1)
    raise TypeError(f)


def _terms(f):
    if isinstance(f, (Eq, Sub, Before)):
        return (f.left, f.right)
    return (f.term,)


def compile_formula(phi: Formula, alphabet: "Alphabet | str",
                    free: Sequence = (), minimal: bool = True) -> Dfa:
    """Automaton over base x {0,1}^len(free) accepting the satisfying valuations.

    Free atom variables are constrained to singleton tracks.
    """
    base = Alphabet.of(alphabet)
    free = [v if isinstance(v, Var) else Var(v) for v in free]
    if len(set(free)) != len(free):
        raise InputError("duplicate free variable")
    f = desugar(phi)
    missing = free_vars(f) - set(free)
    if missing:
        raise InputError("formula has unlisted free variables: "
                         + ", ".join(sorted(v.name for v in missing)))
    for g in _walk(f):
        if isinstance(g, IsP) and g.symbol not in base.symbols:
            raise InputError(f"unknown symbol {g.symbol!r}")
    A = _compile(f, base, [v.name for v in free])
    for i, v in enumerate(free):
        if v.is_atom:
            A = product(A, _atomic(At(v), base, len(free), lambda t, i=i: i), "and")
    return minimize(A) if minimal else A


def _walk(f):
    from .logic.ast import subformulas

    return subformulas(f)


def _compile(f: Formula, base: Alphabet, names: list[str]) -> Dfa:
    m = len(names)
    if m > get_caps().tracks:
        raise ResourceError(f"{m} simultaneous set variables exceeds the track cap {get_caps().tracks}")

    def track_of(t: Var) -> int:
        for i in range(m - 1, -1, -1):
            if names[i] == t.name:
                return i
        raise InputError(f"unbound variable {t.name}")

    if isinstance(f, (Const, Eq, Sub, Before, At, IsP)):
        return _atomic(f, base, m, track_of)
    if isinstance(f, Mem):
        return _atomic(Sub(f.element, f.set), base, m, track_of)
    if isinstance(f, Not):
        return complement(_compile(f.body, base, names))
    if isinstance(f, (And, Or, Implies, Iff)):
        op = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}[type(f)]
        return product(_compile(f.left, base, names), _compile(f.right, base, names), op)
    if isinstance(f, Exists):
        return project(_compile(f.body, base, names + [f.var.name]), m)
    if isinstance(f, Forall):
        inner = complement(_compile(f.body, base, names + [f.var.name]))
        return complement(project(inner, m))
    raise TypeError(f"not a formula: {f!r}")


def accepts(A: Dfa, w: Word) -> bool:
    if A.tracks:
        raise InputError("automaton expects tracked words")
    if w.alphabet != A.base:
        for s in w.alphabet.symbols:
            if s not in A.base.symbols:
                raise InputError(f"symbol {s!r} not in the automaton's alphabet")
        w = Word(A.base, tuple(A.base.index(w.alphabet.symbols[i]) for i in w.letters))
    return bool(A.accepting[A.run(w.letters)])


def accepts_tracked(A: Dfa, w: Word, tracks: Sequence[Sequence[int]]) -> bool:
    if len(tracks) != A.tracks or any(len(t) != len(w) for t in tracks):
        raise InputError("track count or length mismatch")
    m = A.tracks
    symbols = []
    for i, s in enumerate(w.letters):
        bits = sum((tracks[j][i] & 1) << j for j in range(m))
        symbols.append((s << m) | bits)
    return bool(A.accepting[A.run(symbols)])


def language(A: Dfa, max_len: int) -> set[str]:
    from .words import all_words

    return {str(w) for w in all_words(A.base, max_len) if accepts(A, w)}


def is_empty(A: Dfa) -> bool:
    return not A.accepting[_reachable(A)].any()


def equivalent(A: Dfa, B: Dfa) -> bool:
    return is_empty(product(A, B, "xor"))


# ---------------------------------------------------------------------------
# Language operations


def lang_concat(A: Dfa, B: Dfa) -> Dfa:
    """DFA for {uv : u in L(A), v in L(B)}."""
    if A.tracks or B.tracks or A.base != B.base:
        raise InputError("lang_concat needs DFAs over the same base alphabet")

    def close(p, qs):
        if A.accepting[p]:
            qs = qs | {B.start}
        return (p, frozenset(qs))

    start = close(A.start, frozenset())

    def step(state, s):
        p, qs = state
        return close(int(A.delta[p, s]), {int(B.delta[q, s]) for q in qs})

    def accept(state):
        return any(B.accepting[q] for q in state[1])

    return minimize(from_step(A.base, 0, start, step, accept))


def transformation(A: Dfa, w: Word) -> tuple[int, ...]:
    """State map induced by ``w``."""
    cur = np.arange(A.states)
    for s in w.letters:
        cur = A.delta[cur, s]
    return tuple(cur.tolist())


def syntactic_monoid(A: Dfa) -> FiniteMonoid:
    """Transition monoid of the minimal automaton of L(A)."""
    if A.tracks:
        raise InputError("syntactic monoid needs a DFA over the base alphabet")
    M = minimize(A)
    cap = get_caps().monoid_size
    n = M.states
    identity = tuple(range(n))
    letters = [tuple(M.delta[:, s].tolist()) for s in range(M.symbols)]
    ids = {identity: 0}
    elems = [identity]
    reps = [Word(M.base, ())]
    i = 0
    while i < len(elems):
        t = elems[i]
        for s, g in enumerate(letters):
            u = tuple(g[q] for q in t)
            if u not in ids:
                ids[u] = len(elems)
                elems.append(u)
                reps.append(Word(M.base, reps[i].letters + (s,)))
                if len(elems) > cap:
                    raise ResourceError(f"syntactic monoid exceeds the size cap {cap}")
        i += 1
    table = tuple(tuple(ids[tuple(b[q] for q in a)] for b in elems) for a in elems)
    letter_image = tuple(ids[g] for g in letters)
    return FiniteMonoid(table, 0, tuple(reps), M.base, letter_image, name="syntactic")


# ---------------------------------------------------------------------------
# Automaton to sentence


def dfa_to_sentence(A: Dfa) -> tuple[Formula, int]:
    """A sentence defining L(A), by guessing the run as one set per state.

    ``X_q`` holds the positions after which the automaton is in state ``q``.
    Returns the sentence and its quantifier depth.
    """
    if A.tracks:
        raise InputError("dfa_to_sentence needs a DFA over the base alphabet")
    A = minimize(A)
    n = A.states
    acc = A.accepting
    if n == 1:
        f = TRUE if acc[0] else FALSE
        return f, qd(f)
    syms = A.base.symbols
    X = [Var(f"X{q}") for q in range(n)]
    x, y, z = Var("x"), Var("y"), Var("z")

    def state(q, v):
        return Mem(v, X[q])

    one_state = Forall(x, disj(*[
        conj(state(q, x), *[Not(state(r, x)) for r in range(n) if r != q]) for q in range(n)
    ]))
    first = Not(Exists(y, Before(y, x)))
    initial = Forall(x, Implies(first, conj(*[
        Implies(IsP(syms[s], x), state(int(A.delta[A.start, s]), x)) for s in range(len(syms))
    ])))
    succ = And(Before(x, y), Not(Exists(z, And(Before(x, z), Before(z, y)))))
    moves = Forall(x, Forall(y, Implies(succ, conj(*[
        Implies(And(state(q, x), IsP(syms[s], y)), state(int(A.delta[q, s]), y))
        for q in range(n) for s in range(len(syms))
    ]))))
    last = Not(Exists(y, Before(x, y)))
    final = Forall(x, Implies(last, disj(*[state(q, x) for q in range(n) if acc[q]])))
    body = conj(one_state, initial, moves, final)
    run = And(Exists(x, TRUE), _exists_all(X, body))
    f = Or(Not(Exists(x, TRUE)), run) if acc[A.start] else run
    return f, qd(f)


def _exists_all(vs, body):
    for v in reversed(vs):
        body = Exists(v, body)
    return body


def cofinal_k(A: Dfa) -> int:
    """A depth k at which ≈_k refines the syntactic congruence of L(A)."""
    return dfa_to_sentence(A)[1]


# ---------------------------------------------------------------------------
# Fixture automata used throughout the test and self-test suites


def fixture_dfas() -> dict[str, Dfa]:
    a, ab = Alphabet.of("a"), Alphabet.of("ab")
    return {
        "sigma-star": Dfa(ab, 0, 0, [0], [[0, 0]]),
        "even-length-a": Dfa(a, 0, 0, [0], [[1], [0]]),
        "contains-ab": Dfa(ab, 0, 0, [2], [[1, 0], [1, 2], [2, 2]]),
        "length-0-mod-3": Dfa(a, 0, 0, [0], [[1], [2], [0]]),
        "ends-in-b": Dfa(ab, 0, 0, [1], [[0, 1], [0, 1]]),
    }
