"""Finite monoids given by multiplication tables."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError
from .words import Alphabet, Word


@dataclass(frozen=True)
class FiniteMonoid:
    """Multiplication table over elements ``0..size-1``.

    ``reps[i]`` is a word whose image is ``i``; ``letter_image[s]`` is the
    image of the one-letter word ``s`` when the monoid is a quotient of a
    free monoid.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int
    reps: tuple[Word, ...]
    alphabet: Optional[Alphabet] = None
    letter_image: Optional[tuple[int, ...]] = None
    name: str = ""

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def check_associative(self, samples: int = 20_000, seed: int = 0) -> bool:
        n = self.size
        t = self.table
        if n <= 200:
            return all(t[t[x][y]][z] == t[x][t[y][z]]
                       for x in range(n) for y in range(n) for z in range(n))
        rng = random.Random(seed)
        for _ in range(samples):
            x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if t[t[x][y]][z] != t[x][t[y][z]]:
                return False
        return True

    def check_identity(self) -> bool:
        e = self.identity
        return all(self.table[e][x] == x and self.table[x][e] == x for x in range(self.size))

    def evaluate(self, w: Word) -> int:
        if self.letter_image is None:
            raise InputError("monoid has no letter images")
        x = self.identity
        for letter in w.letters:
            x = self.table[x][self.letter_image[letter]]
        return x

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "identity": self.identity,
            "table": [list(row) for row in self.table],
            "reps": [str(w) for w in self.reps],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict, alphabet: "Alphabet | str") -> "FiniteMonoid":
        alphabet = Alphabet.of(alphabet)
        try:
            size, identity, table, reps = data["size"], data["identity"], data["table"], data["reps"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"monoid file missing field {exc}") from None
        if len(table) != size or any(len(r) != size for r in table) or len(reps) != size:
            raise InputError("monoid table/reps do not match declared size")
        if not 0 <= identity < size or any(not 0 <= x < size for r in table for x in r):
            raise InputError("monoid entries out of range")
        words = tuple(Word.parse(alphabet, r) for r in reps)
        images = []
        for s in range(len(alphabet)):
            hit = [i for i, w in enumerate(words) if w.letters == (s,)]
            images.append(hit[0] if hit else None)
        letter_image = tuple(images) if None not in images else None
        return cls(tuple(tuple(r) for r in table), identity, words, alphabet, letter_image)


def idempotent_power(M: FiniteMonoid, x: int) -> int:
    """The unique idempotent among x, x^2, x^3, ...

    The powers of x run into a cycle; its single idempotent is x^m for the
    unique multiple m of the cycle length inside the cycle.
    """
    seen = {}
    powers = []
    p, i = x, 1
    while p not in seen:
        seen[p] = i
        powers.append(p)
        p = M.mul(p, x)
        i += 1
    start = seen[p]           # x^start == x^i; cycle length i - start
    period = i - start
    m = period
    while m < start:
        m += period
    return powers[m - 1]
