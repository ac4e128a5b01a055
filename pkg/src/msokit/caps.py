"""Resource caps.

Every enumeration of a full 2^n universe, every EF type computation and every
automaton construction is bounded by one of these limits. Defaults can be
overridden with the ``MSOKIT_CAPS`` environment variable, either as JSON
(``{"positions": 10}``) or as ``key=value`` pairs separated by commas
(``positions=10,max_k=2``).
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

from .errors import InputError, ResourceError


@dataclass(frozen=True)
class Caps:
    positions: int = 12            # structures enumerated in full
    eval_positions_deep: int = 8   # evaluate() on formulas of qd >= 2
    union_iso_positions: int = 8
    ef_positions_k1: int = 12      # tp() with k <= 1
    ef_positions_k2: int = 8
    ef_positions_k3: int = 5
    max_k: int = 3
    dfa_states: int = 100_000
    tracks: int = 6
    monoid_size: int = 10_000
    # build_sk feasibility: largest k per alphabet size
    sk_k_unary: int = 2
    sk_k_binary: int = 1
    sk_k_other: int = 0

    def ef_positions(self, k: int) -> int:
        if k > self.max_k:
            raise ResourceError(f"k={k} exceeds the EF depth cap {self.max_k}")
        if k <= 1:
            return self.ef_positions_k1
        if k == 2:
            return self.ef_positions_k2
        return self.ef_positions_k3

    def sk_max_k(self, alphabet_size: int) -> int:
        if alphabet_size == 1:
            return self.sk_k_unary
        if alphabet_size == 2:
            return self.sk_k_binary
        return self.sk_k_other

    def replace(self, **changes) -> "Caps":
        return dataclasses.replace(self, **changes)


def _parse_overrides(text: str) -> dict:
    text = text.strip()
    if not text:
        return {}
    if text.startswith("{"):
        data = json.loads(text)
    else:
        data = {}
        for part in text.split(","):
            key, sep, value = part.partition("=")
            if not sep:
                raise InputError(f"bad MSOKIT_CAPS entry {part!r}")
            data[key.strip()] = value.strip()
    names = {f.name for f in dataclasses.fields(Caps)}
    out = {}
    for key, value in data.items():
        if key not in names:
            raise InputError(f"unknown cap {key!r}")
        value = int(value)
        if value < 0 or (value == 0 and not key.startswith("sk_")):
            raise InputError(f"cap {key} must be positive")
        out[key] = value
    return out


_current = Caps(**_parse_overrides(os.environ.get("MSOKIT_CAPS", "")))


def get_caps() -> Caps:
    return _current


def set_caps(caps: Caps) -> Caps:
    """Install ``caps`` process-wide and return the previous value."""
    global _current
    previous, _current = _current, caps
    return previous
