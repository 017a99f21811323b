"""JSON chain descriptions.

Numbers are parsed as exact fractions; strings such as ``"1/3"`` are accepted
too.  Recognized kinds::

    {"kind": "chebyshev"}
    {"kind": "pentadiagonal_chebyshev"}
    {"kind": "birth_death", "p": [...], "q": [...]}          # last value repeats
    {"kind": "banded", "m": 2, "rows": [[...], ...], "tail_row": [...]}
    {"kind": "conductance", "m": 2, "rows": [[c_i0, .., c_im], ...], "tail_row": [...]}
    {"kind": "random_conductance", "m": 2, "seed": 5, "head": 8}

Banded rows are in offset form ``P(i, i-m) .. P(i, i+m)``.  Conductance rows list
``c(i, i), c(i, i+1), .., c(i, i+m)``; symmetry supplies the rest.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .chain_model import (BandedChain, BirthDeathChain, as_fraction, chebyshev_chain,
                          conductance_chain, pentadiagonal_chebyshev)
from .errors import ConfigInvalid

KINDS = ("chebyshev", "pentadiagonal_chebyshev", "birth_death", "banded", "conductance",
         "random_conductance")


def _numbers(values, what: str) -> list[Fraction]:
    if not isinstance(values, list) or not values:
        raise ConfigInvalid(f"{what} must be a non-empty list")
    try:
        return [as_fraction(v) for v in values]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigInvalid(f"{what}: {exc}") from exc


def _int(spec: dict, key: str, default=None) -> int:
    v = spec.get(key, default)
    if isinstance(v, Fraction) and v.denominator == 1:
        v = int(v)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigInvalid(f"{key} must be an integer")
    return v


def table_conductance(m: int, rows: list[list[Fraction]], tail: list[Fraction]):
    """Symmetric conductance ``c(i, j)`` from upper-band rows ``c(i, i) .. c(i, i+m)``."""
    if any(len(r) != m + 1 for r in rows) or len(tail) != m + 1:
        raise ConfigInvalid(f"conductance rows need {m + 1} entries")

    def c(i, j):
        lo, hi = min(i, j), max(i, j)
        r = rows[lo] if lo < len(rows) else tail
        return r[hi - lo]

    return c


def random_conductance_chain(m: int, seed: int, head: int = 8) -> BandedChain:
    """Reversible chain with random dyadic conductances ``k/8`` on the first ``head`` rows."""
    rng = np.random.Generator(np.random.Philox(seed))
    rows = [[Fraction(int(k), 8) for k in rng.integers(1, 9, size=m + 1)] for _ in range(head)]
    tail = [Fraction(int(k), 8) for k in rng.integers(1, 9, size=m + 1)]
    return conductance_chain(m, table_conductance(m, rows, tail), name=f"random_conductance_m{m}_s{seed}")


def chain_from_dict(spec: dict) -> BandedChain:
    if not isinstance(spec, dict):
        raise ConfigInvalid("chain spec must be a JSON object")
    kind = spec.get("kind")
    if kind not in KINDS:
        raise ConfigInvalid(f"unknown chain kind {kind!r}; expected one of {KINDS}")
    try:
        if kind == "chebyshev":
            return chebyshev_chain()
        if kind == "pentadiagonal_chebyshev":
            return pentadiagonal_chebyshev()
        if kind == "birth_death":
            return BirthDeathChain(_numbers(spec.get("p"), "p"), _numbers(spec.get("q"), "q"),
                                   name=str(spec.get("name", "birth_death")))
        m = _int(spec, "m")
        if m < 1:
            raise ConfigInvalid("m must be positive")
        if kind == "random_conductance":
            return random_conductance_chain(m, _int(spec, "seed", 0), _int(spec, "head", 8))
        rows = spec.get("rows", [])
        if not isinstance(rows, list):
            raise ConfigInvalid("rows must be a list")
        rows = [_numbers(r, f"rows[{k}]") for k, r in enumerate(rows)]
        tail = _numbers(spec.get("tail_row"), "tail_row")
        name = str(spec.get("name", kind))
        if kind == "banded":
            return BandedChain.from_rows(m, rows, tail, name=name)
        return conductance_chain(m, table_conductance(m, rows, tail), name=name)
    except ConfigInvalid:
        raise
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc


def load_chain(path) -> BandedChain:
    """Read a chain description from a JSON file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read {path}: {exc}") from exc
    try:
        spec = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{path}: invalid JSON ({exc})") from exc
    return chain_from_dict(spec)
