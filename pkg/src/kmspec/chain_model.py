"""Banded reversible Markov operators on the half-line {0, 1, 2, ...}.

A chain is never materialized in full.  Every quantity is computed on a
finite truncation whose size follows the band-locality rule: with bandwidth
``m`` a path of ``t`` steps from state ``i`` never leaves ``0 .. i + m*t``,
so truncations at least that large give exact answers.

Transition probabilities are held as :class:`fractions.Fraction` so the
dyadic examples can be handled exactly; float views are derived on demand.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import NotReversible, ZeroProbabilityEdge

Number = Union[Fraction, int, float]

BALANCE_TOL = 1e-10
ROW_SUM_TOL = 1e-14


def as_fraction(x) -> Fraction:
    """Exact rational view of ``x``; strings such as ``"0.25"`` or ``"1/4"`` are accepted."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _sequence_fn(values) -> Callable[[int], Fraction]:
    """Index into ``values``; the last entry repeats for all larger indices."""
    if callable(values):
        return lambda k: as_fraction(values(k))
    vals = tuple(as_fraction(v) for v in values)
    if not vals:
        raise ValueError("empty probability sequence")
    last = len(vals) - 1
    return lambda k: vals[min(k, last)]


@dataclass(frozen=True)
class BandedChain:
    """A (2m+1)-diagonal transition operator defined row by row.

    ``row_fn(i)`` returns the ``2m + 1`` probabilities ``P(i, i-m) .. P(i, i+m)``;
    entries whose target is negative must be zero.
    """

    m: int
    row_fn: Callable[[int], Sequence[Number]]
    name: str = "banded"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("bandwidth must be a positive integer")

    def row_exact(self, i: int) -> tuple[Fraction, ...]:
        r = tuple(as_fraction(x) for x in self.row_fn(i))
        if len(r) != 2 * self.m + 1:
            raise ValueError(f"row {i} has {len(r)} entries, expected {2 * self.m + 1}")
        return r

    def row(self, i: int) -> np.ndarray:
        return np.array([float(x) for x in self.row_exact(i)])

    def entry_exact(self, i: int, j: int) -> Fraction:
        d = j - i
        if abs(d) > self.m or j < 0:
            return Fraction(0)
        return self.row_exact(i)[d + self.m]

    def entry(self, i: int, j: int) -> float:
        return float(self.entry_exact(i, j))

    def validate(self, n: int) -> None:
        """Check stochasticity and band structure of rows ``0 .. n-1``."""
        for i in range(n):
            r = self.row_exact(i)
            if any(x < 0 for x in r):
                raise ValueError(f"negative probability in row {i}")
            for d in range(-self.m, 0):
                if i + d < 0 and r[d + self.m] != 0:
                    raise ValueError(f"row {i} sends mass to negative state {i + d}")
            if abs(float(sum(r)) - 1.0) > ROW_SUM_TOL:
                raise ValueError(f"row {i} sums to {float(sum(r))!r}")

    @classmethod
    def from_rows(cls, m: int, rows: Sequence[Sequence[Number]], tail_row: Sequence[Number],
                  name: str = "banded") -> "BandedChain":
        """Chain whose first rows are listed explicitly and all later rows equal ``tail_row``."""
        head = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        tail = tuple(as_fraction(x) for x in tail_row)

        def row_fn(i):
            return head[i] if i < len(head) else tail

        chain = cls(m, row_fn, name)
        chain.validate(len(head) + m + 1)
        return chain


class BirthDeathChain(BandedChain):
    """Nearest-neighbour chain with forward probabilities ``p`` and backward ``q``.

    ``p`` and ``q`` are sequences (the last value repeats forever) or callables.
    ``q[0]`` is ignored; the holding probability at 0 is ``1 - p[0]``.
    """

    def __init__(self, p, q, name: str = "birth_death"):
        pf, qf = _sequence_fn(p), _sequence_fn(q)

        def row_fn(k):
            if k == 0:
                return (Fraction(0), 1 - pf(0), pf(0))
            return (qf(k), 1 - pf(k) - qf(k), pf(k))

        super().__init__(1, row_fn, name)
        object.__setattr__(self, "p", pf)
        object.__setattr__(self, "q", qf)
        if not 0 < pf(0) <= 1:
            raise ValueError("p_0 must lie in (0, 1]")
        for k in range(1, 64):
            if pf(k) <= 0 or qf(k) <= 0 or pf(k) + qf(k) > 1:
                raise ValueError(f"invalid birth-death probabilities at state {k}")


def chebyshev_chain() -> BirthDeathChain:
    """Simple random walk reflecting at 0: row 0 is (0, 1), then (1/2, 0, 1/2)."""
    half = Fraction(1, 2)
    return BirthDeathChain([Fraction(1), half], [Fraction(0), half], name="chebyshev")


def pentadiagonal_chebyshev() -> BandedChain:
    """Walk with equiprobable jumps of size one and two, reflecting at 0."""
    h, q = Fraction(1, 2), Fraction(1, 4)
    z = Fraction(0)
    rows = [(z, z, z, h, h), (z, q, q, q, q)]
    return BandedChain.from_rows(2, rows, (q, q, z, q, q), name="pentadiagonal")


def conductance_chain(m: int, conductance: Callable[[int, int], Number],
                      name: str = "conductance") -> BandedChain:
    """Reversible chain ``P(i, j) = c(i, j) / sum_k c(i, k)`` from symmetric conductances.

    ``conductance(i, j)`` is queried for ``|i - j| <= m`` with ``i, j >= 0``; it must
    be symmetric.  The diagonal term acts as a holding weight.
    """

    def row_fn(i):
        c = [as_fraction(conductance(i, i + d)) if i + d >= 0 else Fraction(0)
             for d in range(-m, m + 1)]
        total = sum(c)
        return tuple(x / total for x in c)

    return BandedChain(m, row_fn, name)


@dataclass(frozen=True)
class ReversibleWeights:
    """Detailed-balance weights normalized to ``pi[0] == 1``."""

    pi: np.ndarray
    exact: tuple[Fraction, ...]

    def __len__(self):
        return len(self.exact)


def pi_weights(chain: BandedChain, n: int) -> ReversibleWeights:
    """Solve detailed balance on states ``0 .. n-1`` by spanning-tree propagation.

    Every edge of the truncated transition graph is audited afterwards, so an
    inconsistent cycle raises :class:`NotReversible`.
    """
    m = chain.m
    rows = [chain.row_exact(i) for i in range(n)]

    def P(i, j):
        return rows[i][j - i + m]

    pi: list[Fraction | None] = [None] * n
    pi[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(max(0, i - m), min(n, i + m + 1)):
            if j == i or pi[j] is not None:
                continue
            fwd, back = P(i, j), P(j, i)
            if fwd == 0 and back == 0:
                continue
            if fwd == 0 or back == 0:
                raise NotReversible(f"edge {i}->{j} is one-directional")
            pi[j] = pi[i] * fwd / back
            queue.append(j)
    missing = [k for k, v in enumerate(pi) if v is None]
    if missing:
        raise ZeroProbabilityEdge(f"states {missing[:5]} unreachable from 0 within the truncation")

    for i in range(n):
        for j in range(i + 1, min(n, i + m + 1)):
            flux_ij, flux_ji = pi[i] * P(i, j), pi[j] * P(j, i)
            scale = max(1.0, float(flux_ij))
            if abs(float(flux_ij - flux_ji)) > BALANCE_TOL * scale:
                raise NotReversible(f"detailed balance fails on edge ({i}, {j})")
    exact = tuple(pi)
    return ReversibleWeights(np.array([float(x) for x in exact]), exact)


def truncate(chain: BandedChain, n: int, exact: bool = False) -> np.ndarray:
    """The ``n x n`` restriction ``A_n``; mass leaving past ``n-1`` is dropped, not renormalized."""
    if n < 1:
        raise ValueError("n must be at least 1")
    A = np.zeros((n, n), dtype=object if exact else float)
    if exact:
        A[:] = Fraction(0)
    m = chain.m
    for i in range(n):
        r = chain.row_exact(i)
        for d in range(-m, m + 1):
            j = i + d
            if 0 <= j < n and r[d + m] != 0:
                A[i, j] = r[d + m] if exact else float(r[d + m])
    return A


def symmetrize(chain: BandedChain, n: int) -> np.ndarray:
    """``D A_n D^-1`` with ``D = diag(sqrt(pi))``.

    Entries are formed as ``sqrt(P(i,j) P(j,i))``, which equals the similarity
    transform under detailed balance and is symmetric to the last bit.
    """
    pi_weights(chain, n)
    m = chain.m
    S = np.zeros((n, n))
    for i in range(n):
        for j in range(i, min(n, i + m + 1)):
            v = chain.entry_exact(i, j) * chain.entry_exact(j, i)
            S[i, j] = S[j, i] = float(v) ** 0.5 if i != j else float(chain.entry_exact(i, i))
    return S


def locality_size(chain: BandedChain, i: int, j: int, t: int) -> int:
    """Smallest truncation on which ``P^t[i, j]`` is exact."""
    return max(i, j) + chain.m * t + 1


def matrix_power_row(chain: BandedChain, i: int, t: int, n: int | None = None,
                     exact: bool = False) -> np.ndarray:
    """Row ``i`` of ``A_n^t``, by repeated vector-matrix products."""
    if n is None:
        n = i + chain.m * t + 1
    A = truncate(chain, n, exact=exact)
    v = np.zeros(n, dtype=object if exact else float)
    if exact:
        v[:] = Fraction(0)
        v[i] = Fraction(1)
    else:
        v[i] = 1.0
    for _ in range(t):
        v = v @ A
    return v


def band_array(chain: BandedChain, n: int) -> np.ndarray:
    """Rows ``0 .. n-1`` as an ``(n, 2m+1)`` float array in offset form."""
    return np.array([chain.row(i) for i in range(n)])


def propagate(v: np.ndarray, bands: np.ndarray) -> np.ndarray:
    """One step ``v -> v A_n`` using the offset-form band array of ``A_n``."""
    n, width = bands.shape
    m = (width - 1) // 2
    out = np.zeros_like(v)
    for c in range(width):
        d = c - m
        lo, hi = max(0, -d), min(n, n - d)
        if lo < hi:
            out[lo + d:hi + d] += v[lo:hi] * bands[lo:hi, c]
    return out
