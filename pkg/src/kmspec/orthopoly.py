"""Karlin-McGregor polynomial systems generated by three-term recurrences.

A system is described by its recurrence ``lam Q_k = l_k Q_{k-1} + d_k Q_k + u_k Q_{k+1}``
with ``Q_0 = 1``.  For a birth-death chain ``(l, d, u) = (q_k, P(k,k), p_k)``;
for a Jacobi operator ``(l, d, u) = (b_{k-1}, a_k, b_k)`` and every weight is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, eigvalsh_tridiagonal

from .chain_model import BandedChain
from .errors import BandwidthTooLarge, EigenFailure, MultipleRoot

MAX_COEFF_DEGREE = 64


@dataclass(frozen=True)
class OrthoPolySystem:
    lower: Callable[[int], object]
    diag: Callable[[int], object]
    upper: Callable[[int], object]
    exact: bool = True
    size: int | None = None  # number of (d_k, u_k) pairs available; None means unbounded
    name: str = "system"

    @classmethod
    def from_chain(cls, chain: BandedChain) -> "OrthoPolySystem":
        if chain.m != 1:
            raise BandwidthTooLarge(
                f"chain has bandwidth {chain.m}; use banded_extension for m > 1")
        return cls(lambda k: chain.entry_exact(k, k - 1),
                   lambda k: chain.entry_exact(k, k),
                   lambda k: chain.entry_exact(k, k + 1),
                   exact=True, name=chain.name)

    @classmethod
    def from_jacobi(cls, a, b, name: str = "jacobi") -> "OrthoPolySystem":
        """Orthonormal system of the Jacobi operator with diagonal ``a`` and off-diagonal ``b``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return cls(lambda k: b[k - 1] if k > 0 else 0.0,
                   lambda k: a[k],
                   lambda k: b[k],
                   exact=False, size=min(len(a), len(b)), name=name)

    def _check(self, n: int) -> None:
        if self.size is not None and n > self.size:
            raise IndexError(f"{self.name} has recurrence data for {self.size} steps, {n} requested")

    def coeffs(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Float arrays ``l_0..l_{n-1}``, ``d_0..d_{n-1}``, ``u_0..u_{n-1}``."""
        self._check(n)
        l = np.array([float(self.lower(k)) for k in range(n)])
        d = np.array([float(self.diag(k)) for k in range(n)])
        u = np.array([float(self.upper(k)) for k in range(n)])
        return l, d, u

    def pi(self, n: int) -> np.ndarray:
        """Reversibility weights ``pi_0 .. pi_{n-1}``."""
        if self.exact:
            return np.array([float(x) for x in self.pi_exact(n)])
        self._check(max(n - 1, 0))
        out = np.ones(n)
        for j in range(1, n):
            out[j] = out[j - 1] * float(self.upper(j - 1)) / float(self.lower(j))
        return out

    def pi_exact(self, n: int) -> list[Fraction]:
        out = [Fraction(1)]
        for j in range(1, n):
            out.append(out[-1] * self.upper(j - 1) / self.lower(j))
        return out

    def leading_k(self, j: int) -> float:
        """Leading coefficient of the orthonormal polynomial ``sqrt(pi_j) Q_j``."""
        prod_u = 1.0
        for k in range(j):
            prod_u *= float(self.upper(k))
        return float(np.sqrt(self.pi(j + 1)[j])) / prod_u

    def jacobi_matrix(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal and off-diagonal of the symmetrized ``n x n`` truncation."""
        self._check(max(n - 1, 0))
        d = np.array([float(self.diag(k)) for k in range(n)])
        off = np.array([np.sqrt(float(self.upper(k)) * float(self.lower(k + 1)))
                        for k in range(n - 1)])
        return d, off


def Q_table(sys: OrthoPolySystem, n: int, lam) -> np.ndarray:
    """Values ``Q_0(lam) .. Q_{n-1}(lam)`` stacked along the first axis."""
    lam = np.asarray(lam, dtype=float)
    out = np.empty((n,) + lam.shape)
    if n == 0:
        return out
    out[0] = 1.0
    if n == 1:
        return out
    l, d, u = sys.coeffs(n - 1)
    out[1] = (lam - d[0]) / u[0]
    for k in range(1, n - 1):
        out[k + 1] = ((lam - d[k]) * out[k] - l[k] * out[k - 1]) / u[k]
    return out


def evaluate_Q(sys: OrthoPolySystem, j: int, lam):
    """``Q_j(lam)`` by forward recurrence from ``Q_0 = 1``."""
    if j < 0:
        raise ValueError("index must be non-negative")
    return Q_table(sys, j + 1, lam)[j]


def coefficients_Q(sys: OrthoPolySystem, j: int, exact: bool | None = None) -> list:
    """Monomial coefficients ``(c_0, .., c_j)`` of ``Q_j``, lowest degree first.

    Rational arithmetic is used whenever the system's recurrence data is exact.
    """
    if j > MAX_COEFF_DEGREE:
        raise ValueError(f"coefficient extraction limited to degree {MAX_COEFF_DEGREE}")
    if exact is None:
        exact = sys.exact
    if exact and not sys.exact:
        raise ValueError("system has no exact recurrence data")
    conv = (lambda x: x) if exact else float
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    prev, cur = [], [one]
    for k in range(j):
        dk, uk = conv(sys.diag(k)), conv(sys.upper(k))
        lk = conv(sys.lower(k)) if k > 0 else zero
        nxt = [zero] * (k + 2)
        for r, c in enumerate(cur):
            nxt[r + 1] += c
            nxt[r] -= dk * c
        for r, c in enumerate(prev):
            nxt[r] -= lk * c
        nxt = [c / uk for c in nxt]
        prev, cur = cur, nxt
    return cur


def orthonormal(sys: OrthoPolySystem, j: int, lam):
    """``sqrt(pi_j) Q_j(lam)``."""
    return np.sqrt(sys.pi(j + 1)[j]) * evaluate_Q(sys, j, lam)


def monic_P(sys: OrthoPolySystem, j: int, lam):
    """Monic rescaling ``sqrt(pi_j) Q_j / k_j``."""
    return orthonormal(sys, j, lam) / sys.leading_k(j)


def roots_Qn(sys: OrthoPolySystem, n: int) -> np.ndarray:
    """Zeros of ``Q_n``, computed as eigenvalues of the symmetrized truncation."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d, off = sys.jacobi_matrix(n)
    if n == 1:
        return d.copy()
    try:
        ev = eigvalsh_tridiagonal(d, off)
    except LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    ev = np.sort(ev)
    if np.any(np.diff(ev) <= 1e-13 * max(1.0, np.abs(ev).max())):
        raise MultipleRoot("repeated zero in a tridiagonal system")
    return ev
