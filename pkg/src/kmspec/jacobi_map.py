"""The spectral map from a reversible chain to its Jacobi operator.

Two independent routes produce the recurrence coefficients: moment algebra
(Chebyshev's algorithm on ``m_k = (e_0, P^k e_0)``) and Lanczos
tridiagonalization of the symmetrized operator started at ``e_0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import solve_banded

from .chain_model import BandedChain, band_array, pi_weights, propagate, symmetrize
from .errors import Breakdown, IllConditioned, NotConverged
from .orthopoly import OrthoPolySystem

EXACT_MOMENT_LIMIT = 16
COEFF_FLOOR = 1e-12
NEUMANN_RADIUS = 2.0


@dataclass(frozen=True)
class MomentSequence:
    """``m_k = (e_0, P^k e_0)`` for ``k = 0 .. len - 1``; entries are Fractions in exact mode."""

    m: tuple
    exact: bool = False

    def __len__(self):
        return len(self.m)

    @property
    def values(self) -> np.ndarray:
        return np.array([float(x) for x in self.m])

    def hankel(self, r: int) -> np.ndarray:
        v = self.values
        return np.array([[v[i + j] for j in range(r + 1)] for i in range(r + 1)])

    def hankel_min_eigenvalues(self) -> list[float]:
        """Smallest eigenvalue of each Hankel matrix ``(m_{i+j})_{i,j<=r}`` with ``2r < len``."""
        return [float(np.linalg.eigvalsh(self.hankel(r)).min()) for r in range((len(self) - 1) // 2 + 1)]


@dataclass(frozen=True)
class JacobiOperator:
    a: np.ndarray
    b: np.ndarray
    a_exact: tuple | None = None
    b2_exact: tuple | None = None

    def __post_init__(self):
        if np.any(self.b <= 0):
            raise ValueError("off-diagonal entries must be positive")

    def matrix(self, n: int | None = None) -> np.ndarray:
        n = len(self.a) if n is None else n
        J = np.diag(self.a[:n])
        off = self.b[:n - 1]
        J += np.diag(off, 1) + np.diag(off, -1)
        return J

    def moments(self, k_max: int) -> np.ndarray:
        """``(e_0, J^k e_0)`` on the stored truncation; exact for ``k <= 2 len(a) - 1``."""
        J = self.matrix()
        v = np.zeros(len(self.a))
        v[0] = 1.0
        out = [1.0]
        for _ in range(k_max):
            v = J @ v
            out.append(v[0])
        return np.array(out)

    def system(self) -> OrthoPolySystem:
        return OrthoPolySystem.from_jacobi(self.a, self.b)


def moments_from_operator(chain: BandedChain, k_max: int, exact: bool | None = None) -> MomentSequence:
    """Return moments ``m_0 .. m_{k_max}`` from powers of the truncation of size ``m k_max + 2``."""
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    if exact is None:
        exact = k_max <= EXACT_MOMENT_LIMIT
    n = chain.m * k_max + 2
    if exact:
        rows = [chain.row_exact(i) for i in range(n)]
        m = chain.m
        v = {0: Fraction(1)}
        out = [Fraction(1)]
        for _ in range(k_max):
            nxt: dict[int, Fraction] = {}
            for i, x in v.items():
                for d in range(-m, m + 1):
                    p = rows[i][d + m]
                    if p and 0 <= i + d < n:
                        nxt[i + d] = nxt.get(i + d, Fraction(0)) + x * p
            v = nxt
            out.append(v.get(0, Fraction(0)))
        return MomentSequence(tuple(out), exact=True)
    bands = band_array(chain, n)
    v = np.zeros(n)
    v[0] = 1.0
    out = [1.0]
    for _ in range(k_max):
        v = propagate(v, bands)
        out.append(float(v[0]))
    return MomentSequence(tuple(out), exact=False)


def jacobi_from_moments(mom: MomentSequence, n: int) -> JacobiOperator:
    """First ``n`` recurrence coefficients from moments by Chebyshev's algorithm.

    ``a`` always has ``n`` entries; ``b`` has ``n`` entries when ``2n + 1``
    moments are supplied and ``n - 1`` when only ``2n`` are.  In exact mode the
    arithmetic is rational and ``a`` and ``b^2`` are returned exactly as well.
    """
    K = len(mom)
    if K < 2 * n:
        raise ValueError(f"{2 * n} moments needed, {K} given")
    mu = list(mom.m[:2 * n + 1])
    K = len(mu)
    conv = (lambda x: x) if mom.exact else float
    mu = [conv(x) for x in mu]
    zero = Fraction(0) if mom.exact else 0.0

    alpha = [mu[1] / mu[0]]
    beta = [mu[0]]
    sig_prev = [zero] * K          # sigma_{k-2, .}
    sig = list(mu)                 # sigma_{k-1, .}
    for k in range(1, n + 1):
        if K < 2 * k + 1:
            break
        new = [zero] * K
        for l in range(k, K - k):
            new[l] = sig[l + 1] - alpha[k - 1] * sig[l] - beta[k - 1] * sig_prev[l]
        bk = new[k] / sig[k - 1]
        if float(bk) <= COEFF_FLOOR:
            raise IllConditioned(f"b_{k - 1}^2 = {float(bk)!r}: measure has fewer than {k + 1} support points")
        beta.append(bk)
        if k < n:
            alpha.append(new[k + 1] / new[k] - sig[k] / sig[k - 1])
        sig_prev, sig = sig, new

    a_ex = tuple(alpha[:n])
    b2_ex = tuple(beta[1:n + 1])
    a = np.array([float(x) for x in a_ex])
    b = np.sqrt(np.array([float(x) for x in b2_ex]))
    if mom.exact:
        return JacobiOperator(a, b, a_ex, b2_ex)
    return JacobiOperator(a, b)


def lanczos_jacobi(chain: BandedChain, n: int) -> JacobiOperator:
    """Tridiagonalize the symmetrized chain from ``e_0``; returns ``n`` values of ``a`` and of ``b``."""
    N = chain.m * n + 2
    S = symmetrize(chain, N)
    Q = np.zeros((N, n + 1))
    Q[0, 0] = 1.0
    a = np.zeros(n)
    b = np.zeros(n)
    for k in range(n):
        w = S @ Q[:, k]
        a[k] = Q[:, k] @ w
        w -= a[k] * Q[:, k]
        if k > 0:
            w -= b[k - 1] * Q[:, k - 1]
        for _ in range(2):
            w -= Q[:, :k + 1] @ (Q[:, :k + 1].T @ w)
        b[k] = np.linalg.norm(w)
        if b[k] < COEFF_FLOOR:
            raise Breakdown(f"Krylov space from e_0 has dimension {k + 1}")
        Q[:, k + 1] = w / b[k]
    return JacobiOperator(a, b)


def resolvent_G(chain: BandedChain, z: complex, tol: float = 1e-10, max_size: int = 2 ** 16) -> complex:
    """Diagonal resolvent entry ``(e_0, (P - z)^{-1} e_0)``.

    For ``|z| >= 2`` the Neumann series is summed until its tail bound is below
    ``tol``.  Elsewhere off ``[-1, 1]`` a banded solve is repeated with doubling
    size until successive values agree to ``tol``; the series would need
    ``O(1 / log|z|)`` terms there.
    """
    z = complex(z)
    if abs(z) >= NEUMANN_RADIUS:
        rho = 1.0 / abs(z)
        T = 1
        while rho ** T / (1.0 - rho) >= tol:
            T += 1
        mom = moments_from_operator(chain, T, exact=False).values
        k = np.arange(T + 1)
        return complex(-np.sum(mom / z ** (k + 1)))
    if z.imag == 0.0 and -1.0 <= z.real <= 1.0:
        raise NotConverged(f"z = {z} lies on [-1, 1]; the resolvent may not exist")
    m = chain.m
    pi_weights(chain, 64)
    rows = band_array(chain, 64)
    prev = None
    N = 64
    while N <= max_size:
        if len(rows) < N + m:
            extra = np.array([chain.row(i) for i in range(len(rows), N + m)])
            rows = np.vstack([rows, extra])
        # symmetric band storage for solve_banded: sqrt(P(i, i+d) P(i+d, i))
        ab = np.zeros((2 * m + 1, N), dtype=complex)
        ab[m] = rows[:N, m] - z
        for d in range(1, m + 1):
            off = np.sqrt(rows[:N - d, m + d] * rows[d:N, m - d])
            ab[m - d, d:] = off
            ab[m + d, :N - d] = off
        rhs = np.zeros(N, dtype=complex)
        rhs[0] = 1.0
        val = complex(solve_banded((m, m), ab, rhs)[0])
        if prev is not None and abs(val - prev) < tol:
            return val
        prev = val
        N *= 2
    raise NotConverged(f"resolvent at z = {z} did not settle by size {max_size}")
