"""Transition probabilities and generating functions from spectral data.

Every spectral route has an exact counterpart here: ``pt_oracle`` takes
powers of a truncation sized by band locality, so the finite computation is
exact for the infinite chain.
"""

from __future__ import annotations

import numpy as np

from .chain_model import BandedChain, locality_size, matrix_power_row, pi_weights, symmetrize, truncate
from .errors import Breakdown, DegreeTooHigh
from .jacobi_map import JacobiOperator, lanczos_jacobi
from .orthopoly import OrthoPolySystem, Q_table
from .spectral_measure import DiscreteMeasure, integrate, psi_n, stieltjes


def pt_oracle(chain: BandedChain, i: int, j: int, t: int, exact: bool = False):
    """``P^t[i, j]`` on the truncation ``max(i, j) + m t + 1``."""
    n = locality_size(chain, i, j, t)
    return matrix_power_row(chain, i, t, n, exact=exact)[j]


def pt_oracle_matrix(chain: BandedChain, t: int, size: int) -> np.ndarray:
    """``P^t`` restricted to states ``0 .. size-1``, exact by band locality."""
    n = size + chain.m * t
    A = truncate(chain, n)
    return np.linalg.matrix_power(A, t)[:size, :size]


def _check_degree(measure, degree: int) -> None:
    if isinstance(measure, DiscreteMeasure):
        n = len(measure.nodes)
        if 2 * n - 1 < degree:
            raise DegreeTooHigh(f"a {n}-point rule is exact to degree {2 * n - 1}, {degree} needed")


def pt_spectral(sys: OrthoPolySystem, measure, i: int, j: int, t: int) -> float:
    """``pi_j int lam^t Q_i Q_j dpsi``."""
    _check_degree(measure, t + i + j)
    n = max(i, j) + 1
    pi_j = sys.pi(j + 1)[j]

    def f(lam):
        Q = Q_table(sys, n, lam)
        return lam ** t * Q[i] * Q[j]

    return float(pi_j * integrate(measure, f))


def spectral_kernel(sys: OrthoPolySystem, measure: DiscreteMeasure, t: int, size: int) -> np.ndarray:
    """``pt_spectral`` for all ``i, j < size`` at once from a discrete measure."""
    _check_degree(measure, t + 2 * (size - 1))
    Q = Q_table(sys, size, measure.nodes)
    M = (Q * (measure.weights * measure.nodes ** t)) @ Q.T
    return M * sys.pi(size)[None, :]


def generating_function(sys: OrthoPolySystem, measure, i: int, j: int, z: complex) -> complex:
    """``G_ij(z) = sum_t z^-t p_t(i, j) = -z pi_j int Q_i Q_j / (lam - z) dpsi``."""
    z = complex(z)
    if abs(z) <= 1.0:
        raise ValueError("the generating function is defined for |z| > 1")
    n = max(i, j) + 1
    pi_j = sys.pi(j + 1)[j]

    def f(lam):
        Q = Q_table(sys, n, lam)
        return Q[i] * Q[j]

    return -z * pi_j * stieltjes(measure, f, z)


def gf_partial_sum(chain: BandedChain, i: int, j: int, z: complex, T: int) -> tuple[complex, float]:
    """``sum_{t<=T} z^-t p_t(i, j)`` and the bound on the omitted tail."""
    z = complex(z)
    n = locality_size(chain, i, j, T)
    A = truncate(chain, n)
    v = np.zeros(n)
    v[i] = 1.0
    total = 0j
    for t in range(T + 1):
        total += v[j] / z ** t
        v = v @ A
    rho = 1.0 / abs(z)
    return total, rho ** (T + 1) / (1.0 - rho)


def f_basis(chain: BandedChain, n: int, jac: JacobiOperator | None = None) -> np.ndarray:
    """Columns ``f_k = Q_k(S) e_0``, ``k < n``, on the symmetrized truncation of size ``m n + 2``.

    ``Q_k`` are the orthonormal polynomials of the chain's Jacobi operator.
    """
    if jac is None:
        jac = lanczos_jacobi(chain, n)
    N = chain.m * n + 2
    S = symmetrize(chain, N)
    F = np.zeros((N, n))
    F[0, 0] = 1.0
    for k in range(n - 1):
        if jac.b[k] < 1e-12:
            raise Breakdown(f"b_{k} vanishes")
        w = S @ F[:, k] - jac.a[k] * F[:, k]
        if k > 0:
            w -= jac.b[k - 1] * F[:, k - 1]
        F[:, k + 1] = w / jac.b[k]
    return F


def fbasis_kernel(chain: BandedChain, t: int, size: int, n: int | None = None,
                  measure=None) -> np.ndarray:
    """``F [int s^t Q_a Q_b dpsi]_ab F^T``, mapped back to ``P^t`` on states ``< size``.

    ``n`` is the number of basis columns (default ``t + size + 1``).  The
    measure defaults to the Gauss rule of the Jacobi operator, which is exact
    for every entry of the moment matrix.
    """
    if n is None:
        n = t + size + 1
    n_gauss = n + t // 2 + 1
    jac = lanczos_jacobi(chain, n_gauss)
    F = f_basis(chain, n, jac)
    sys = jac.system()
    if measure is None:
        measure = psi_n(sys, n_gauss)
    if isinstance(measure, DiscreteMeasure):
        Q = Q_table(sys, n, measure.nodes)
        M = (Q * (measure.weights * measure.nodes ** t)) @ Q.T
    else:
        M = np.empty((n, n))
        for a in range(n):
            for b in range(a, n):
                M[a, b] = M[b, a] = integrate(
                    measure, lambda lam: lam ** t * Q_table(sys, n, lam)[a] * Q_table(sys, n, lam)[b])
    sym = F[:size] @ M @ F[:size].T
    sq = np.sqrt(pi_weights(chain, size).pi)
    return sym * sq[None, :] / sq[:, None]


def pt_fbasis(chain: BandedChain, i: int, j: int, t: int, measure=None, n: int | None = None) -> float:
    """Entry ``(i, j)`` of :func:`fbasis_kernel`."""
    return float(fbasis_kernel(chain, t, max(i, j) + 1, n, measure)[i, j])
