"""Chains with jumps of size up to ``m``: vector solution families and branch-resolved spectra.

For a (2m+1)-diagonal operator the eigenvector recurrence has ``m`` free
starting values, so a single polynomial family no longer suffices.  The
pentadiagonal example ``P = s(P_ch)``, ``s(x) = x^2 + x/2 - 1/2``, is
diagonalized over a two-sided contour whose edges carry the two roots
``mu_+`` and ``mu_-`` of ``s(x) = lam``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate as sp_integrate
from scipy.optimize import brentq

from . import _backend
from .chain_model import (BandedChain, band_array, chebyshev_chain, pentadiagonal_chebyshev, pi_weights,
                          truncate)
from .errors import OutsideDomain, SingularLeadingBand
from .spectral_measure import TwoSidedContourMeasure, piece_integrals, two_sided_measure

S_EDGE = -9.0 / 16.0


@dataclass(frozen=True)
class VectorSolutionFamily:
    """``values[r, j] = Q_{r, j}(lam)``: column ``j`` starts from ``Q_{r, j} = delta_rj``, ``r < m``."""

    m: int
    lam: float
    values: np.ndarray

    def combine(self, mu) -> np.ndarray:
        """General solution ``q_0 + mu_1 q_1 + ... + mu_{m-1} q_{m-1}``."""
        coef = np.concatenate(([1.0], np.atleast_1d(np.asarray(mu, dtype=float))))
        return self.values @ coef


def _leading_bands(chain: BandedChain, rows: int) -> np.ndarray:
    bands = band_array(chain, rows) if rows > 0 else np.zeros((0, 2 * chain.m + 1))
    zero = np.nonzero(bands[:, -1] == 0.0)[0]
    if zero.size:
        raise SingularLeadingBand(f"P({zero[0]}, {zero[0] + chain.m}) = 0; cannot solve forward")
    return np.ascontiguousarray(bands)


def solution_table(chain: BandedChain, lams, n: int) -> np.ndarray:
    """Values ``Q_{r, j}(lam)`` for ``r < n`` at every ``lam``; shape ``(len(lams), n, m)``."""
    m = chain.m
    lams = np.ascontiguousarray(np.atleast_1d(np.asarray(lams, dtype=float)))
    bands = _leading_bands(chain, max(n - m, 0))
    out = _backend.banded_recurrence(bands, lams, m)
    return out[:, :n, :]


def vector_solutions(chain: BandedChain, lam: float, n: int) -> VectorSolutionFamily:
    """The ``m`` unit-start solutions of ``lam q = P q`` on rows ``0 .. n-1``."""
    return VectorSolutionFamily(chain.m, float(lam), solution_table(chain, [lam], n)[0])


def spectrum_det(chain: BandedChain, n: int, lam, normalize: bool = False):
    """``det [Q_{n+r, j}(lam)]_{r, j < m}``; its zeros are the eigenvalues of ``A_n``.

    With ``normalize`` the determinant is divided by the product of the block's
    row norms, so it lies in ``[-1, 1]``.
    """
    m = chain.m
    scalar = np.ndim(lam) == 0
    tab = solution_table(chain, lam, n + m)
    block = tab[:, n:n + m, :]
    det = np.linalg.det(block)
    if normalize:
        det = det / np.prod(np.linalg.norm(block, axis=2), axis=1)
    return float(det[0]) if scalar else det


def det_zeros(chain: BandedChain, n: int, lo: float = -1.0, hi: float = 1.0,
              grid: int = 4001, max_grid: int = 2 ** 20) -> np.ndarray:
    """Zeros of :func:`spectrum_det` on ``[lo, hi]`` by sign-change scan and bisection.

    The grid is refined until ``n`` zeros are found or ``max_grid`` is reached.
    """
    while True:
        xs = np.linspace(lo, hi, grid)
        d = spectrum_det(chain, n, xs)
        roots = list(xs[d == 0.0])
        s = np.sign(d)
        idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
        f = lambda x: spectrum_det(chain, n, x)
        roots += [brentq(f, xs[k], xs[k + 1], xtol=1e-15) for k in idx]
        if len(roots) >= n or grid >= max_grid:
            return np.sort(np.array(roots))
        grid = 4 * grid - 3


def s_poly(x):
    """``s(x) = x^2 + x/2 - 1/2 = (x + 1/4)^2 - 9/16``."""
    return x * x + x / 2 - Fraction(1, 2) if isinstance(x, Fraction) else x * x + 0.5 * x - 0.5


def s_compose_check(N: int) -> Fraction:
    """Max entry difference between ``s(A_N(P_ch))`` and ``A_N(P)`` over rows ``0 .. N-3``, exactly."""
    if N < 5:
        raise ValueError("N must be at least 5")
    C = truncate(chebyshev_chain(), N, exact=True)
    P = truncate(pentadiagonal_chebyshev(), N, exact=True)
    eye = np.empty((N, N), dtype=object)
    eye[:] = Fraction(0)
    for k in range(N):
        eye[k, k] = Fraction(1)
    S = C @ C + C * Fraction(1, 2) - eye * Fraction(1, 2)
    return max(abs(S[i, j] - P[i, j]) for i in range(N - 2) for j in range(N))


def mu_branches(lam):
    """The two roots ``(-1 +- sqrt(9 + 16 lam)) / 4`` of ``s(x) = lam``."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr < S_EDGE):
        raise OutsideDomain(f"lam must be >= -9/16, got {lam}")
    root = np.sqrt(9.0 + 16.0 * lam_arr)
    plus, minus = (-1.0 + root) / 4.0, (-1.0 - root) / 4.0
    if np.ndim(lam) == 0:
        return float(plus), float(minus)
    return plus, minus


def admissible(lam, branch: str) -> bool:
    """A branch yields bounded eigenfunctions iff ``|mu| <= 1``."""
    plus, minus = mu_branches(lam)
    return abs(plus if branch == "plus" else minus) <= 1.0


def q_with_branch(lam, branch: str, n: int, chain: BandedChain | None = None) -> np.ndarray:
    """``Q_0 .. Q_{n-1}`` from ``Q_0 = 1``, ``Q_1 = mu_branch(lam)`` by the pentadiagonal recurrence.

    Vectorized over ``lam``; the result has shape ``(n,) + shape(lam)``.
    """
    if branch not in ("plus", "minus", "real"):
        raise ValueError(f"unknown branch {branch!r}")
    plus, minus = mu_branches(lam)
    mu = np.asarray(minus if branch == "minus" else plus, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if chain is None:
        chain = pentadiagonal_chebyshev()
    m = chain.m
    if m != 2:
        raise ValueError("branch-resolved solutions are defined for bandwidth 2")
    bands = _leading_bands(chain, max(n - m, 0))
    Q = np.zeros((max(n, m),) + lam.shape)
    Q[0] = 1.0
    Q[1] = mu
    for k in range(n - m):
        acc = lam * Q[k]
        for d in range(-m, m):
            if k + d >= 0:
                acc = acc - bands[k, d + m] * Q[k + d]
        Q[k + m] = acc / bands[k, 2 * m]
    return Q[:n]


def characteristic_roots(lam: float) -> np.ndarray:
    """Roots of ``z^4 + z^3 - 4 lam z^2 + z + 1``, the interior recurrence's characteristic polynomial."""
    return np.roots([1.0, 1.0, -4.0 * lam, 1.0, 1.0])


def fourier_resolvent(z: complex, tol: float = 1e-14) -> complex:
    """``(1/2pi) int_0^{2pi} dtheta / (s(cos theta) - z)``, where ``s(cos theta) = (cos theta + cos 2 theta)/2``.

    The integrand is periodic and analytic for ``z`` off ``[-9/16, 1]``, so the
    trapezoid rule converges geometrically; the node count doubles until it settles.
    """
    z = complex(z)
    if abs(z.imag) < 1e-12 and S_EDGE <= z.real <= 1.0:
        raise OutsideDomain(f"z = {z} lies on the spectrum")
    prev = None
    N = 16
    while N <= 2 ** 20:
        theta = 2.0 * np.pi * np.arange(N) / N
        val = complex(np.mean(1.0 / (0.5 * (np.cos(theta) + np.cos(2.0 * theta)) - z)))
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        prev = val
        N *= 2
    raise OutsideDomain(f"trapezoid rule did not settle at z = {z}")


def contour_pt_pieces(i: int, j: int, t: int,
                      measure: TwoSidedContourMeasure | None = None) -> list[tuple[str, float]]:
    """Per-piece contributions ``pi_j int lam^t Q_i Q_j dpsi_piece`` with branch-resolved ``Q``."""
    if measure is None:
        measure = two_sided_measure()
    n = max(i, j) + 1
    pi_j = pi_weights(pentadiagonal_chebyshev(), j + 1).pi[j]

    def f(lam, side):
        Q = q_with_branch(lam, side, max(n, 2))
        return lam ** t * Q[i] * Q[j]

    vals = piece_integrals(measure, f)
    return [(p.side, float(pi_j * v)) for p, v in zip(measure.pieces, vals)]


def contour_pt(i: int, j: int, t: int, measure: TwoSidedContourMeasure | None = None) -> float:
    """``p_t(i, j)`` for the pentadiagonal chain from the two-sided contour measure."""
    return float(sum(v for _, v in contour_pt_pieces(i, j, t, measure)))


@dataclass(frozen=True)
class ProbeResult:
    z: complex
    value: complex
    reference: complex
    deviation: float


def _sqrt_arg_0_2pi(z: complex) -> complex:
    arg = np.angle(z) % (2.0 * np.pi)
    return np.sqrt(abs(z)) * np.exp(0.5j * arg)


def mu_analytic_probe(z: complex) -> ProbeResult:
    """Evaluate ``-1/4 + z^{1/2} exp{(1/2) int_{-9/16}^0 ds / (s - z)}`` literally.

    ``z^{1/2}`` uses the ``0 <= arg z < 2 pi`` branch and the cut integral is
    computed by quadrature.  The reference is the radical branch matching the
    side of the cut (``mu_+`` above, ``mu_-`` below, ``mu_+`` off the cut).
    Diagnostic only: nothing else depends on it.
    """
    z = complex(z)
    on_cut = abs(z.imag) < 1e-15 and S_EDGE <= z.real <= 0.0
    side_minus = z.imag < 0 and S_EDGE < z.real < 0.0
    x = max(z.real, S_EDGE)
    plus, minus = mu_branches(x)
    reference = complex(minus if side_minus else plus)
    if not S_EDGE <= z.real <= 0.0:
        reference = -0.25 + np.sqrt(z + 9.0 / 16.0 + 0j)
    if on_cut:
        return ProbeResult(z, complex(np.nan, np.nan), reference, float("nan"))
    pts = [z.real] if S_EDGE < z.real < 0.0 else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
        re = sp_integrate.quad(lambda s: (1.0 / (s - z)).real, S_EDGE, 0.0, limit=500, points=pts)[0]
        im = sp_integrate.quad(lambda s: (1.0 / (s - z)).imag, S_EDGE, 0.0, limit=500, points=pts)[0]
    value = -0.25 + _sqrt_arg_0_2pi(z) * np.exp(0.5 * (re + 1j * im))
    return ProbeResult(z, complex(value), reference, float(abs(value - reference)))
