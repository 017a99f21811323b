"""Numerical verification of the orthogonal-polynomial Riemann-Hilbert solution.

For a probability measure ``dpsi = w(lam) dlam`` the matrix

    m(z) = [[P_n(z),                    C(P_n)(z)],
            [-2 pi i k_{n-1}^2 P_{n-1}(z), -2 pi i k_{n-1}^2 C(P_{n-1})(z)]]

with monic ``P_j``, orthonormal leading coefficients ``k_j`` and
``C(f)(z) = (1/2 pi i) int f(lam) / (lam - z) dpsi(lam)`` satisfies
``m_+ = m_- [[1, w], [0, 1]]`` on the support and
``m(z) diag(z^-n, z^n) = I + O(1/z)`` at infinity.  Nothing is solved here:
the explicit matrix is assembled and both conditions are measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PoleOnSupport
from .kernel import generating_function
from .orthopoly import OrthoPolySystem, monic_P
from .spectral_measure import DensityMeasure, cauchy_transform

DIVERGENCE_TOL = 1e-3


@dataclass(frozen=True)
class RHMatrix:
    """The explicit solution for index ``n``; call it with ``z`` to get the 2x2 value."""

    n: int
    measure: DensityMeasure
    sys: OrthoPolySystem

    def __call__(self, z: complex) -> np.ndarray:
        return build_mn(self.n, self.measure, self.sys, z)


def _monic(sys: OrthoPolySystem, j: int):
    return lambda lam: monic_P(sys, j, lam)


def build_mn(n: int, measure: DensityMeasure, sys: OrthoPolySystem, z: complex) -> np.ndarray:
    """Evaluate ``m^(n)(z)``; ``n = 0`` gives ``[[1, C(1)], [0, 1]]``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    z = complex(z)
    out = np.zeros((2, 2), dtype=complex)
    out[0, 0] = _monic_complex(sys, n, z)
    out[0, 1] = cauchy_transform(measure, _monic(sys, n), z)
    if n == 0:
        out[1, 1] = 1.0
        return out
    k2 = sys.leading_k(n - 1) ** 2
    out[1, 0] = -2j * np.pi * k2 * _monic_complex(sys, n - 1, z)
    out[1, 1] = -2j * np.pi * k2 * cauchy_transform(measure, _monic(sys, n - 1), z)
    return out


def _monic_complex(sys: OrthoPolySystem, j: int, z: complex) -> complex:
    """Monic ``P_j(z)`` for complex ``z`` from the monic three-term recurrence."""
    if j == 0:
        return 1.0 + 0j
    l, d, u = sys.coeffs(j)
    prev, cur = 0j, 1.0 + 0j
    for k in range(j):
        # monic form: P_{k+1} = (z - d_k) P_k - u_{k-1} l_k P_{k-1}
        nxt = (z - d[k]) * cur - (u[k - 1] * l[k] if k > 0 else 0.0) * prev
        prev, cur = cur, nxt
    return cur


def _neville(xs: Sequence[float], ys: Sequence[np.ndarray]) -> tuple[np.ndarray, float]:
    """Polynomial extrapolation of ``ys`` to ``x = 0``; returns the value and last correction."""
    table = [np.asarray(y, dtype=complex) for y in ys]
    n = len(xs)
    correction = 0.0
    for level in range(1, n):
        new = []
        for k in range(n - level):
            x0, x1 = xs[k], xs[k + level]
            new.append((x1 * table[k] - x0 * table[k + 1]) / (x1 - x0))
        correction = float(np.max(np.abs(new[-1] - table[-1])))
        table = new
    return table[0], correction


def _polynomial_column_jump(n: int, sys: OrthoPolySystem, x: float) -> float:
    upper, lower = complex(x, 0.0), complex(x, -0.0)
    top = abs(_monic_complex(sys, n, upper) - _monic_complex(sys, n, lower))
    if n == 0:
        return float(top)
    k2 = sys.leading_k(n - 1) ** 2
    bottom = 2 * np.pi * k2 * abs(_monic_complex(sys, n - 1, upper) - _monic_complex(sys, n - 1, lower))
    return float(max(top, bottom))


@dataclass(frozen=True)
class JumpResult:
    """``residual`` is the extrapolated ``|m_+ - m_- v|_max``; ``raw_residuals`` are per ``eps``."""

    n: int
    x: float
    residual: float
    raw_residuals: tuple[float, ...]
    column1_residual: float


def check_jump(n: int, measure: DensityMeasure, x: float, sys: OrthoPolySystem,
               eps_list: Sequence[float] = (1e-3, 1e-4, 1e-5)) -> JumpResult:
    """Residual of ``m_+ = m_- v`` at ``x``, extrapolated to zero distance from the support."""
    if not isinstance(measure, DensityMeasure):
        raise TypeError("the jump condition needs a measure with a density")
    a, b = measure.support
    if not a < x < b:
        raise ValueError(f"x = {x} is not interior to the support [{a}, {b}]")
    w = float(measure.density(np.array([x]))[0])
    v = np.array([[1.0, w], [0.0, 1.0]])
    diffs, raw = [], []
    for eps in eps_list:
        plus = build_mn(n, measure, sys, complex(x, eps))
        minus = build_mn(n, measure, sys, complex(x, -eps))
        d = plus - minus @ v
        diffs.append(d)
        raw.append(float(np.max(np.abs(d))))
    # the polynomial column is entire: its boundary values from both sides coincide
    col1 = _polynomial_column_jump(n, sys, x)
    limit, correction = _neville(list(eps_list), diffs)
    if not np.all(np.isfinite(limit)) or correction > DIVERGENCE_TOL:
        raise PoleOnSupport(f"extrapolation to the support diverges at x = {x}")
    return JumpResult(n, float(x), float(np.max(np.abs(limit))), tuple(raw), col1)


@dataclass(frozen=True)
class AsymptoticsResult:
    n: int
    z: tuple[complex, ...]
    deviations: tuple[float, ...]
    fitted_C: float
    slope: float
    monotone: bool


def default_z_list(direction: float = np.pi / 3) -> list[complex]:
    return [r * np.exp(1j * direction) for r in (4.0, 8.0, 16.0, 32.0)]


def check_asymptotics(n: int, measure: DensityMeasure, sys: OrthoPolySystem,
                      z_list: Sequence[complex] | None = None) -> AsymptoticsResult:
    """Deviation ``|m(z) diag(z^-n, z^n) - I|_max`` along ``z_list`` with a ``C / |z|`` fit."""
    if z_list is None:
        z_list = default_z_list()
    z_list = [complex(z) for z in z_list]
    if any(abs(z) < 4.0 for z in z_list):
        raise ValueError("asymptotic checks require |z| >= 4")
    devs = []
    for z in z_list:
        m = build_mn(n, measure, sys, z) @ np.diag([z ** -n, z ** n])
        devs.append(float(np.max(np.abs(m - np.eye(2)))))
    r = np.array([abs(z) for z in z_list])
    d = np.array(devs)
    slope = float(np.polyfit(np.log(r), np.log(d), 1)[0]) if len(r) > 1 else float("nan")
    fitted_C = float(np.max(d * r))
    order = np.argsort(r)
    monotone = bool(np.all(np.diff(d[order]) < 0))
    return AsymptoticsResult(n, tuple(z_list), tuple(devs), fitted_C, slope, monotone)


def gf_from_rh(n: int, measure: DensityMeasure, sys: OrthoPolySystem, z: complex) -> complex:
    """``G_{0,n}(z) = sum_t p_t(0, n) z^-t`` read off entry (1, 2) of ``m^(n)``.

    ``G_{0,n}(z) = -2 pi i k_n sqrt(pi_n) z m_12(z)``.
    """
    z = complex(z)
    if abs(z) <= 1.0:
        raise ValueError("the generating function series needs |z| > 1")
    m12 = build_mn(n, measure, sys, z)[0, 1]
    return complex(-2j * np.pi * sys.leading_k(n) * np.sqrt(sys.pi(n + 1)[n]) * z * m12)


def entry22_from_gf(n: int, measure: DensityMeasure, sys: OrthoPolySystem, z: complex) -> complex:
    """Entry (2, 2) of ``m^(n)`` predicted from ``G_{0,n-1}``: ``k_{n-1} G_{0,n-1}(z) / (sqrt(pi_{n-1}) z)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    z = complex(z)
    g = generating_function(sys, measure, 0, n - 1, z)
    return complex(sys.leading_k(n - 1) * g / (np.sqrt(sys.pi(n)[n - 1]) * z))


def gf_relative_difference(n: int, measure: DensityMeasure, sys: OrthoPolySystem, z: complex) -> float:
    ref = generating_function(sys, measure, 0, n, z)
    got = gf_from_rh(n, measure, sys, z)
    return float(abs(got - ref) / max(abs(ref), 1e-300))
