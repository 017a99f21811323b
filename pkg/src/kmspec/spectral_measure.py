"""Spectral measures: truncation approximants, closed-form limits, moments, Cauchy transforms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import quadrature
from .errors import PoleOnSupport
from .orthopoly import OrthoPolySystem, Q_table, roots_Qn

POLE_TOL = 1e-12
NEAR_POLE_FRACTION = 0.25


@dataclass(frozen=True)
class DiscreteMeasure:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {self.weights.sum()!r}")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")


@dataclass(frozen=True)
class DensityPiece:
    """Density on ``[a, b]``; ``gap_density(lam, lam - a, b - lam)`` is an optional accurate form."""

    a: float
    b: float
    density: Callable[[np.ndarray], np.ndarray]
    gap_density: Callable | None = None

    @property
    def weight(self):
        if self.gap_density is not None:
            return self.gap_density
        return lambda lam, ga, gb: self.density(lam)


@dataclass(frozen=True)
class DensityMeasure:
    """Absolutely continuous measure, possibly split into pieces at singular points."""

    pieces: tuple[DensityPiece, ...]
    singular_points: tuple[float, ...] = ()
    name: str = "density"

    @property
    def support(self) -> tuple[float, float]:
        return min(p.a for p in self.pieces), max(p.b for p in self.pieces)

    def density(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        last = len(self.pieces) - 1
        for idx, p in enumerate(self.pieces):
            inside = (lam >= p.a) & ((lam < p.b) | ((lam == p.b) & (idx == last)))
            if np.any(inside):
                out = np.where(inside, out + p.density(np.where(inside, lam, 0.5 * (p.a + p.b))), out)
        return out


@dataclass(frozen=True)
class ContourPiece:
    a: float
    b: float
    side: str  # "plus", "minus" or "real"
    density: Callable[[np.ndarray], np.ndarray]
    gap_density: Callable | None = None

    @property
    def weight(self):
        if self.gap_density is not None:
            return self.gap_density
        return lambda lam, ga, gb: self.density(lam)


@dataclass(frozen=True)
class TwoSidedContourMeasure:
    """Measure on the two edges of a cut plus a real segment.

    Integrands receive ``(lam, side)`` so they can select the solution branch.
    """

    pieces: tuple[ContourPiece, ...]
    name: str = "contour"

    def projection(self, lam):
        """Sum of all piece densities at real ``lam`` (sides forgotten)."""
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        top = max(p.b for p in self.pieces)
        for p in self.pieces:
            inside = (lam >= p.a) & ((lam < p.b) | ((lam == p.b) & (p.b == top)))
            out = np.where(inside, out + p.density(np.where(inside, lam, 0.5 * (p.a + p.b))), out)
        return out


Measure = DiscreteMeasure | DensityMeasure | TwoSidedContourMeasure


def christoffel_sum(sys: OrthoPolySystem, n: int, lam):
    """``sum_{k<n} pi_k Q_k(lam)^2``."""
    Q = Q_table(sys, n, lam)
    pi = sys.pi(n).reshape((n,) + (1,) * (Q.ndim - 1))
    return np.sum(pi * Q * Q, axis=0)


def chebyshev_christoffel_closed(n: int, lam):
    """``n - 1/2 + sin((2n - 1) x) / (2 sin x)`` with ``lam = cos x``, for ``-1 < lam < 1``."""
    x = np.arccos(np.asarray(lam, dtype=float))
    return n - 0.5 + np.sin((2 * n - 1) * x) / (2.0 * np.sin(x))


def psi_n(sys: OrthoPolySystem, n: int) -> DiscreteMeasure:
    """Truncation measure: zeros of ``Q_n`` weighted by inverse Christoffel sums."""
    nodes = roots_Qn(sys, n)
    weights = 1.0 / christoffel_sum(sys, n, nodes)
    return DiscreteMeasure(nodes, weights)


def _arcsine_density(lam):
    return 1.0 / (np.pi * np.sqrt((1.0 - lam) * (1.0 + lam)))


def _arcsine_gaps(lam, ga, gb):
    return 1.0 / (np.pi * np.sqrt(ga * gb))


def arcsine_measure() -> DensityMeasure:
    """``dlam / (pi sqrt(1 - lam^2))`` on ``[-1, 1]``."""
    return DensityMeasure((DensityPiece(-1.0, 1.0, _arcsine_density, _arcsine_gaps),), (-1.0, 1.0), "arcsine")


PENTA_EDGE = -9.0 / 16.0


def _root(lam):
    return np.sqrt(np.maximum(lam + 9.0 / 16.0, 0.0))


def _plus_from(r, one_minus_lam):
    # 1 - (r - 1/4)^2 = (5/4 - r)(3/4 + r), and 5/4 - r = (1 - lam)/(5/4 + r)
    gap = one_minus_lam / (1.25 + r) * (0.75 + r)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 1.0 / (2.0 * np.pi * r * np.sqrt(gap))


def _minus_from(r, minus_lam):
    # 1 - (r + 1/4)^2 = (3/4 - r)(5/4 + r), and 3/4 - r = -lam/(3/4 + r)
    gap = minus_lam / (0.75 + r) * (1.25 + r)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 1.0 / (2.0 * np.pi * r * np.sqrt(gap))


def penta_density_plus(lam):
    """Branch ``x = -1/4 + sqrt(lam + 9/16)`` contribution on ``[-9/16, 1]``."""
    lam = np.asarray(lam, dtype=float)
    return _plus_from(_root(lam), 1.0 - lam)


def penta_density_minus(lam):
    """Branch ``x = -1/4 - sqrt(lam + 9/16)`` contribution on ``[-9/16, 0)``."""
    lam = np.asarray(lam, dtype=float)
    return _minus_from(_root(lam), -lam)


# gap forms on the pieces [-9/16, 0] and [0, 1]
def _plus_cut(lam, ga, gb):
    return _plus_from(np.sqrt(ga), 1.0 - lam)


def _minus_cut(lam, ga, gb):
    return _minus_from(np.sqrt(ga), gb)


def _both_cut(lam, ga, gb):
    return _plus_cut(lam, ga, gb) + _minus_cut(lam, ga, gb)


def _plus_real(lam, ga, gb):
    return _plus_from(_root(lam), gb)


def pentadiagonal_measure() -> DensityMeasure:
    """Spectral measure at state 0 of the equiprobable one/two-step walk."""
    return DensityMeasure(
        (DensityPiece(PENTA_EDGE, 0.0, lambda s: penta_density_plus(s) + penta_density_minus(s), _both_cut),
         DensityPiece(0.0, 1.0, penta_density_plus, _plus_real)),
        (PENTA_EDGE, 0.0, 1.0), "pentadiagonal")


def two_sided_measure() -> TwoSidedContourMeasure:
    """Lower edge of the cut carries the minus branch, upper edge and ``[0, 1]`` the plus branch."""
    return TwoSidedContourMeasure(
        (ContourPiece(PENTA_EDGE, 0.0, "minus", penta_density_minus, _minus_cut),
         ContourPiece(PENTA_EDGE, 0.0, "plus", penta_density_plus, _plus_cut),
         ContourPiece(0.0, 1.0, "real", penta_density_plus, _plus_real)),
        "two_sided_pentadiagonal")


def integrate(measure: Measure, f, tol: float = 1e-12):
    """``int f dpsi``.  For contour measures ``f`` is called as ``f(lam, side)``."""
    if isinstance(measure, DiscreteMeasure):
        return np.sum(measure.weights * f(measure.nodes))
    if isinstance(measure, DensityMeasure):
        total = 0.0
        for p in measure.pieces:
            val, _ = quadrature.integrate_interval(f, p.a, p.b, tol, weight=p.weight)
            total = total + val
        return total
    if isinstance(measure, TwoSidedContourMeasure):
        return sum(piece_integrals(measure, f, tol))
    raise TypeError(f"unsupported measure {type(measure).__name__}")


def piece_integrals(measure: TwoSidedContourMeasure, f, tol: float = 1e-12) -> list:
    """Per-piece contributions, in piece order."""
    out = []
    for p in measure.pieces:
        val, _ = quadrature.integrate_interval(
            lambda x, p=p: f(x, p.side), p.a, p.b, tol, weight=p.weight)
        out.append(val)
    return out


def moments(measure: Measure, k: int) -> float:
    """``int s^k dpsi(s)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(measure, TwoSidedContourMeasure):
        return float(integrate(measure, lambda x, side: x ** k))
    return float(integrate(measure, lambda x: x ** k))


def _distance(z: complex, a: float, b: float) -> float:
    if a <= z.real <= b:
        return abs(z.imag)
    return abs(z - (a if z.real < a else b))


def stieltjes(measure: Measure, f, z: complex) -> complex:
    """``int f(lam) / (lam - z) dpsi(lam)``."""
    z = complex(z)
    if isinstance(measure, DiscreteMeasure):
        if np.min(np.abs(measure.nodes - z)) < POLE_TOL:
            raise PoleOnSupport(f"z = {z} coincides with an atom")
        return complex(np.sum(measure.weights * f(measure.nodes) / (measure.nodes - z)))
    if isinstance(measure, DensityMeasure):
        total = 0j
        for p in measure.pieces:
            dist = _distance(z, p.a, p.b)
            if dist < POLE_TOL:
                raise PoleOnSupport(f"z = {z} lies on the support [{p.a}, {p.b}]")
            if dist < NEAR_POLE_FRACTION * (p.b - p.a):
                total += quadrature.integrate_near_pole(f, p.a, p.b, z, weight=p.weight)
            else:
                val, _ = quadrature.integrate_interval(lambda x: f(x) / (x - z), p.a, p.b, weight=p.weight)
                total += val
        return complex(total)
    raise TypeError(f"unsupported measure {type(measure).__name__}")


def cauchy_transform(measure: Measure, f, z: complex) -> complex:
    """``(1 / 2 pi i) int f(lam) / (lam - z) dpsi(lam)``."""
    return stieltjes(measure, f, z) / (2j * np.pi)


def weak_limit_check(sys: OrthoPolySystem, n_list: Sequence[int], limit: Measure,
                     k_max: int) -> list[float]:
    """Max moment deviation ``|m_k(psi_n) - m_k(limit)|`` over ``k <= k_max``, per ``n``."""
    ref = np.array([moments(limit, k) for k in range(k_max + 1)])
    out = []
    for n in n_list:
        mu = psi_n(sys, n)
        mine = np.array([moments(mu, k) for k in range(k_max + 1)])
        out.append(float(np.max(np.abs(mine - ref))))
    return out
