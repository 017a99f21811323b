"""Quadrature for densities with inverse-square-root endpoint singularities.

Each interval ``[a, b]`` is mapped by ``lam = a + (b - a) sin^2(theta / 2)``,
``theta in (0, pi)``.  The Jacobian ``(b - a) sin(theta) / 2`` cancels a
``1/sqrt(distance)`` blow-up at either end, leaving a smooth integrand for
Gauss-Legendre in ``theta``.  The order doubles until two successive
estimates agree.

Densities may be supplied in gap form ``weight(lam, lam - a, b - lam)``.  Both
gaps are exact products of the substitution, whereas ``lam + 1`` recomputed
from a rounded ``lam`` near ``a = -1`` keeps only a few digits.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import special

from .errors import QuadratureNotConverged

START_ORDER = 32
MAX_ORDER = 2 ** 14
EVAL_BUDGET = 10 ** 6


@lru_cache(maxsize=None)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = special.roots_legendre(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _map(a: float, b: float, theta):
    """``lam`` and the exact gaps ``lam - a``, ``b - lam`` at ``theta``."""
    half = 0.5 * theta
    ga = (b - a) * np.sin(half) ** 2
    gb = (b - a) * np.cos(half) ** 2
    lam = np.where(half > np.pi / 4, b - gb, a + ga)
    return lam, ga, gb


def _weighted(f, weight):
    if weight is None:
        return lambda lam, ga, gb: f(lam)
    return lambda lam, ga, gb: f(lam) * weight(lam, ga, gb)


def theta_rule(a: float, b: float, order: int):
    """Nodes, gaps and weights on ``[a, b]`` under the sine-squared substitution."""
    x, w = _legendre(order)
    theta = 0.5 * np.pi * (x + 1.0)
    lam, ga, gb = _map(a, b, theta)
    jac = 0.5 * (b - a) * np.sin(theta) * 0.5 * np.pi * w
    return lam, ga, gb, jac


def integrate_interval(f, a: float, b: float, tol: float = 1e-12,
                       budget: int = EVAL_BUDGET, weight=None) -> tuple[complex | float, int]:
    """Integrate vectorized ``f`` (times the gap-form ``weight``, if given) over ``[a, b]``.

    Returns ``(value, evaluations)``.
    """
    F = _weighted(f, weight)
    used = 0
    prev = None
    order = START_ORDER
    while order <= MAX_ORDER and used + order <= budget:
        lam, ga, gb, jac = theta_rule(a, b, order)
        val = np.sum(F(lam, ga, gb) * jac)
        used += order
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val, used
        prev = val
        order *= 2
    raise QuadratureNotConverged(
        f"no convergence on [{a}, {b}] after {used} evaluations "
        f"(last change {abs(val - prev) if prev is not None else float('nan')!r})")


def _graded_panels(theta0: float, scale: float) -> list[tuple[float, float]]:
    """Panels of ``[0, pi]`` halving toward ``theta0`` down to ``scale / 10``.

    Each panel is at least its own half-width away from ``theta0``, so a pole at
    distance ``scale`` costs a fixed Gauss order per panel.
    """
    panels = []
    for lo, hi, toward_hi in ((0.0, theta0, True), (theta0, np.pi, False)):
        width = hi - lo
        if width <= 0.0:
            continue
        edge = hi if toward_hi else lo
        d = width
        while d > 0.1 * scale:
            nd = d / 2.0
            panels.append((edge - d, edge - nd) if toward_hi else (edge + nd, edge + d))
            d = nd
        panels.append((edge - d, edge) if toward_hi else (edge, edge + d))
    return panels


def _panel_sum(fun, panels, order: int) -> complex:
    x, w = _legendre(order)
    total = 0j
    for lo, hi in panels:
        half = 0.5 * (hi - lo)
        total += half * np.sum(w * fun(lo + half * (x + 1.0)))
    return total


def integrate_near_pole(g, a: float, b: float, z: complex, tol: float = 1e-13,
                        weight=None) -> complex:
    """``int_a^b g(lam) w(lam) / (lam - z) dlam`` for ``z`` close to the interval.

    In ``theta`` (``lam = c - r cos theta``) the integrand is ``h(theta) / (lam - z)``
    with ``h = g * w * dlam/dtheta`` (``w = 1`` without a weight).  A model of
    ``h`` about the pole's projection ``x0`` is subtracted and its contribution
    added back in closed form: ``h0 + s (lam - x0)`` for interior projections,
    the endpoint value of ``h`` otherwise.  The bounded remainder is integrated
    by composite Gauss-Legendre on panels graded toward the projection.
    """
    c, r = 0.5 * (a + b), 0.5 * (b - a)

    G = _weighted(g, weight)

    def lam_of(theta):
        return _map(a, b, theta)[0]

    def h(theta):
        return G(*_map(a, b, theta)) * r * np.sin(theta)

    x0 = min(max(z.real, a), b)
    theta0 = float(np.arccos(np.clip((c - x0) / r, -1.0, 1.0)))
    interior = 0.0 < theta0 < np.pi
    h0, slope = 0.0, 0.0
    if interior:
        delta = 1e-5 * min(1.0, theta0, np.pi - theta0)
        hm, hc, hp = h(np.array([theta0 - delta, theta0, theta0 + delta]))
        h0 = complex(hc)
        # any slope keeps the split exact; a good one makes the remainder smooth
        slope = complex((hp - hm) / (2.0 * delta)) / (r * np.sin(theta0))
        scale = abs(z - x0) / (r * np.sin(theta0)) + abs(z.imag) / r
    else:
        # h is even about the endpoint; removing h(endpoint) leaves O(theta^2) / (lam - z)
        d = 1e-4
        side = 1.0 if theta0 == 0.0 else -1.0
        h1, h2 = h(np.array([theta0 + side * d, theta0 + 2 * side * d]))
        h0 = complex((4.0 * h1 - h2) / 3.0)
        scale = np.sqrt(2.0 * abs(z - x0) / r)
    scale = max(scale, 1e-15)

    def remainder(theta):
        lam = lam_of(theta)
        return (h(theta) - h0 - slope * (lam - x0)) / (lam - z)

    panels = _graded_panels(theta0, scale)
    order = 16
    prev = _panel_sum(remainder, panels, order)
    while True:
        order *= 2
        val = _panel_sum(remainder, panels, order)
        if abs(val - prev) <= tol * max(1.0, abs(val)):
            break
        if order >= 256:
            raise QuadratureNotConverged(f"near-pole rule did not settle at z = {z} (change {abs(val - prev)!r})")
        prev = val
    # I0 = int_0^pi dtheta / (A - r cos theta) = pi / (sqrt(A - r) sqrt(A + r)), A = c - z;
    # the product of principal roots has its cut exactly on [-r, r]
    A = c - z
    I0 = np.pi / (np.sqrt(A - r + 0j) * np.sqrt(A + r + 0j))
    # int (lam - x0) / (lam - z) dtheta = pi + (z - x0) I0
    return complex(val) + h0 * I0 + slope * (np.pi + (z - x0) * I0)
