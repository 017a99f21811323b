"""Acceptance criteria as executable checks.

Each ``criterion_k`` returns a list of records
``{id, description, expected, actual, tolerance, pass}``; ``run_all`` collects
them.  Nothing here loosens a tolerance: a criterion that the mathematics does
not support is reported as failing.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import comb

import numpy as np

from .banded_extension import (contour_pt, fourier_resolvent, s_compose_check)
from .chain_model import (BirthDeathChain, chebyshev_chain, pentadiagonal_chebyshev, pi_weights,
                          truncate)
from .chainspec import random_conductance_chain
from .jacobi_map import jacobi_from_moments, lanczos_jacobi, moments_from_operator, resolvent_G
from .kernel import generating_function, gf_partial_sum, pt_fbasis, pt_oracle, pt_oracle_matrix, pt_spectral
from .montecarlo import estimates_from_counts, simulate_counts
from .orthopoly import OrthoPolySystem, roots_Qn
from .rh_verify import check_asymptotics, check_jump, entry22_from_gf, build_mn, gf_from_rh
from .spectral_measure import (arcsine_measure, chebyshev_christoffel_closed, christoffel_sum, integrate,
                               moments, pentadiagonal_measure, psi_n, two_sided_measure)

RANDOM_CHAINS = ((1, 101), (2, 102), (3, 103), (2, 104), (3, 105))
MC_SEEDS = (1, 2, 3, 4, 5)
GF_Z = (1.5, -2.0, 4.0, 2.5j, -3.0j, 1.2 + 1.2j, -2.0 + 2.0j, 3.0 - 1.5j)


def _record(cid, description, expected, actual, tolerance, ok):
    def plain(x):
        if isinstance(x, Fraction):
            return str(x)
        if isinstance(x, complex):
            return [x.real, x.imag]
        if isinstance(x, (np.floating, np.integer)):
            return x.item()
        if isinstance(x, (list, tuple)):
            return [plain(v) for v in x]
        if isinstance(x, dict):
            return {k: plain(v) for k, v in x.items()}
        return x

    return {"id": cid, "description": description, "expected": plain(expected),
            "actual": plain(actual), "tolerance": tolerance, "pass": bool(ok)}


def _max_error(cid, description, errors, tol):
    worst = float(np.max(errors)) if len(errors) else 0.0
    return _record(cid, description, 0.0, worst, tol, worst <= tol)


def _cheb():
    return OrthoPolySystem.from_chain(chebyshev_chain())


def arcsine_moment(k: int) -> Fraction:
    return Fraction(comb(k, k // 2), 2 ** k) if k % 2 == 0 else Fraction(0)


def criterion_1():
    P = pentadiagonal_chebyshev()
    expected = [Fraction(0), Fraction(1, 4), Fraction(3, 32), Fraction(9, 64)]
    exact = list(moments_from_operator(P, 4, exact=True).m[1:5])
    meas = pentadiagonal_measure()
    quad = [moments(meas, k) for k in range(1, 5)]
    return [
        _record("1a", "operator moments m_1..m_4 in exact arithmetic", expected, exact, 0, exact == expected),
        _max_error("1b", "density quadrature reproduces m_1..m_4",
                   [abs(q - float(e)) for q, e in zip(quad, expected)], 1e-8),
    ]


def _jacobi_pair(chain, n):
    mom = moments_from_operator(chain, 2 * n)
    return jacobi_from_moments(mom, n), lanczos_jacobi(chain, n)


def criterion_2():
    P = pentadiagonal_chebyshev()
    expected = np.array([0.0, 0.5, 0.375, np.sqrt(11.0) / 8.0])
    out = []
    J_mom, J_lan = _jacobi_pair(P, 2)
    for name, J in (("moments", J_mom), ("tridiagonalization", J_lan)):
        got = np.array([J.a[0], J.b[0], J.a[1], J.b[1]])
        out.append(_max_error(f"2a-{name}", f"(a0, b0, a1, b1) of the pentadiagonal chain by {name}",
                              np.abs(got - expected), 1e-10))
    chains = [P] + [random_conductance_chain(m, s) for m, s in RANDOM_CHAINS]
    for chain in chains:
        errs = []
        for n in range(1, 9):
            A, B = _jacobi_pair(chain, n)
            errs.append(np.max(np.abs(A.a[:n] - B.a[:n])))
            errs.append(np.max(np.abs(A.b[:n] - B.b[:n])))
        out.append(_max_error(f"2b-{chain.name}", "moment and tridiagonalization routes agree, n <= 8",
                              errs, 1e-8))
    return out


def criterion_3():
    sys = _cheb()
    root_err = []
    for n in range(1, 33):
        k = np.arange(n)
        ref = np.sort(np.cos(np.pi / (2 * n) + np.pi * k / n))
        root_err.append(np.max(np.abs(roots_Qn(sys, n) - ref)))
    mom_err = []
    for n in range(1, 17):
        mu = psi_n(sys, n)
        for k in range(2 * n):
            mom_err.append(abs(moments(mu, k) - float(arcsine_moment(k))))
    lam = np.linspace(-0.98, 0.98, 50)
    ch_err = [np.max(np.abs(chebyshev_christoffel_closed(n, lam) - christoffel_sum(sys, n, lam)))
              for n in range(1, 33)]
    return [
        _max_error("3a", "zeros of Q_n equal cos(pi/(2n) + pi k/n), n <= 32", root_err, 1e-10),
        _max_error("3b", "psi_n moments equal arcsine moments for k <= 2n-1", mom_err, 1e-10),
        _max_error("3c", "Christoffel closed form equals direct sums at 50 points", ch_err, 1e-10),
    ]


def criterion_4():
    sys = _cheb()
    mu = psi_n(sys, 16)
    C = chebyshev_chain()
    errs = [abs(pt_spectral(sys, mu, i, j, t) - pt_oracle(C, i, j, t))
            for t in range(21) for i in range(6) for j in range(6)]
    P = pentadiagonal_chebyshev()
    errs_f = [abs(pt_fbasis(P, i, j, t) - pt_oracle(P, i, j, t))
              for t in range(11) for i in range(4) for j in range(4)]
    return [
        _max_error("4a", "pt_spectral(psi_16) equals the oracle, chebyshev, i,j <= 5, t <= 20", errs, 1e-10),
        _max_error("4b", "F-basis kernel equals the oracle, pentadiagonal, i,j <= 3, t <= 10", errs_f, 1e-7),
    ]


def criterion_5():
    P = pentadiagonal_chebyshev()
    errs = [abs(contour_pt(i, j, t) - pt_oracle(P, i, j, t))
            for t in range(11) for i in range(4) for j in range(4)]
    ident = [abs(contour_pt(i, j, 0) - (1.0 if i == j else 0.0)) for i in range(5) for j in range(5)]
    contour = two_sided_measure()
    mass = float(integrate(contour, lambda lam, side: np.ones_like(lam)))
    lam = np.linspace(-9.0 / 16.0, 1.0, 202)[1:-1]
    lam = lam[np.abs(lam) > 1e-9]
    proj = np.abs(contour.projection(lam) - pentadiagonal_measure().density(lam))
    rel = proj / np.maximum(1.0, pentadiagonal_measure().density(lam))
    return [
        _max_error("5a", "contour_pt equals the oracle, i,j <= 3, t <= 10", errs, 1e-6),
        _max_error("5b", "contour_pt at t = 0 is the identity, i,j <= 4", ident, 1e-6),
        _record("5c", "contour measure total mass", 1.0, mass, 1e-8, abs(mass - 1.0) <= 1e-8),
        _max_error("5d", "contour pieces project onto the pentadiagonal density", rel, 1e-8),
    ]


def criterion_6():
    sys = _cheb()
    A = arcsine_measure()
    C = chebyshev_chain()
    g = generating_function(sys, A, 0, 0, 2.0)
    ref = 2.0 / np.sqrt(3.0)
    excess = []
    for z in GF_Z:
        for i, j in ((0, 0), (0, 1), (1, 2), (2, 2)):
            s, tail = gf_partial_sum(C, i, j, z, 80)
            excess.append(max(0.0, abs(generating_function(sys, A, i, j, z) - s) - tail))
    P = pentadiagonal_chebyshev()
    res = [abs(resolvent_G(P, z) - fourier_resolvent(z)) for z in (2.0, 1.5 + 1j, 3j)]
    return [
        _record("6a", "G_00(2) on the arcsine measure", ref, abs(g), 1e-9, abs(g - ref) <= 1e-9),
        _max_error("6b", "spectral G minus partial sums, beyond the tail bound, 8 z values", excess, 1e-8),
        _max_error("6c", "pentadiagonal resolvent equals the Fourier integral", res, 1e-7),
    ]


def criterion_7():
    sys = _cheb()
    A = arcsine_measure()
    xs = (-0.9, -0.5, 0.0, 0.3, 0.8)
    jump = [check_jump(n, A, x, sys).residual for n in range(1, 5) for x in xs]
    slopes, monotone = [], []
    for n in range(5):
        r = check_asymptotics(n, A, sys)
        slopes.append(r.slope)
        monotone.append(r.monotone)
    slope_dev = [abs(s + 1.0) for s in slopes]
    gf = []
    e22 = []
    for n in range(5):
        for z in GF_Z:
            ref = generating_function(sys, A, 0, n, z)
            gf.append(abs(gf_from_rh(n, A, sys, z) - ref) / abs(ref))
            if n >= 1:
                e22.append(abs(entry22_from_gf(n, A, sys, z) - build_mn(n, A, sys, z)[1, 1]))
    return [
        _max_error("7a", "jump residual, n <= 4, five interior points", jump, 1e-6),
        _record("7b", "normalization deviation log-log slope, n <= 4", -1.0, slopes, 0.2,
                max(slope_dev) <= 0.2 and all(monotone)),
        _max_error("7c", "gf_from_rh relative to the kernel generating function", gf, 1e-6),
        _max_error("7d", "entry (2,2) from G_{0,n-1}", e22, 1e-6),
    ]


def criterion_8():
    out = []
    for N in (8, 16, 32):
        d = s_compose_check(N)
        out.append(_record(f"8-N{N}", "s(A_N(P_ch)) equals A_N(P) away from the cut-off rows", 0, d, 0, d == 0))
    return out


def criterion_9(trials: int = 10 ** 6, seeds=MC_SEEDS):
    start = time.perf_counter()
    out = []
    for chain in (chebyshev_chain(), pentadiagonal_chebyshev()):
        ref = [pt_oracle_matrix(chain, t, 7)[0] for t in range(11)]
        for seed in seeds:
            counts = simulate_counts(chain, 10, trials, seed)
            worst = 0.0
            bad = 0
            for t in range(11):
                est = estimates_from_counts(counts, t, trials)
                for j in range(7):
                    p, r = est[j] if j < len(est) else None, ref[t][j]
                    if p is None:
                        continue
                    dev = abs(p.estimate - r)
                    if not p.within(r):
                        bad += 1
                    if p.stderr > 0:
                        worst = max(worst, dev / p.stderr)
            out.append(_record(f"9-{chain.name}-seed{seed}",
                               "Monte Carlo p_t(0, j) within 4 standard errors, t <= 10, j <= 6",
                               0, {"outside": bad, "max_z": worst}, 4.0, bad == 0))
    elapsed = time.perf_counter() - start
    out.append(_record("9-runtime", "Monte Carlo runtime in seconds", 300.0, elapsed, 300.0, elapsed <= 300.0))
    return out


def _herglotz(chain):
    worst = np.inf
    for x in np.linspace(-1.8, 1.8, 10):
        for y in np.geomspace(0.05, 2.0, 10):
            worst = min(worst, resolvent_G(chain, complex(x, y)).imag)
    return worst


def criterion_10():
    chains = [chebyshev_chain(), pentadiagonal_chebyshev()] + [random_conductance_chain(m, s)
                                                               for m, s in RANDOM_CHAINS]
    balance = []
    for chain in chains:
        n = 30
        pi = pi_weights(chain, n).pi
        A = truncate(chain, n)
        F = pi[:, None] * A
        balance.append(np.max(np.abs(F - F.T)) / np.max(np.abs(F)))
    ck = []
    for chain in chains[:4]:
        for s in range(1, 6):
            for t in range(1, 6):
                size = 6
                n = size + chain.m * (s + t)
                A = truncate(chain, n)
                Ps, Pt = np.linalg.matrix_power(A, s), np.linalg.matrix_power(A, t)
                ck.append(np.max(np.abs((Ps @ Pt)[:size, :size] - pt_oracle_matrix(chain, s + t, size))))
    interlace_fail = 0
    # systems whose measures have no atoms: near an isolated eigenvalue consecutive
    # truncations share a zero to machine precision and strictness is unobservable
    lazy = BirthDeathChain([Fraction(1, 2)], [Fraction(0), Fraction(1, 2)])
    penta = lanczos_jacobi(pentadiagonal_chebyshev(), 42).system()
    for sys in (_cheb(), OrthoPolySystem.from_chain(lazy), penta):
        for n in range(1, 40):
            r0, r1 = roots_Qn(sys, n), roots_Qn(sys, n + 1)
            if not (np.all(r1[:-1] < r0) and np.all(r0 < r1[1:])):
                interlace_fail += 1
    hankel = []
    for chain in chains:
        hankel.append(min(moments_from_operator(chain, 16, exact=False).hankel_min_eigenvalues()))
    herglotz = [_herglotz(c) for c in chains[:3]]
    return [
        _max_error("10a", "detailed balance on 30-state truncations (relative)", balance, 1e-12),
        _max_error("10b", "Chapman-Kolmogorov on exact truncations", ck, 1e-10),
        _record("10c", "zeros of Q_n strictly interlace zeros of Q_{n+1}, n <= 40", 0, interlace_fail, 0,
                interlace_fail == 0),
        _record("10d", "Hankel minimum eigenvalue", ">= -1e-10", min(hankel), 1e-10, min(hankel) >= -1e-10),
        _record("10e", "Im G(z) > 0 on a 10x10 upper half-plane grid", "> 0", min(herglotz), 0.0,
                min(herglotz) > 0.0),
    ]


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


def run_all(ids=None) -> list[dict]:
    out = []
    for k in (ids or CRITERIA):
        out.extend(CRITERIA[k]())
    return out


def format_line(rec: dict) -> str:
    status = "PASS" if rec["pass"] else "FAIL"
    return f"[{status}] {rec['id']}: {rec['description']} (actual={rec['actual']}, tol={rec['tolerance']})"
