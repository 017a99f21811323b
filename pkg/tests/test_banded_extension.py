from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmspec import (contour_pt, det_zeros, mu_analytic_probe, mu_branches, pt_oracle, q_with_branch,
                    s_compose_check, spectrum_det, symmetrize, truncate, vector_solutions)
from kmspec.banded_extension import characteristic_roots, contour_pt_pieces, s_poly
from kmspec.chain_model import BandedChain
from kmspec.errors import OutsideDomain, SingularLeadingBand


def test_m1_reduces_to_chebyshev(cheb):
    lam = 0.37
    fam = vector_solutions(cheb, lam, 12)
    ref = np.cos(np.arange(12) * np.arccos(lam))
    assert np.allclose(fam.values[:, 0], ref, atol=1e-13)
    assert spectrum_det(cheb, 5, lam) == pytest.approx(np.cos(5 * np.arccos(lam)), abs=1e-13)


def test_penta_initial_rows(penta):
    lam = 0.3
    fam = vector_solutions(penta, lam, 6)
    assert np.array_equal(fam.values[:2], [[1, 0], [0, 1]])
    assert fam.values[2].tolist() == pytest.approx([2 * lam, -1.0], abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(lam=st.floats(-0.5, 0.99), mu=st.floats(-1, 1))
def test_linearity(penta, lam, mu):
    fam = vector_solutions(penta, lam, 20)
    direct = q_with_branch(lam, "plus", 20)
    plus = mu_branches(lam)[0]
    assert np.allclose(fam.combine(plus), direct, atol=1e-12 * max(1, np.abs(direct).max()))
    comb = fam.combine(mu)
    assert np.allclose(comb, fam.values[:, 0] + mu * fam.values[:, 1], atol=1e-12 * max(1, np.abs(comb).max()))


def test_recurrence_residual(penta):
    lam = -0.2
    n = 20
    q = vector_solutions(penta, lam, n).values
    P = truncate(penta, n)
    res = P[: n - 2] @ q - lam * q[: n - 2]
    assert np.max(np.abs(res)) <= 1e-10 * np.abs(q).max()


def test_singular_leading_band():
    q = Fraction(1, 4)
    chain = BandedChain.from_rows(2, [[0, 0, Fraction(1, 2), Fraction(1, 2), 0], [0, q, q, q, q]], [q, q, 0, q, q])
    with pytest.raises(SingularLeadingBand):
        vector_solutions(chain, 0.1, 6)


@pytest.mark.parametrize("n", range(1, 13))
def test_det_zeros_match_eigenvalues(penta, n):
    ev = np.linalg.eigvalsh(symmetrize(penta, n))
    z = det_zeros(penta, n)
    assert len(z) == n
    hausdorff = max(np.max(np.min(np.abs(ev[:, None] - z[None, :]), axis=1)),
                    np.max(np.min(np.abs(z[:, None] - ev[None, :]), axis=1)))
    assert hausdorff <= 1e-7


def test_det_small_at_eigenvalues(penta):
    ev = np.linalg.eigvalsh(symmetrize(penta, 4))
    assert np.max(np.abs(spectrum_det(penta, 4, ev, normalize=True))) < 1e-8


def test_sign_changes_bracket(penta):
    grid = np.linspace(-1, 1, 4000)
    d = spectrum_det(penta, 4, grid)
    assert np.count_nonzero(np.sign(d[1:]) != np.sign(d[:-1])) == 4


@pytest.mark.parametrize("N", [5, 8, 10, 16, 32])
def test_s_compose(N):
    assert s_compose_check(N) == 0


def test_s_poly_values():
    assert s_poly(Fraction(1)) == 1
    assert s_poly(Fraction(-1, 4)) == Fraction(-9, 16)


def test_zhukovskiy():
    w = np.exp(2j * np.pi * np.arange(100) / 100)
    v = s_poly((w + 1 / w) / 2)
    assert np.max(np.abs(v.imag)) <= 1e-15
    assert np.all((v.real >= -9 / 16 - 1e-15) & (v.real <= 1 + 1e-15))


def test_mu_branches_examples():
    assert mu_branches(-9 / 16) == (-0.25, -0.25)
    assert mu_branches(0.0) == (0.5, -1.0)
    assert mu_branches(1.0) == (1.0, -1.5)
    with pytest.raises(OutsideDomain):
        mu_branches(-0.6)


@settings(max_examples=60, deadline=None)
@given(lam=st.floats(-9 / 16, 1))
def test_mu_roots_of_s(lam):
    for mu in mu_branches(lam):
        assert s_poly(mu) == pytest.approx(lam, abs=1e-14)


def test_q_with_branch_examples():
    assert np.allclose(q_with_branch(1.0, "plus", 12), 1.0, atol=1e-13)
    assert q_with_branch(0.0, "plus", 3).tolist() == [1.0, 0.5, -0.5]
    assert np.array_equal(q_with_branch(-9 / 16, "plus", 10), q_with_branch(-9 / 16, "minus", 10))
    with pytest.raises(OutsideDomain):
        q_with_branch(-1.0, "plus", 4)


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(-0.5625, 1.0).filter(lambda x: min(abs(x + 0.5625), abs(x), abs(x - 1)) > 1e-6))
def test_characteristic_roots_unit_circle(lam):
    # w + 1/w = 2 mu for each root pair; only branches with |mu| <= 1 give unimodular roots
    roots = characteristic_roots(lam)
    plus, minus = mu_branches(lam)
    admissible = [mu for mu in (plus, minus) if abs(mu) < 1]
    on_circle = roots[np.abs(np.abs(roots) - 1.0) <= 1e-6]
    assert len(on_circle) == 2 * len(admissible)
    for mu in admissible:
        assert np.min(np.abs(on_circle.real - mu)) <= 1e-7
    assert len(admissible) == (2 if lam < 0 else 1)


def test_characteristic_real_parts_exact():
    lam = -0.3
    plus, minus = mu_branches(lam)
    r = characteristic_roots(lam)
    assert np.allclose(np.abs(r), 1.0, atol=1e-10)
    assert np.allclose(np.sort(np.unique(np.round(r.real, 12))), sorted([plus, minus]), atol=1e-10)


def test_contour_examples():
    assert contour_pt(0, 0, 0) == pytest.approx(1.0, abs=1e-10)
    assert contour_pt(0, 0, 2) == pytest.approx(0.25, abs=1e-10)
    assert contour_pt(0, 1, 1) == pytest.approx(0.5, abs=1e-10)
    assert [side for side, _ in contour_pt_pieces(0, 0, 0)] == ["minus", "plus", "real"]


@pytest.mark.parametrize("i", range(5))
def test_contour_orthogonality(i):
    for j in range(5):
        assert contour_pt(i, j, 0) == pytest.approx(float(i == j), abs=1e-6)


def test_contour_matches_oracle(penta):
    worst = 0.0
    for i in range(4):
        for j in range(4):
            for t in range(11):
                worst = max(worst, abs(contour_pt(i, j, t) - pt_oracle(penta, i, j, t)))
    assert worst <= 1e-6


def test_mu_probe():
    edge = mu_analytic_probe(-9 / 16)
    assert np.isnan(edge.deviation)
    near = mu_analytic_probe(complex(-0.25, 1e-6))
    assert np.isfinite(near.deviation)
    assert near.reference == pytest.approx(mu_branches(-0.25)[0])
    far = [mu_analytic_probe(x) for x in (1e2, 1e4, 1e6)]
    rel = [p.deviation / abs(p.reference) for p in far]
    assert rel[0] > rel[1] > rel[2]
