import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmspec import (arcsine_measure, coefficients_Q, generating_function, lanczos_jacobi, pi_weights,
                    pt_fbasis, pt_oracle, pt_spectral, psi_n, resolvent_G)
from kmspec.chainspec import random_conductance_chain
from kmspec.errors import DegreeTooHigh
from kmspec.kernel import f_basis, gf_partial_sum, pt_oracle_matrix, spectral_kernel


def test_oracle_examples(cheb, penta):
    assert pt_oracle(cheb, 2, 2, 0) == 1.0 and pt_oracle(cheb, 2, 3, 0) == 0.0
    assert pt_oracle(penta, 0, 0, 2) == pytest.approx(0.25, abs=0)
    assert pt_oracle(penta, 0, 0, 3, exact=True) * 32 == 3
    assert pt_oracle(cheb, 0, 0, 2) == 0.5
    assert pt_oracle(penta, 0, 1, 1) == 0.5


def test_spectral_examples(cheb_sys):
    mu = psi_n(cheb_sys, 8)
    assert pt_spectral(cheb_sys, mu, 0, 3, 0) == pytest.approx(0.0, abs=1e-14)
    # the only path 0 -> 1 -> 2 has probability 1 * 1/2
    assert pt_spectral(cheb_sys, mu, 0, 2, 2) == pytest.approx(0.5, abs=1e-13)
    assert pt_spectral(cheb_sys, arcsine_measure(), 0, 0, 4) == pytest.approx(3 / 8, abs=1e-12)


def test_degree_guard(cheb_sys):
    with pytest.raises(DegreeTooHigh):
        pt_spectral(cheb_sys, psi_n(cheb_sys, 4), 3, 3, 2)


def test_spectral_matches_oracle(cheb, cheb_sys):
    K = spectral_kernel(cheb_sys, psi_n(cheb_sys, 16), 0, 6)
    assert np.allclose(K, np.eye(6), atol=1e-12)
    for t in range(21):
        diff = spectral_kernel(cheb_sys, psi_n(cheb_sys, 16), t, 6) - pt_oracle_matrix(cheb, t, 6)
        assert np.max(np.abs(diff)) <= 1e-10


def test_spectral_density_route(cheb, cheb_sys):
    for i, j, t in [(0, 0, 6), (1, 3, 4), (2, 2, 5)]:
        assert pt_spectral(cheb_sys, arcsine_measure(), i, j, t) == pytest.approx(pt_oracle(cheb, i, j, t), abs=1e-7)


@settings(max_examples=20, deadline=None)
@given(m=st.integers(1, 3), seed=st.integers(0, 10 ** 5), s=st.integers(0, 5), t=st.integers(0, 5))
def test_chapman_kolmogorov(m, seed, s, t):
    chain = random_conductance_chain(m, seed)
    n = 4
    N = n + m * (s + t) + 1
    Ps = pt_oracle_matrix(chain, s, N)
    Pt = pt_oracle_matrix(chain, t, N)
    Pst = pt_oracle_matrix(chain, s + t, N)
    assert np.max(np.abs((Ps @ Pt)[:n, :n] - Pst[:n, :n])) <= 1e-10


@settings(max_examples=20, deadline=None)
@given(m=st.integers(1, 3), seed=st.integers(0, 10 ** 5), t=st.integers(0, 8))
def test_kernel_symmetry(m, seed, t):
    chain = random_conductance_chain(m, seed)
    n = 5
    pi = pi_weights(chain, n).pi
    P = pt_oracle_matrix(chain, t, n + m * t + 1)[:n, :n]
    F = pi[:, None] * P
    assert np.max(np.abs(F - F.T)) <= 1e-10


def test_gf_chebyshev(cheb, cheb_sys):
    assert generating_function(cheb_sys, arcsine_measure(), 0, 0, 2.0) == pytest.approx(2 / np.sqrt(3), abs=1e-12)
    assert generating_function(cheb_sys, arcsine_measure(), 0, 0, 2.0) == pytest.approx(
        -2.0 * resolvent_G(cheb, 2.0), abs=1e-10)


@pytest.mark.parametrize("i,j", [(0, 0), (0, 1), (1, 3), (2, 2)])
def test_gf_partial_sums(cheb, cheb_sys, i, j):
    G = generating_function(cheb_sys, arcsine_measure(), i, j, 2.0)
    s, tail = gf_partial_sum(cheb, i, j, 2.0, 30)
    assert abs(G - s) <= 2.0 ** -30 / (1 - 0.5) + 1e-9
    assert tail == pytest.approx(2.0 ** -31 / 0.5)


def test_gf_at_infinity(cheb_sys):
    mu = arcsine_measure()
    assert generating_function(cheb_sys, mu, 1, 1, 1e6) == pytest.approx(1.0, abs=1e-5)
    assert abs(generating_function(cheb_sys, mu, 0, 1, 1e6)) <= 1e-5


def test_fbasis_columns(cheb, penta):
    F = f_basis(cheb, 6)
    assert np.allclose(F[:6], np.eye(6), atol=1e-14)
    G = f_basis(penta, 4)
    assert np.array_equal(G[:, 0], np.eye(len(G))[:, 0])
    assert np.max(np.abs(G.T @ G - np.eye(4))) <= 1e-8


def test_fbasis_first_row_and_column(penta):
    # row and column 0 only involve f_0 = e_0, so they are exact
    for t in range(11):
        for k in range(4):
            assert pt_fbasis(penta, 0, k, t) == pytest.approx(pt_oracle(penta, 0, k, t), abs=1e-12)
            assert pt_fbasis(penta, k, 0, t) == pytest.approx(pt_oracle(penta, k, 0, t), abs=1e-12)


def test_fbasis_spans_cyclic_subspace_only(penta):
    # e_0 is not cyclic for the pentadiagonal operator: e_1 has a component outside span F
    F = f_basis(penta, 40)
    e1 = np.zeros(len(F))
    e1[1] = 1.0
    residual = e1 - F @ (F.T @ e1)
    assert np.linalg.norm(residual) > 0.1


def test_penta_q2_coefficients(penta):
    sys = lanczos_jacobi(penta, 3).system()
    c = coefficients_Q(sys, 2, exact=False)
    assert np.allclose(c, np.array([-4, -6, 16]) / np.sqrt(11), atol=1e-13)
