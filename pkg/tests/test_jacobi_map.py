from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import linalg

from kmspec import (JacobiOperator, MomentSequence, jacobi_from_moments, lanczos_jacobi, moments_from_operator,
                    resolvent_G, symmetrize)
from kmspec.banded_extension import fourier_resolvent
from kmspec.chainspec import random_conductance_chain
from kmspec.errors import IllConditioned, NotConverged


def test_penta_moments_exact(penta):
    m = moments_from_operator(penta, 4).m
    assert m == (1, 0, Fraction(1, 4), Fraction(3, 32), Fraction(9, 64))
    assert all(isinstance(x, Fraction) for x in m)


def test_cheb_moments(cheb):
    m = moments_from_operator(cheb, 4).m
    assert m[0] == 1 and m[2] == Fraction(1, 2) and m[4] == Fraction(3, 8)


def test_float_mode_matches_exact(penta):
    a = moments_from_operator(penta, 16, exact=True).values
    b = moments_from_operator(penta, 16, exact=False).values
    assert np.allclose(a, b, atol=1e-15)


def test_penta_coefficients_both_routes(penta):
    ref_a, ref_b = [0, 3 / 8], [1 / 2, np.sqrt(11) / 8]
    jm = jacobi_from_moments(moments_from_operator(penta, 4), 2)
    lz = lanczos_jacobi(penta, 2)
    assert np.allclose(jm.a, ref_a, atol=1e-15) and np.allclose(jm.b[:2], ref_b, atol=1e-15)
    assert np.allclose(lz.a, ref_a, atol=1e-15) and np.allclose(lz.b[:2], ref_b, atol=1e-15)
    assert jm.b2_exact[1] == Fraction(11, 64)


def test_b_length():
    mom = MomentSequence(tuple(Fraction(x) for x in (1, 0, Fraction(1, 2), 0, Fraction(3, 8))), exact=True)
    assert len(jacobi_from_moments(mom, 2).b) == 2
    mom4 = MomentSequence(mom.m[:4], exact=True)
    assert len(jacobi_from_moments(mom4, 2).b) == 1
    with pytest.raises(ValueError):
        jacobi_from_moments(mom4, 3)


def test_cheb_coefficients(cheb):
    jac = jacobi_from_moments(moments_from_operator(cheb, 16), 8)
    assert np.allclose(jac.a, 0, atol=1e-15)
    assert np.allclose(jac.b, [2 ** -0.5] + [0.5] * 7, atol=1e-14)


def test_point_mass():
    c = Fraction(1, 3)
    mom = MomentSequence(tuple(c ** k for k in range(5)), exact=True)
    with pytest.raises(IllConditioned):
        jacobi_from_moments(mom, 2)


def test_lanczos_tridiagonal_identity(cheb):
    jac = lanczos_jacobi(cheb, 10)
    S = symmetrize(cheb, 11)
    assert np.allclose(jac.a, np.diag(S)[:10], atol=1e-15)
    assert np.allclose(jac.b, np.diag(S, 1)[:10], atol=1e-15)


def test_penta_six_steps(penta):
    a = lanczos_jacobi(penta, 6)
    b = jacobi_from_moments(moments_from_operator(penta, 12), 6)
    assert np.allclose(a.a, b.a, atol=1e-9) and np.allclose(a.b, b.b, atol=1e-9)


@pytest.mark.parametrize("ms", [(1, 101), (2, 102), (3, 103), (2, 104), (3, 105)], ids=str)
def test_route_equivalence(ms):
    chain = random_conductance_chain(*ms)
    n = 8
    a = lanczos_jacobi(chain, n)
    b = jacobi_from_moments(moments_from_operator(chain, 2 * n), n)
    assert np.max(np.abs(a.a - b.a)) <= 1e-8
    assert np.max(np.abs(a.b - b.b)) <= 1e-8


@pytest.mark.parametrize("ms", [(1, 101), (2, 102), (3, 103)], ids=str)
def test_moment_reproduction(ms):
    chain = random_conductance_chain(*ms)
    n = 8
    mom = moments_from_operator(chain, 2 * n - 1).values
    jac = lanczos_jacobi(chain, n)
    assert np.allclose(jac.moments(2 * n - 1), mom, atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(m=st.integers(1, 3), seed=st.integers(0, 10 ** 6))
def test_hankel_positive(m, seed):
    mom = moments_from_operator(random_conductance_chain(m, seed), 16)
    assert min(mom.hankel_min_eigenvalues()) >= -1e-10
    assert mom.m[0] == 1 and all(abs(x) <= 1 for x in mom.m)


def test_resolvent_cheb(cheb):
    assert resolvent_G(cheb, 2.0) == pytest.approx(-1 / np.sqrt(3), abs=1e-10)


@pytest.mark.parametrize("z", [2.0, 1.5 + 1j, 3j, 0.3 + 0.2j, -1.2])
def test_resolvent_penta_fourier(penta, z):
    assert abs(resolvent_G(penta, z) - fourier_resolvent(z)) <= 1e-9


def test_resolvent_dense_oracle(penta):
    z = 0.5 + 0.5j
    S = symmetrize(penta, 400)
    rhs = np.zeros(400)
    rhs[0] = 1.0
    ref = linalg.solve(S - z * np.eye(400), rhs)[0]
    assert resolvent_G(penta, z) == pytest.approx(ref, abs=1e-9)


def test_resolvent_large_z(penta):
    for z in (1e3, 1e4j):
        assert abs(resolvent_G(penta, z) + 1 / z) <= 2 / abs(z) ** 2


def test_resolvent_on_support(cheb):
    with pytest.raises(NotConverged):
        resolvent_G(cheb, 0.5)


def test_herglotz(penta):
    for x in np.linspace(-1.5, 1.5, 10):
        for y in np.geomspace(0.05, 3, 10):
            assert resolvent_G(penta, complex(x, y)).imag > 0


def test_jacobi_operator_positive_b():
    with pytest.raises(ValueError):
        JacobiOperator(np.zeros(2), np.array([0.5, 0.0]))
