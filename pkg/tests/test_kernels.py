import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from ginibre_interp import exactprob as ep
from ginibre_interp import kernels as K
from ginibre_interp import sampler as smp
from ginibre_interp.errors import DomainError
from ginibre_interp.validation import count_sum

SQRT2PI = math.sqrt(2 * math.pi)


@pytest.fixture(scope="module")
def ctx6():
    return K.KernelContext(6, 0.5)


def test_context_validation():
    with pytest.raises(DomainError):
        K.KernelContext(5, 0.2)
    with pytest.raises(DomainError):
        K.KernelContext(4, 1.0)
    with pytest.raises(DomainError):
        K.KernelContext(4, 0.2, precision="quad")


def test_phi_examples(ctx6):
    assert K.phi(ctx6, 0, 0.0) == 0.0
    s2 = 1.5
    for x in (-2.0, 0.3, 1.7):
        ref = math.sqrt(2 * math.pi * s2) * math.erf(x / math.sqrt(2 * s2))
        assert K.phi(ctx6, 0, x) == pytest.approx(ref, rel=1e-13)
        assert K.phi(ctx6, 0, x, method="quad") == pytest.approx(ref, rel=1e-9)
    assert abs(K.phi(ctx6, 1, 40.0)) < 1e-12


@pytest.mark.parametrize("k", range(6))
def test_phi_recurrence_matches_quadrature(ctx6, k):
    for x in (-1.4, 0.25, 2.2):
        a = K.phi(ctx6, k, x)
        b = K.phi(ctx6, k, x, method="quad")
        assert a == pytest.approx(b, rel=1e-8, abs=1e-10)


def test_phi_index_bound(ctx6):
    with pytest.raises(DomainError):
        K.phi(ctx6, 6, 0.0)


@pytest.mark.parametrize("n", [2, 6, 12])
@pytest.mark.parametrize("tau", [0.0, 0.5, 0.85])
def test_s_r_forms_agree(n, tau):
    ctx = K.KernelContext(n, tau)
    rng = np.random.default_rng(n)
    x, y = rng.uniform(-3, 3, 20), rng.uniform(-3, 3, 20)
    np.testing.assert_allclose(K.s_r(ctx, x, y), K.s_r(ctx, x, y, form="sum"), rtol=1e-9, atol=1e-12)


def test_s_r_bulk_value_tau0():
    val = K.s_r(K.KernelContext(200, 0.0), 0.0, 0.0)
    assert val == pytest.approx(1 / SQRT2PI, rel=5e-3)


def test_s_r_diagonal_integrates_to_mean_count():
    for n, tau in ((2, 0.0), (4, 0.5), (8, 0.3)):
        ctx = K.KernelContext(n, tau)
        x, w = np.polynomial.legendre.leggauss(400)
        L = 4 * math.sqrt(n) + 10
        total = float(np.sum(w * L * K.rho_r1_profile(ctx, L * x)))
        assert total == pytest.approx(ep.mean_real_count_exact(n, tau), rel=1e-7)


def test_d_r_matches_finite_difference(ctx6):
    h = 1e-5
    for x, y in ((0.3, -1.1), (1.8, 0.4), (-2.0, 2.5)):
        fd = (K.s_r(ctx6, x + h, y) - K.s_r(ctx6, x - h, y)) / (2 * h)
        assert K.d_r(ctx6, x, y) == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_i_tilde_basic_properties(ctx6):
    assert K.i_tilde_r(ctx6, 0.7, 0.7) == 0.0
    a = K.i_tilde_r(ctx6, -0.4, 1.3)
    assert K.i_tilde_r(ctx6, 1.3, -0.4) == pytest.approx(-a, rel=1e-10)
    assert K.i_tilde_r(ctx6, -0.4, 1.3, method="closed") == pytest.approx(a, rel=1e-9)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_i_tilde_closed_equals_quad(x, y):
    ctx = K.KernelContext(4, 0.3)
    assert K.i_tilde_r(ctx, x, y, method="closed") == pytest.approx(
        K.i_tilde_r(ctx, x, y), abs=1e-9)


def test_rho_r_one_point_is_diagonal(ctx6):
    for x in (-1.0, 0.0, 2.3):
        assert K.rho_r(ctx6, [x]) == pytest.approx(K.s_r(ctx6, x, x), rel=1e-14)


def test_rho_r_two_point_symmetric_and_positive(ctx6):
    a = K.rho_r(ctx6, [0.2, 1.4])
    b = K.rho_r(ctx6, [1.4, 0.2])
    assert a > 0
    assert a == pytest.approx(b, rel=1e-12)


def test_rho_r_three_point_positive(ctx6):
    assert K.rho_r(ctx6, [-1.0, 0.3, 1.5]) > 0


def test_rho_r_repulsion_is_linear(ctx6):
    # two real eigenvalues repel linearly: rho_2(x, x+h) ~ c h
    x = 0.3
    r1 = K.rho_r(ctx6, [x]) ** 2
    vals = [K.rho_r(ctx6, [x, x + h]) for h in (1e-2, 1e-3, 1e-4)]
    assert vals[2] <= 1e-3 * r1
    assert vals[1] / vals[2] == pytest.approx(10.0, rel=1e-2)
    assert vals[0] / vals[1] == pytest.approx(10.0, rel=2e-2)


def test_rho_r_rejects_repeated_points(ctx6):
    with pytest.raises(DomainError):
        K.rho_r(ctx6, [0.5, 0.5])


def test_rho_r1_integral_n2():
    ctx = K.KernelContext(2, 0.0)
    x, w = np.polynomial.legendre.leggauss(200)
    total = float(np.sum(15 * w * K.rho_r1_profile(ctx, 15 * x)))
    assert total == pytest.approx(math.sqrt(2), rel=1e-10)


def test_rho_r1_profile_bulk_and_tail():
    p0 = K.rho_r1_profile(K.KernelContext(100, 0.0), [0.0])[0]
    assert p0 == pytest.approx(1 / SQRT2PI, rel=0.01)
    p5 = K.rho_r1_profile(K.KernelContext(100, 0.5), [0.0])[0]
    assert p5 == pytest.approx(1 / math.sqrt(1.5 * math.pi), rel=0.01)
    far = K.rho_r1_profile(K.KernelContext(100, 0.5), [1.5 * 15 + 10])[0]
    assert far < 1e-8
    with pytest.raises(DomainError):
        K.rho_r1_profile(K.KernelContext(4, 0.0), [np.nan])


def test_s_c_tau0_n2():
    ctx = K.KernelContext(2, 0.0)
    w, z = 0.3 + 0.8j, -1.1 + 0.2j
    assert K.s_c(ctx, w, z) == pytest.approx((w - z) / (2 * SQRT2PI), rel=1e-14)


def test_s_c_tau0_exponential_series():
    ctx = K.KernelContext(8, 0.0)
    w, z = 0.5 + 0.4j, -0.7 + 1.3j
    ref = (w - z) / (2 * SQRT2PI) * sum((w * z) ** j / math.factorial(j) for j in range(7))
    assert K.s_c(ctx, w, z) == pytest.approx(ref, rel=1e-13)


@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
def test_s_c_antisymmetric(w, z):
    ctx = K.KernelContext(6, 0.4)
    assert abs(K.s_c(ctx, w, z) + K.s_c(ctx, z, w)) <= 1e-12 * (1 + abs(K.s_c(ctx, w, z)))


@pytest.mark.parametrize("tau", [0.3, 0.5, 0.8])
def test_s_c_forms_agree(tau):
    ctx = K.KernelContext(8, tau)
    for w, z in ((0.4 + 0.9j, -0.8 + 0.3j), (1.5 - 0.2j, 0.1 + 1.1j)):
        ref = K.s_c(ctx, w, z)
        assert K.s_c(ctx, w, z, form="sum") == pytest.approx(ref, rel=1e-10)
        assert K.s_c(ctx, w, z, form="transform") == pytest.approx(ref, rel=1e-7)


def test_s_c_hat_folds_in_weight():
    ctx = K.KernelContext(6, 0.3)
    w, z = 0.2 + 0.5j, 1.0 + 0.9j
    ref = np.exp(-(w * w + z * z) / 2.6) * K.s_c(ctx, w, z)
    assert K.s_c_hat(ctx, w, z) == pytest.approx(ref, rel=1e-13)


def test_rho_c_one_point(ctx6):
    for x, y in ((0.0, 0.5), (1.2, 0.3), (-0.7, 1.4)):
        z = complex(x, y)
        s = K.s_c(ctx6, z.conjugate(), z)
        ref = (2j * math.exp((y * y - x * x) / 1.5) * special.erfc(ctx6.gamma * y) * s).real
        val = K.rho_c(ctx6, [z])
        assert val >= 0
        assert val == pytest.approx(ref, rel=1e-12)
        assert K.rho_c1(ctx6, x, y) == pytest.approx(ref, rel=1e-12)
    assert K.rho_c(ctx6, [(1.2, 0.3)]) == pytest.approx(K.rho_c1(ctx6, 1.2, 0.3), rel=1e-12)


def test_rho_c_vanishes_at_real_axis(ctx6):
    assert K.rho_c1(ctx6, 0.4, 1e-6) < 1e-5
    with pytest.raises(DomainError):
        K.rho_c(ctx6, [0.3 + 0.0j])
    with pytest.raises(DomainError):
        K.rho_c1(ctx6, 0.3, 0.0)


def test_rho_c_two_point_symmetric_nonnegative(ctx6):
    a = K.rho_c(ctx6, [0.2 + 0.6j, -0.9 + 1.0j])
    b = K.rho_c(ctx6, [-0.9 + 1.0j, 0.2 + 0.6j])
    assert a >= 0
    assert a == pytest.approx(b, rel=1e-12)
    # factorises at large separation
    far = K.rho_c(ctx6, [-2.0 + 0.5j, 2.0 + 0.5j])
    prod = K.rho_c1(ctx6, -2.0, 0.5) * K.rho_c1(ctx6, 2.0, 0.5)
    assert far == pytest.approx(prod, rel=0.05)


def test_count_sum_rule_n4():
    total, real, cplx = count_sum(K.KernelContext(4, 0.5))
    assert total == pytest.approx(4.0, abs=1e-6)
    assert real == pytest.approx(ep.mean_real_count_exact(4, 0.5), rel=1e-7)


def test_high_precision_path_agrees():
    lo = K.KernelContext(40, 0.9)
    hi = K.KernelContext(40, 0.9, precision="high")
    x = np.array([-1.0, 0.5, 3.0])
    np.testing.assert_allclose(K.s_r(lo, x, x), K.s_r(hi, x, x), rtol=1e-10)
    assert K.s_c(hi, 0.3 + 0.4j, 1 + 0.2j) == pytest.approx(K.s_c(lo, 0.3 + 0.4j, 1 + 0.2j), rel=1e-10)


def test_profile_matches_monte_carlo_histogram():
    params = smp.EnsembleParams(8, 0.0, seed=808, draws=20_000)
    edges = np.linspace(-4.5, 4.5, 19)
    st_ = smp.empirical_density(params, edges)
    ctx = K.KernelContext(8, 0.0)
    x, w = np.polynomial.legendre.leggauss(20)
    ref = []
    for a, b in zip(edges[:-1], edges[1:]):
        xs = 0.5 * (a + b) + 0.5 * (b - a) * x
        ref.append(0.5 * np.sum(w * K.rho_r1_profile(ctx, xs)))
    z = np.abs(st_.real_density - np.array(ref)) / np.maximum(st_.real_density_se, 1e-12)
    assert np.max(z) <= 3.0
    assert st_.mean_real == pytest.approx(ep.mean_real_count_exact(8, 0.0),
                                          abs=3 * st_.mean_real_se)
