import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ginibre_interp.errors import DomainError
from ginibre_interp.hermite import (
    HermiteContext, c_coeffs, c_poly, c_sequence, hermite_h, hermite_h_log,
    normalized_sequence, plancherel_rotach, weighted_c,
)


def test_hermite_low_degrees():
    x = np.linspace(-2, 2, 7)
    np.testing.assert_allclose(hermite_h(0, x), 1.0)
    np.testing.assert_allclose(hermite_h(2, x), 4 * x * x - 2, rtol=1e-14)
    assert hermite_h(3, 1.0) == -4.0


def test_hermite_matches_numpy():
    from numpy.polynomial.hermite import hermval
    x = np.linspace(-3, 3, 11)
    for n in range(12):
        np.testing.assert_allclose(hermite_h(n, x), hermval(x, [0] * n + [1]), rtol=1e-12, atol=1e-9)


def test_hermite_log_form():
    s, lg = hermite_h_log(10, 1.3)
    assert s * math.exp(lg) == pytest.approx(float(hermite_h(10, 1.3)), rel=1e-12)


def test_c_poly_examples():
    ctx = HermiteContext(0.4, 10)
    z = 1.7 - 0.3j
    assert c_poly(ctx, 1, z) == z
    assert c_poly(ctx, 2, z) == pytest.approx(z * z - 0.4, rel=1e-15)
    ctx0 = HermiteContext(0.0, 10)
    assert c_poly(ctx0, 7, 1.3) == pytest.approx(1.3 ** 7, rel=1e-15)


def test_c_poly_degree_bound():
    ctx = HermiteContext(0.3, 4)
    with pytest.raises(DomainError):
        c_poly(ctx, 5, 1.0)
    with pytest.raises(DomainError):
        HermiteContext(1.0, 3)


@pytest.mark.parametrize("tau", [0.2, 0.7])
def test_c_poly_equals_rescaled_hermite(tau):
    ctx = HermiteContext(tau, 12)
    x = np.linspace(-2, 2, 9)
    for n in range(13):
        ref = (tau / 2) ** (n / 2) * hermite_h(n, x / math.sqrt(2 * tau))
        np.testing.assert_allclose(c_poly(ctx, n, x), ref, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("tau", [0.0, 0.3, 0.9])
def test_derivative_identity(tau):
    h = 1e-5
    ctx = HermiteContext(tau, 12)
    for n in range(1, 13):
        for z in (-1.3, 0.4, 2.1):
            fd = (c_poly(ctx, n, z + h) - c_poly(ctx, n, z - h)) / (2 * h)
            ref = n * c_poly(ctx, n - 1, z)
            assert abs(fd - ref) <= 1e-6 * max(1.0, abs(ref))


@given(st.floats(0, 0.99), st.floats(0, 5), st.floats(0, 2 * math.pi), st.integers(1, 20))
def test_three_term_identity(tau, r, t, n):
    z = r * complex(math.cos(t), math.sin(t))
    c = c_sequence(tau, n + 1, z)
    resid = z * c[n] - c[n + 1] - n * tau * c[n - 1]
    scale = abs(z * c[n]) + abs(c[n + 1]) + n * tau * abs(c[n - 1]) + 1e-300
    assert abs(resid) <= 1e-10 * scale


def test_c_coeffs_agree_with_recurrence():
    coef = c_coeffs(0.35, 8)
    x = 1.234
    vals = c_sequence(0.35, 8, x)
    for n in range(9):
        assert np.polyval(coef[n, ::-1], x) == pytest.approx(vals[n], rel=1e-13)


def test_complex_orthogonality():
    # int e^{-x^2/(1+tau) - y^2/(1-tau)} C_m(z) C_n(conj z) = pi m! sqrt(1-tau^2) delta_mn
    tau = 0.4
    gx, wx = np.polynomial.hermite.hermgauss(40)
    x = gx * math.sqrt(1 + tau)
    y = gx * math.sqrt(1 - tau)
    W = np.outer(wx, wx) * math.sqrt(1 - tau * tau)
    Z = x[:, None] + 1j * y[None, :]
    C = c_sequence(tau, 6, Z)
    for m in range(7):
        for n in range(7):
            val = np.sum(W * C[m] * C[n].conj())
            ref = math.pi * math.factorial(m) * math.sqrt(1 - tau * tau) if m == n else 0.0
            assert abs(val - ref) <= 1e-8 * max(1.0, abs(ref))


def test_weighted_c_examples():
    ctx = HermiteContext(0.5, 600)
    assert weighted_c(ctx, 0, 0.0, math.inf) == 1.0
    x = 2.0
    naive = math.exp(-x * x / 3.0) * c_poly(ctx, 10, x) / math.sqrt(math.factorial(10))
    assert weighted_c(ctx, 10, x, 1.5) == pytest.approx(naive, rel=1e-11)
    big = weighted_c(ctx, 500, 2 * math.sqrt(500), 1.5)
    assert math.isfinite(big) and big != 0.0


@given(st.integers(0, 30), st.floats(-6, 6), st.floats(0, 0.95))
def test_normalized_sequence_small_n_agrees_with_naive(n, x, tau):
    seq = normalized_sequence(tau, n, x, -x * x / 4).values()
    naive = [math.exp(-x * x / 4) * v / math.sqrt(math.factorial(k))
             for k, v in enumerate(c_sequence(tau, n, x))]
    np.testing.assert_allclose(seq, naive, rtol=1e-11, atol=1e-300)


def test_normalized_sequence_high_precision_agrees():
    a = normalized_sequence(0.9, 40, np.array([0.5, 3.0]), -0.2).values()
    b = normalized_sequence(0.9, 40, np.array([0.5, 3.0]), -0.2, precision="high").values()
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_normalized_sequence_no_overflow_at_large_degree():
    seq = normalized_sequence(0.3, 2000, np.array([0.0, 60.0, 120.0]), 0.0)
    assert np.all(np.isfinite(seq.mantissa))
    assert np.all(np.abs(seq.mantissa[-1]) > 0)


@pytest.mark.parametrize("n, tol", [(50, 0.02), (200, 0.005)])
def test_plancherel_rotach_accuracy(n, tol):
    x = 1.2 * math.sqrt(2 * n)
    s, lg = hermite_h_log(n, x)
    assert s > 0
    assert abs(math.exp(plancherel_rotach(n, x, log=True) - lg) - 1) <= tol


def test_plancherel_rotach_boundary():
    with pytest.raises(DomainError):
        plancherel_rotach(50, 10.0)


def test_plancherel_rotach_error_decreases():
    errs = []
    for n in (25, 50, 100, 200):
        x = 1.2 * math.sqrt(2 * n)
        errs.append(abs(plancherel_rotach(n, x, log=True) - hermite_h_log(n, x)[1]))
    assert all(b < a for a, b in zip(errs, errs[1:]))
