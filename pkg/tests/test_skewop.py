import math

import numpy as np
import pytest

from ginibre_interp.errors import DomainError
from ginibre_interp.hermite import c_coeffs, c_sequence
from ginibre_interp.skewop import (
    SkewOPFamily, inner_skew, m1_closed_form, r_norm, r_poly, skew_gram, verify_m1,
)

SQRT2PI = math.sqrt(2 * math.pi)


def test_r_poly_low_degrees():
    tau = 0.35
    fam = SkewOPFamily(tau, 10)
    z = np.array([-1.2, 0.3, 2.5])
    np.testing.assert_allclose(r_poly(fam, 0, z), 1.0)
    np.testing.assert_allclose(r_poly(fam, 3, z), z ** 3 - (3 * tau + 2) * z, rtol=1e-14)


def test_r_poly_tau0_monomials():
    fam = SkewOPFamily(0.0, 9)
    for n in range(4):
        np.testing.assert_allclose(fam.coeffs(2 * n + 1)[[2 * n + 1, max(2 * n - 1, 0)]],
                                   [1.0, -2.0 * n if n else 0.0])


def test_r_poly_parity_and_monic():
    fam = SkewOPFamily(0.6, 12)
    for n in range(13):
        c = fam.coeffs(n)
        assert c[n] == 1.0
        assert np.all(c[(n + 1) % 2::2] == 0.0)


def test_r_poly_large_degree_route():
    fam = SkewOPFamily(0.2, 80)
    c = c_sequence(0.2, 71, 0.7)
    assert r_poly(fam, 71, 0.7) == pytest.approx(c[71] - 70 * c[69], rel=1e-12)
    with pytest.raises(DomainError):
        r_poly(fam, 81, 0.0)


@pytest.mark.parametrize("tau, n, ref", [(0.0, 0, 2 * SQRT2PI), (0.5, 0, 3 * SQRT2PI),
                                         (0.0, 2, 48 * SQRT2PI)])
def test_r_norm_values(tau, n, ref):
    assert r_norm(SkewOPFamily(tau, 4), n).to_float() == pytest.approx(ref, rel=1e-14)


def test_skew_product_antisymmetric():
    coef = c_coeffs(0.3, 5)
    g = skew_gram([coef[k, :k + 1] for k in range(6)], 0.3)
    assert np.max(np.abs(g + g.T)) <= 1e-9 * np.max(np.abs(g))
    assert inner_skew(coef[3, :4], coef[3, :4], 0.3) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("tau", [0.0, 0.4, 0.8])
def test_skew_product_c1_c0(tau):
    coef = c_coeffs(tau, 1)
    val = inner_skew(coef[1, :2], coef[0, :1], tau)
    assert val == pytest.approx(-2 * SQRT2PI * (1 + tau), rel=1e-9)


def test_skew_product_c3_c0():
    coef = c_coeffs(0.5, 3)
    val = inner_skew(coef[3, :4], coef[0, :1], 0.5)
    assert val == pytest.approx(-3 * 2 ** 1.5 * math.sqrt(math.pi), rel=1e-9)


def test_m1_closed_form_examples():
    assert m1_closed_form(0, 1, 0.3) == 0.0
    assert m1_closed_form(0, 0, 0.0) == pytest.approx(-(2 ** 1.5) * math.sqrt(math.pi))
    assert m1_closed_form(2, 1, 0.5) == pytest.approx(-(2 ** 4.5) * 2 * math.gamma(1.5) * 1.5)


@pytest.mark.parametrize("j, k, tau", [(0, 0, 0.0), (2, 1, 0.5), (0, 2, 0.3), (3, 3, 0.7)])
def test_verify_m1(j, k, tau):
    numeric, closed, resid = verify_m1(j, k, tau)
    assert resid <= 1e-7


def test_parity_vanishing():
    tau = 0.45
    coef = c_coeffs(tau, 6)
    even = [coef[k, :k + 1] for k in (0, 2, 4, 6)]
    odd = [coef[k, :k + 1] for k in (1, 3, 5)]
    ge = skew_gram(even, tau)
    go = skew_gram(odd, tau)
    assert np.max(np.abs(ge)) <= 1e-9 * 1e3 and np.max(np.abs(go)) <= 1e-9 * 1e3


def test_skew_orthogonality_small():
    tau = 0.25
    fam = SkewOPFamily(tau, 8)
    g = skew_gram([fam.coeffs(n) for n in range(8)], tau)
    r = [r_norm(fam, j).to_float() for j in range(4)]
    for a in range(8):
        for b in range(8):
            if a // 2 == b // 2 and a != b:
                ref = r[a // 2] if a < b else -r[a // 2]
                assert g[a, b] == pytest.approx(ref, rel=1e-8)
            else:
                assert abs(g[a, b]) <= 1e-8 * max(r)


@pytest.mark.parametrize("n", range(7))
def test_odd_member_as_weighted_derivative(n):
    tau, h = 0.3, 1e-5
    s2 = 1 + tau
    fam = SkewOPFamily(tau, 13)
    c2n = c_coeffs(tau, 2 * n)[2 * n, :2 * n + 1]

    def wc(x):
        return math.exp(-x * x / (2 * s2)) * np.polyval(c2n[::-1], x)

    for x in (-1.1, 0.2, 1.7):
        fd = (wc(x + h) - wc(x - h)) / (2 * h)
        alt = -s2 * math.exp(x * x / (2 * s2)) * fd
        ref = r_poly(fam, 2 * n + 1, x)
        assert abs(alt - ref) <= 1e-6 * max(1.0, abs(ref))
