import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ginibre_interp.errors import AccuracyError, DomainError
from ginibre_interp.pfaff import (
    ScaledValue, chebyshev_nodes, det_poly_in_zeta, det_scaled, pfaffian,
)


def _skew(rng, n):
    g = rng.normal(size=(n, n))
    return g - g.T


def _cofactor_det(m):
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    return sum((-1) ** j * m[0, j] * _cofactor_det(np.delete(m[1:], j, axis=1)) for j in range(n))


def test_scaled_value_roundtrip():
    for x in (0.0, 1.0, -3.75, 1e-300, 6.02e23):
        v = ScaledValue.from_float(x)
        assert v.to_float() == x
        assert v.mantissa == 0 or 1 <= abs(v.mantissa) < 2
    assert ScaledValue.from_float(0.0) == ScaledValue(0.0, 0)


def test_scaled_value_beyond_double_range():
    big = ScaledValue.from_log(5000.0)
    small = ScaledValue.from_log(-4990.0)
    assert (big * small).to_float() == pytest.approx(math.exp(10.0), rel=1e-10)
    assert big.to_float() == math.inf
    assert big.log_abs == pytest.approx(5000.0, rel=1e-14)


def test_pfaffian_2x2_and_4x4():
    assert pfaffian([[0, 2.5], [-2.5, 0]]).to_float() == 2.5
    rng = np.random.default_rng(1)
    a = _skew(rng, 4)
    ref = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
    assert pfaffian(a).to_float() == pytest.approx(ref, rel=1e-13)


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_pfaffian_squared_is_det(m, seed):
    a = _skew(np.random.default_rng(seed), 2 * m)
    pf = pfaffian(a).to_float()
    det = det_scaled(a).to_float()
    assert abs(pf * pf - det) <= 1e-9 * abs(det)


def test_pfaffian_transposition_flips_sign():
    rng = np.random.default_rng(2)
    a = _skew(rng, 8)
    p = np.arange(8)
    p[[2, 5]] = p[[5, 2]]
    b = a[np.ix_(p, p)]
    assert pfaffian(b).to_float() == pytest.approx(-pfaffian(a).to_float(), rel=1e-12)


def test_pfaffian_contract_violations():
    with pytest.raises(DomainError):
        pfaffian(np.zeros((3, 3)))
    with pytest.raises(DomainError):
        pfaffian(np.ones((2, 2)))


def test_pfaffian_complex_entries():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    a = g - g.T
    pf = pfaffian(a).to_float()
    assert abs(pf * pf - np.linalg.det(a)) <= 1e-10 * abs(np.linalg.det(a))


def test_det_scaled_examples():
    assert det_scaled(np.eye(5)).to_float() == 1.0
    assert det_scaled(np.diag([2.0, 3.0, 4.0])).to_float() == pytest.approx(24.0)
    m = np.random.default_rng(4).normal(size=(6, 6))
    assert det_scaled(m).to_float() == pytest.approx(_cofactor_det(m), rel=1e-11)
    assert det_scaled(np.zeros((3, 3))).to_float() == 0.0


def test_det_scaled_no_overflow():
    m = np.diag([1e200] * 4)
    assert det_scaled(m).log_abs == pytest.approx(800 * math.log(10), rel=1e-14)


def _det3(a, b):
    out = []
    for deg in range(4):
        tot = 0.0
        for pick in itertools.combinations(range(3), deg):
            cols = [a[:, j] if j in pick else b[:, j] for j in range(3)]
            tot += np.linalg.det(np.column_stack(cols))
        out.append(tot)
    return out


def test_det_poly_examples():
    c = [v.to_float() for v in det_poly_in_zeta(np.eye(1), np.array([[0.7]]))]
    np.testing.assert_allclose(c, [0.7, 1.0], atol=1e-15)
    c = [v.to_float() for v in det_poly_in_zeta(np.eye(2), np.zeros((2, 2)))]
    np.testing.assert_allclose(c, [0.0, 0.0, 1.0], atol=1e-14)


@pytest.mark.parametrize("method", ["chebyshev", "circle"])
def test_det_poly_3x3_oracle(method):
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
        got = [v.to_float() for v in det_poly_in_zeta(a, b, method=method)]
        for g, r in zip(got, _det3(a, b)):
            assert abs(g - r) <= 1e-9 * max(1.0, abs(r))


def test_det_poly_high_precision_agrees():
    rng = np.random.default_rng(6)
    a, b = rng.normal(size=(5, 5)), rng.normal(size=(5, 5))
    lo = [v.to_float() for v in det_poly_in_zeta(a, b)]
    hi = [v.to_float() for v in det_poly_in_zeta(a, b, precision="high")]
    np.testing.assert_allclose(lo, hi, rtol=1e-9, atol=1e-12)


@given(st.integers(0, 2 ** 32 - 1), st.floats(0.1, 3.0))
def test_det_poly_reproduces_fresh_node(seed, zeta):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
    coef = [v.to_float() for v in det_poly_in_zeta(a, b)]
    val = sum(c * zeta ** i for i, c in enumerate(coef))
    ref = np.linalg.det(zeta * a + b)
    bound = sum(abs(c) * zeta ** i for i, c in enumerate(coef))
    assert abs(val - ref) <= 1e-9 * bound


def test_det_poly_b_zero_low_coefficients_vanish():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4, 4))
    coef = [v.to_float() for v in det_poly_in_zeta(a, np.zeros((4, 4)))]
    assert max(abs(c) for c in coef[:4]) <= 1e-12 * abs(coef[4])
    assert coef[4] == pytest.approx(np.linalg.det(a), rel=1e-10)


def test_det_poly_bad_arguments():
    with pytest.raises(DomainError):
        det_poly_in_zeta(np.eye(2), np.eye(3))
    with pytest.raises(DomainError):
        det_poly_in_zeta(np.eye(2), np.eye(2), precision="quad")


def test_det_poly_detects_bad_interpolation():
    # degree bound too small for the true polynomial: held-out node disagrees
    with pytest.raises(AccuracyError):
        det_poly_in_zeta(np.eye(3), np.eye(3), m=1)


def test_chebyshev_nodes_range():
    x = chebyshev_nodes(9)
    assert np.all((x > 0) & (x < 2)) and len(set(x)) == 9
