"""Skew-orthogonal polynomials ``R_n`` and a quadrature oracle for the skew product.

The family is ``R_{2n} = C_{2n}`` and ``R_{2n+1} = C_{2n+1} - 2n C_{2n-1}``
with normalisation ``<R_{2n}, R_{2n+1}> = (2n)! 2 sqrt(2 pi) (1 + tau)``.
The skew inner product is the one with Gaussian weight
``exp(-x^2 / 2(1+tau))`` on the real line and
``exp((y^2 - x^2)/(1+tau)) erfc(sqrt(2/(1-tau^2)) y)`` on the upper half
plane.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import special as _sp

from .errors import AccuracyError, DomainError
from .hermite import c_coeffs, c_sequence
from .pfaff import ScaledValue
from .specfun import DEFAULT_SPEC, panel_rule, truncation_radius

__all__ = [
    "SkewOPFamily",
    "r_poly",
    "r_norm",
    "inner_skew",
    "skew_gram",
    "m1_closed_form",
    "verify_m1",
]

_MONOMIAL_MAX = 60


@dataclass(frozen=True)
class SkewOPFamily:
    """The polynomials ``R_0..R_{n_max}`` at fixed ``tau``."""

    tau: float
    n_max: int = 40
    _coef: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.tau < 1.0:
            raise DomainError("tau must lie in [0, 1)")
        deg = min(self.n_max, _MONOMIAL_MAX)
        c = c_coeffs(self.tau, deg)
        r = c.copy()
        for n in range(1, deg + 1, 2):
            if n >= 3:
                r[n] = c[n] - (n - 1) * c[n - 2]
        r.setflags(write=False)
        object.__setattr__(self, "_coef", r)

    def coeffs(self, n):
        """Monomial coefficients of ``R_n`` (degrees up to 60)."""
        if n > min(self.n_max, _MONOMIAL_MAX):
            raise DomainError(f"no monomial form stored for degree {n}")
        return self._coef[n, : n + 1].copy()

    def __call__(self, n, z):
        return r_poly(self, n, z)


def r_poly(family, n, z):
    """Evaluate ``R_n(z)``."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    if n > family.n_max:
        raise DomainError(f"degree {n} exceeds n_max={family.n_max}")
    z = np.asarray(z)
    if n <= _MONOMIAL_MAX:
        val = P.polyval(z, family._coef[n, : n + 1])
    else:
        c = c_sequence(family.tau, n, z)
        val = c[n] if n % 2 == 0 else c[n] - (n - 1) * c[n - 2]
    return val if np.ndim(val) else val[()]


def r_norm(family, n):
    """``r_n = (2n)! 2 sqrt(2 pi) (1 + tau)`` as a ScaledValue."""
    if n < 0:
        raise DomainError("index must be non-negative")
    log_r = math.lgamma(2 * n + 1) + math.log(2.0 * math.sqrt(2.0 * math.pi) * (1.0 + family.tau))
    return ScaledValue.from_log(log_r)


def _as_coeffs(p):
    if isinstance(p, np.polynomial.Polynomial):
        return np.asarray(p.coef, dtype=float)
    return np.atleast_1d(np.asarray(p, dtype=float))


def _real_part(polys, tau, eps, panels, order):
    deg = max(len(p) - 1 for p in polys)
    s2 = 1.0 + tau
    L = truncation_radius(math.sqrt(s2), eps, deg)
    y, wy = panel_rule(-L, L, panels, order)
    # inner integrals over x on [-L, y_i] and [y_i, L]
    xl, wl = panel_rule(np.full(y.shape, -L), y, panels, order)
    xr, wr = panel_rule(y, np.full(y.shape, L), panels, order)
    gl = np.exp(-xl * xl / (2 * s2)) * wl
    gr = np.exp(-xr * xr / (2 * s2)) * wr
    wy_full = wy * np.exp(-y * y / (2 * s2))
    F = np.empty((len(polys), y.size))
    G = np.empty((len(polys), y.size))
    for a, c in enumerate(polys):
        F[a] = (P.polyval(xl, c) * gl).sum(axis=1) - (P.polyval(xr, c) * gr).sum(axis=1)
        G[a] = P.polyval(y, c) * wy_full
    mass = np.abs(G).sum(axis=1)
    # <f_a, f_b>_r = int g_b(y) w(y) F_a(y) dy
    return F @ G.T, np.outer(mass, mass)


def _complex_part(polys, tau, eps, panels, order):
    deg = max(len(p) - 1 for p in polys)
    sx = math.sqrt((1.0 + tau) / 2.0)
    sy = math.sqrt((1.0 - tau) / 2.0)
    Lx = truncation_radius(sx, eps, 2 * deg)
    Ly = truncation_radius(sy, eps, 2 * deg)
    x, wx = panel_rule(-Lx, Lx, panels, order)
    y, wy = panel_rule(0.0, Ly, panels, order)
    gamma = math.sqrt(2.0 / (1.0 - tau * tau))
    # exp((y^2-x^2)/(1+tau)) erfc(gamma y) == exp(-x^2/(1+tau) - y^2/(1-tau)) erfcx(gamma y)
    W = (wx * np.exp(-x * x / (1.0 + tau)))[:, None] * (
        wy * np.exp(-y * y / (1.0 - tau)) * _sp.erfcx(gamma * y))[None, :]
    z = (x[:, None] + 1j * y[None, :]).ravel()
    W = W.ravel()
    V = np.array([P.polyval(z, c) for c in polys])
    M = (V * W) @ V.conj().T
    A = np.abs(V)
    # 2i [f(z) g(zbar) - g(z) f(zbar)] = -4 Im(f(z) conj(g(z)))
    return -4.0 * M.imag, 4.0 * (A * W) @ A.T


def skew_gram(polys, tau, spec=None, panels=8, order=20, parts=False):
    """Matrix of skew inner products ``<p_a, p_b>`` by nested quadrature.

    The real-line part splits the ``sgn(y - x)`` integrand at the diagonal
    so that every panel sees a smooth integrand; the half-plane part is a
    tensor Gauss-Legendre rule. Panels are doubled until two successive
    resolutions agree to the tolerances of ``spec``.

    Raises
    ------
    AccuracyError
        If agreement is not reached within ``spec.max_subdivisions`` panels.
    """
    spec = spec or DEFAULT_SPEC
    if not 0.0 <= tau < 1.0:
        raise DomainError("tau must lie in [0, 1)")
    polys = [_as_coeffs(p) for p in polys]

    def evaluate(npan):
        return (_real_part(polys, tau, spec.eps_trunc, npan, order),
                _complex_part(polys, tau, spec.eps_trunc, npan, order))

    (r_old, _), (c_old, _) = evaluate(panels)
    while True:
        npan = 2 * panels
        (r_new, r_mass), (c_new, c_mass) = evaluate(npan)
        # tolerance is relative to the integral of |integrand|, since many
        # entries vanish through cancellation
        scale = r_mass + c_mass
        err = np.abs(r_new - r_old) + np.abs(c_new - c_old)
        if np.all(err <= spec.abs_tol + spec.rel_tol * scale):
            break
        if 2 * npan > spec.max_subdivisions:
            raise AccuracyError("skew inner product did not converge",
                                estimate=r_new + c_new, error=float(err.max()))
        panels, r_old, c_old = npan, r_new, c_new
    if parts:
        return r_new, c_new
    return r_new + c_new


def inner_skew(f, g, tau, spec=None):
    """Numeric skew inner product ``<f, g>`` of two real polynomials."""
    return float(skew_gram([f, g], tau, spec)[0, 1])


def m1_closed_form(j, k, tau):
    """Closed form of ``<C_{2j+1}, C_{2k}>``."""
    if j < k:
        return 0.0
    return -(2.0 ** (j + k + 1.5)) * math.factorial(j) * math.gamma(k + 0.5) * (1.0 + tau)


def verify_m1(j, k, tau, spec=None):
    """Compare the quadrature value of ``<C_{2j+1}, C_{2k}>`` with its closed form.

    Returns
    -------
    numeric, closed_form, residual : float
        ``residual = |numeric - closed_form| / max(1, |closed_form|)``.
    """
    coef = c_coeffs(tau, 2 * max(j, k) + 1)
    f = coef[2 * j + 1, : 2 * j + 2]
    g = coef[2 * k, : 2 * k + 1]
    numeric = inner_skew(f, g, tau, spec)
    closed = m1_closed_form(j, k, tau)
    return numeric, closed, abs(numeric - closed) / max(1.0, abs(closed))
