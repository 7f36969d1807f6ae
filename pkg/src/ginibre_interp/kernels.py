"""Finite-N correlation kernels for real and complex eigenvalues.

All sums are carried out on the factorial-normalised, Gaussian-weighted
values ``c_k(x) = exp(-x^2 / 2(1+tau)) C_k(x) / sqrt(k!)``, so that no
individual factor over- or underflows even when ``N`` is in the hundreds.
The integrals ``Phi_k(x) = int sgn(x-y) R_k(y) exp(-y^2/2(1+tau)) dy`` that
enter the real kernel obey a two-term recurrence, which is the default way
of computing them; split quadrature is available as an independent route.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import special as _sp

from .errors import AccuracyError, DomainError
from .hermite import c_sequence, normalized_sequence
from .pfaff import pfaffian
from .skewop import SkewOPFamily, r_norm, r_poly
from .specfun import DEFAULT_SPEC, integrate, log_erfc, panel_rule

__all__ = [
    "KernelContext",
    "phi",
    "s_r",
    "d_r",
    "i_tilde_r",
    "rho_r",
    "rho_r1_profile",
    "s_c",
    "s_c_hat",
    "rho_c",
    "rho_c1",
]

_SQRT2PI = math.sqrt(2.0 * math.pi)
Y_MIN = 1e-8


@dataclass(frozen=True)
class KernelContext:
    """Matrix size, asymmetry and numerical settings for kernel evaluation.

    Parameters
    ----------
    n : int
        Even matrix size ``N``.
    tau : float
        Asymmetry parameter in ``[0, 1)``.
    spec : QuadratureSpec, optional
    precision : {"double", "high"}
        ``"high"`` runs the Hermite recurrences in 40-digit arithmetic.
    """

    n: int
    tau: float
    spec: object = DEFAULT_SPEC
    precision: str = "double"
    family: SkewOPFamily = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise DomainError("N must be even")
        if not 0.0 <= self.tau < 1.0:
            raise DomainError("tau must lie in [0, 1)")
        if self.precision not in ("double", "high"):
            raise DomainError(f"unknown precision {self.precision!r}")
        object.__setattr__(self, "family", SkewOPFamily(self.tau, self.n))

    @property
    def s2(self):
        """Variance ``1 + tau`` of the real-line weight."""
        return 1.0 + self.tau

    @property
    def gamma(self):
        return math.sqrt(2.0 / (1.0 - self.tau * self.tau))

    def u(self, k):
        """Normalisation ``<R_{2k}, R_{2k+1}>`` as a ScaledValue."""
        return r_norm(self.family, k)


def _cnorm(ctx, z, top, log_weight):
    seq = normalized_sequence(ctx.tau, top, z, log_weight, precision=ctx.precision)
    return seq.values()


def _creal(ctx, x, top):
    """``c_0(x) .. c_top(x)`` with the real-line weight."""
    x = np.asarray(x, dtype=float)
    return _cnorm(ctx, x, top, -x * x / (2.0 * ctx.s2))


def _phi_norm(ctx, x, c, top):
    """``Phi_k(x) / sqrt(k!)`` for ``Phi`` built on ``C_k`` (not ``R_k``), k <= top.

    ``psi_{k+1} = k psi_{k-1} - 2(1+tau) w C_k`` with
    ``psi_0 = sqrt(2 pi (1+tau)) erf(x / sqrt(2(1+tau)))`` and
    ``psi_1 = -2(1+tau) w``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((top + 1,) + x.shape)
    out[0] = math.sqrt(2.0 * math.pi * ctx.s2) * _sp.erf(x / math.sqrt(2.0 * ctx.s2))
    if top >= 1:
        out[1] = -2.0 * ctx.s2 * c[0]
    for k in range(1, top):
        out[k + 1] = (math.sqrt(k / (k + 1.0)) * out[k - 1]
                      - 2.0 * ctx.s2 * c[k] / math.sqrt(k + 1.0))
    return out


def phi(ctx, k, x, method="recurrence"):
    """``Phi_k(x) = int sgn(x - y) R_k(y) exp(-y^2 / 2(1+tau)) dy``.

    Parameters
    ----------
    method : {"recurrence", "quad"}
        ``"quad"`` splits the integral at ``x`` and integrates each half
        adaptively over a truncated Gaussian range.
    """
    if not 0 <= k <= ctx.n - 1:
        raise DomainError(f"index {k} outside 0..N-1")
    if method == "quad":
        return _phi_quad(ctx, k, float(x))
    if method != "recurrence":
        raise DomainError(f"unknown method {method!r}")
    x = np.asarray(x, dtype=float)
    if k % 2:
        # Phi for R_{2m+1} collapses to -2(1+tau) w C_{2m}
        c = _creal(ctx, x, k - 1)
        val = -2.0 * ctx.s2 * c[k - 1] * math.exp(0.5 * math.lgamma(k))
    else:
        c = _creal(ctx, x, max(k - 1, 0))
        val = _phi_norm(ctx, x, c, k)[k] * math.exp(0.5 * math.lgamma(k + 1))
    return val if np.ndim(val) else float(val)


def _phi_quad(ctx, k, x):
    s2 = ctx.s2

    def f(y):
        return float(r_poly(ctx.family, k, y)) * math.exp(-y * y / (2.0 * s2))

    sig = math.sqrt(s2)
    left = integrate(f, -math.inf, x, ctx.spec, sigma=sig, degree=k)
    right = integrate(f, x, math.inf, ctx.spec, sigma=sig, degree=k)
    return left - right


def _s_r_wev(ctx, x, y):
    n = ctx.n
    cx = _creal(ctx, x, n - 1)
    cy = _creal(ctx, y, n - 1)
    head = np.sum(cx[: n - 1] * cy[: n - 1], axis=0) / _SQRT2PI
    ph = _phi_norm(ctx, x, cx, n - 2)[n - 2]
    tail = cy[n - 1] * math.sqrt(n - 1.0) * ph / (2.0 * _SQRT2PI * ctx.s2)
    return head + tail


def _s_r_sum(ctx, x, y):
    # sum over skew-orthogonal pairs in plain arithmetic; fine for small N
    n, s2 = ctx.n, ctx.s2
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    wx = np.exp(-x * x / (2.0 * s2))
    wy = np.exp(-y * y / (2.0 * s2))
    cx = c_sequence(ctx.tau, n, x)
    psi = np.empty((n,) + x.shape)
    psi[0] = math.sqrt(2.0 * math.pi * s2) * _sp.erf(x / math.sqrt(2.0 * s2))
    psi[1] = -2.0 * s2 * wx
    for k in range(1, n - 1):
        psi[k + 1] = k * psi[k - 1] - 2.0 * s2 * wx * cx[k]
    total = 0.0
    for m in range(n // 2):
        phi_even = psi[2 * m]
        phi_odd = -2.0 * s2 * wx * cx[2 * m]
        r_even = r_poly(ctx.family, 2 * m, y)
        r_odd = r_poly(ctx.family, 2 * m + 1, y)
        total = total + (phi_even * r_odd - phi_odd * r_even) / ctx.u(m).to_float()
    return wy * total


def s_r(ctx, x, y, form="wev"):
    """Real-real kernel ``S^r(x, y)``.

    Parameters
    ----------
    form : {"wev", "sum"}
        ``"wev"`` is the Christoffel-Darboux-type form with a single
        boundary term and is stable for large ``N``; ``"sum"`` is the direct
        sum over skew-orthogonal pairs, kept as a cross-check for small ``N``.
    """
    if form == "wev":
        val = _s_r_wev(ctx, x, y)
    elif form == "sum":
        val = _s_r_sum(ctx, x, y)
    else:
        raise DomainError(f"unknown form {form!r}")
    return val if np.ndim(val) else float(val)


def d_r(ctx, x, y):
    """``D^r(x, y) = d/dx S^r(x, y)``, differentiated analytically."""
    n = ctx.n
    x = np.asarray(x, dtype=float)
    cx = _creal(ctx, x, n - 1)
    cy = _creal(ctx, y, n - 1)
    k = np.arange(n - 1).reshape((-1,) + (1,) * x.ndim)
    prev = np.concatenate([np.zeros_like(cx[:1]), cx[: n - 2]])
    deriv = np.sqrt(k) * prev - x * cx[: n - 1] / ctx.s2
    head = np.sum(deriv * cy[: n - 1], axis=0) / _SQRT2PI
    tail = cy[n - 1] * math.sqrt(n - 1.0) * 2.0 * cx[n - 2] / (2.0 * _SQRT2PI * ctx.s2)
    val = head + tail
    return val if np.ndim(val) else float(val)


def _i_tilde_closed(ctx, x, y):
    n = ctx.n
    cx = _creal(ctx, x, n - 2)
    cy = _creal(ctx, y, n - 2)
    px = _phi_norm(ctx, x, cx, n - 2)
    py = _phi_norm(ctx, y, cy, n - 2)
    even = slice(0, n - 1, 2)
    integral = np.sum(cx[even] * py[even] - px[even] * cy[even], axis=0) / (2.0 * _SQRT2PI)
    return 0.5 * np.sign(y - x) - integral


def _i_tilde_quad(ctx, x, y, order=20):
    x, y = float(x), float(y)
    if x == y:
        return 0.0
    spec = ctx.spec
    panels = 1
    old = None
    while True:
        z, w = panel_rule(x, y, panels, order)
        val = float(np.sum(w * s_r(ctx, np.full_like(z, x), z)))
        if old is not None and abs(val - old) <= spec.abs_tol + spec.rel_tol * abs(val):
            break
        if panels > spec.max_subdivisions:
            raise AccuracyError("integral of S^r did not converge",
                                estimate=val, error=abs(val - old))
        old, panels = val, 2 * panels
    return 0.5 * math.copysign(1.0, y - x) - val


def i_tilde_r(ctx, x, y, method="quad"):
    """``I~^r(x, y) = sgn(y-x)/2 - int_x^y S^r(x, z) dz``.

    ``method="quad"`` integrates ``S^r`` with composite Gauss-Legendre
    panels, doubling until converged; ``method="closed"`` uses the exact
    antiderivative in terms of ``Phi``.
    """
    if method == "quad":
        if np.ndim(x) or np.ndim(y):
            xb, yb = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            return np.vectorize(lambda a, b: _i_tilde_quad(ctx, a, b))(xb, yb)
        return _i_tilde_quad(ctx, x, y)
    if method == "closed":
        val = _i_tilde_closed(ctx, np.asarray(x, float), np.asarray(y, float))
        return val if np.ndim(val) else float(val)
    raise DomainError(f"unknown method {method!r}")


def _check_distinct(pts):
    if len(set(np.round(np.asarray(pts, dtype=complex), 15).tolist())) != len(pts):
        raise DomainError("correlation points must be distinct")


def rho_r(ctx, points, method="quad"):
    """``n``-point correlation of real eigenvalues as a ``2n x 2n`` Pfaffian."""
    x = np.atleast_1d(np.asarray(points, dtype=float))
    if x.ndim != 1 or x.size < 1:
        raise DomainError("need at least one point")
    _check_distinct(x)
    n = x.size
    xj, xk = np.meshgrid(x, x, indexing="ij")
    S = np.asarray(s_r(ctx, xj, xk))
    D = np.asarray(d_r(ctx, xj, xk))
    I = np.asarray(i_tilde_r(ctx, xj, xk, method=method)) if n > 1 else np.zeros((1, 1))
    # tidy roundoff so the block matrix is exactly antisymmetric
    I = 0.5 * (I - I.T)
    D = 0.5 * (D - D.T)
    # 2x2 blocks [[-I, S], [-S^T, D]] for each pair of points, interleaved
    M = np.empty((2 * n, 2 * n))
    M[0::2, 0::2] = -I
    M[0::2, 1::2] = S
    M[1::2, 0::2] = -S.T
    M[1::2, 1::2] = D
    return pfaffian(M).to_float()


def rho_r1_profile(ctx, grid):
    """One-point real density ``S^r(x, x)`` sampled on ``grid``."""
    g = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(g)):
        raise DomainError("grid must be finite")
    return np.asarray(s_r(ctx, g, g))


def _ccoef(ctx):
    return 1.0 / (2.0 * ctx.s2 * _SQRT2PI)


def _s_c_from_norm(cw, cz, n):
    j = np.arange(n - 1).reshape((-1,) + (1,) * (cw.ndim - 1))
    sj = np.sqrt(j + 1.0)
    return np.sum(sj * (cw[1:n] * cz[: n - 1] - cw[: n - 1] * cz[1:n]), axis=0)


def _s_c_hermite(ctx, w, z, lw_w=0.0, lw_z=0.0):
    n = ctx.n
    w, z = np.broadcast_arrays(np.asarray(w, complex), np.asarray(z, complex))
    cw = _cnorm(ctx, w, n - 1, lw_w)
    cz = _cnorm(ctx, z, n - 1, lw_z)
    return _ccoef(ctx) * _s_c_from_norm(cw, cz, n)


def _s_c_sum(ctx, w, z):
    total = 0.0
    fam = ctx.family
    for m in range(ctx.n // 2):
        a = r_poly(fam, 2 * m + 1, w) * r_poly(fam, 2 * m, z)
        b = r_poly(fam, 2 * m, w) * r_poly(fam, 2 * m + 1, z)
        total = total + (a - b) / ctx.u(m).to_float()
    return total


def _s_c_transform(ctx, w, z):
    # Gaussian smoothing of the tau = 0 kernel, exact with N Hermite nodes
    n, tau = ctx.n, ctx.tau
    t, wt = np.polynomial.hermite.hermgauss(n)
    a = complex(w) + math.sqrt(2.0 * tau) * 1j * t[:, None]
    b = complex(z) + math.sqrt(2.0 * tau) * 1j * t[None, :]
    prod = a * b
    series = np.zeros_like(prod)
    term = np.ones_like(prod)
    for j in range(n - 1):
        series += term
        term = term * prod / (j + 1)
    s0 = (a - b) / (2.0 * _SQRT2PI) * series
    return complex(np.sum(wt[:, None] * wt[None, :] * s0) / (math.pi * (1.0 + tau)))


def s_c(ctx, w, z, form="hermite"):
    """Complex-complex kernel ``S^c(w, z)``.

    Parameters
    ----------
    form : {"hermite", "sum", "transform"}
        ``"hermite"`` sums ``[C_{j+1}(w) C_j(z) - C_j(w) C_{j+1}(z)] / j!``;
        ``"sum"`` uses the skew-orthogonal pairs directly; ``"transform"``
        averages the ``tau = 0`` kernel over imaginary Gaussian shifts of
        both arguments (scalar arguments only).
    """
    if form == "hermite":
        val = _s_c_hermite(ctx, w, z)
    elif form == "sum":
        val = _s_c_sum(ctx, np.asarray(w, complex), np.asarray(z, complex))
    elif form == "transform":
        return _s_c_transform(ctx, w, z)
    else:
        raise DomainError(f"unknown form {form!r}")
    return val if np.ndim(val) else complex(val)


def s_c_hat(ctx, w, z):
    """``exp(-(w^2 + z^2) / 2(1+tau)) S^c(w, z)``, with the weight folded in."""
    w = np.asarray(w, complex)
    z = np.asarray(z, complex)
    val = _s_c_hermite(ctx, w, z, -w * w / (2.0 * ctx.s2), -z * z / (2.0 * ctx.s2))
    return val if np.ndim(val) else complex(val)


def _point_log_weight(ctx, z):
    # each of z and conj(z) carries exp(-z^2/2(1+tau)) * sqrt(erfc(gamma y))
    return -z * z / (2.0 * ctx.s2) + 0.5 * log_erfc(ctx.gamma * z.imag)


def rho_c(ctx, points):
    """``n``-point correlation of complex eigenvalues in the upper half plane.

    ``points`` are complex numbers (or ``(x, y)`` pairs) with ``y > 0``.

    Raises
    ------
    DomainError
        If a point lies within ``1e-8`` of the real axis.
    """
    z = np.asarray(points)
    if z.ndim == 2 and z.shape[-1] == 2 and not np.iscomplexobj(z):
        z = z[:, 0] + 1j * z[:, 1]
    z = np.atleast_1d(z.astype(complex))
    if np.any(z.imag <= Y_MIN):
        raise DomainError("complex points must satisfy y > 1e-8")
    _check_distinct(z)
    n = z.size
    # rows ordered conj(z_1), z_1, conj(z_2), z_2, ...
    lw = _point_log_weight(ctx, z)
    pts = np.ravel(np.column_stack([z.conj(), z]))
    lws = np.ravel(np.column_stack([lw.conj(), lw]))
    A, B = np.meshgrid(pts, pts, indexing="ij")
    LA, LB = np.meshgrid(lws, lws, indexing="ij")
    M = _s_c_hermite(ctx, A, B, LA, LB)
    M = 0.5 * (M - M.T)
    val = (2j) ** n * pfaffian(M).to_float()
    # Hadamard-type bound on |Pf| sets the scale for the imaginary residual
    bound = 2.0 ** n * math.sqrt(float(np.prod(np.linalg.norm(M, axis=1))))
    if abs(val.imag) > 1e-9 * max(abs(val), bound):
        raise AccuracyError(f"complex correlation has imaginary part {val.imag:.3e}",
                            estimate=val, error=abs(val.imag))
    return float(val.real)


def rho_c1(ctx, x, y):
    """One-point complex density at ``x + iy`` (vectorised)."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    if np.any(y <= Y_MIN):
        raise DomainError("complex points must satisfy y > 1e-8")
    z = x + 1j * y
    lw = _point_log_weight(ctx, z)
    s = _s_c_hermite(ctx, z.conj(), z, lw.conj(), lw)
    val = (2j * s).real
    return val if np.ndim(val) else float(val)
