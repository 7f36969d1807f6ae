"""Hermite polynomials and the scaled monic family ``C_n``.

``C_n(z) = (tau/2)^{n/2} H_n(z / sqrt(2 tau))`` is always evaluated through its
own monic recurrence ``C_{n+1} = z C_n - n tau C_{n-1}``, which stays exact at
``tau = 0`` (where ``C_n(z) = z^n``).

For large degrees the factorial-normalised, Gaussian-weighted values
``exp(lw) C_k(z) / sqrt(k!)`` are produced as a :class:`ScaledSequence`: a
mantissa array plus an integer power-of-two exponent per entry, so that
neither the polynomial nor the weight over/underflows on its own.
"""

from dataclasses import dataclass
import math

import mpmath
import numpy as np

from .errors import DomainError

__all__ = [
    "HermiteContext",
    "ScaledSequence",
    "hermite_h",
    "hermite_h_log",
    "c_poly",
    "c_sequence",
    "c_coeffs",
    "normalized_sequence",
    "weighted_c",
    "plancherel_rotach",
]

_LN2 = math.log(2.0)
_BIG = 2.0 ** 500
_SMALL = 2.0 ** -500


@dataclass(frozen=True)
class HermiteContext:
    """Asymmetry parameter and degree range for ``C_n``."""

    tau: float
    n_max: int

    def __post_init__(self):
        if not 0.0 <= self.tau < 1.0:
            raise DomainError("tau must lie in [0, 1)")
        if self.n_max < 0:
            raise DomainError("n_max must be >= 0")


def hermite_h(n, x):
    """Physicists' Hermite polynomial ``H_n(x)`` by three-term recurrence.

    Overflows for large ``n x^2``; use :func:`hermite_h_log` or
    :func:`normalized_sequence` there.
    """
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return h_prev if h_prev.ndim else h_prev[()]
    h = 2.0 * x * h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if np.ndim(h) else h[()]


def hermite_h_log(n, x):
    """Sign and natural log of ``|H_n(x)|`` for real scalar ``x``."""
    x = float(x)
    h_prev, h, log_scale = 1.0, 2.0 * x, 0.0
    if n == 0:
        return 1.0, 0.0
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
        big = max(abs(h), abs(h_prev))
        if big > _BIG:
            h, h_prev = h / _BIG, h_prev / _BIG
            log_scale += 500 * _LN2
    if h == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, h), math.log(abs(h)) + log_scale


def _check_degree(ctx, n):
    if n < 0:
        raise DomainError("degree must be non-negative")
    if n > ctx.n_max:
        raise DomainError(f"degree {n} exceeds n_max={ctx.n_max}")


def c_sequence(tau, n, z):
    """All of ``C_0(z), ..., C_n(z)`` stacked along a new leading axis."""
    z = np.asarray(z)
    dtype = np.result_type(z, float)
    out = np.empty((n + 1,) + z.shape, dtype=dtype)
    out[0] = 1.0
    if n >= 1:
        out[1] = z
    for k in range(1, n):
        out[k + 1] = z * out[k] - k * tau * out[k - 1]
    return out


def c_poly(ctx, n, z):
    """Monic scaled Hermite polynomial ``C_n(z)`` (real or complex ``z``)."""
    _check_degree(ctx, n)
    val = c_sequence(ctx.tau, n, z)[n]
    return val if np.ndim(val) else val[()]


def c_coeffs(tau, n):
    """Monomial coefficients of ``C_0..C_n`` as rows of an ``(n+1, n+1)`` array."""
    coef = np.zeros((n + 1, n + 1))
    coef[0, 0] = 1.0
    if n >= 1:
        coef[1, 1] = 1.0
    for k in range(1, n):
        coef[k + 1, 1:] = coef[k, :-1]
        coef[k + 1] -= k * tau * coef[k - 1]
    return coef


@dataclass
class ScaledSequence:
    """Values ``mantissa * 2**exponent`` indexed by degree along axis 0."""

    mantissa: np.ndarray
    exponent: np.ndarray

    def values(self, shift=0):
        """Materialise ``mantissa * 2**(exponent + shift)`` (may under/overflow)."""
        e = self.exponent + shift
        m = self.mantissa
        if np.iscomplexobj(m):
            return np.ldexp(m.real, e) + 1j * np.ldexp(m.imag, e)
        return np.ldexp(m, e)

    def __getitem__(self, k):
        return ScaledSequence(self.mantissa[k], self.exponent[k])


def _split_log_weight(log_weight, shape, complex_out):
    lw = np.broadcast_to(np.asarray(log_weight), shape)
    re = np.real(lw).astype(float)
    e0 = np.floor(re / _LN2).astype(np.int64)
    m0 = np.exp(re - e0 * _LN2)
    if complex_out:
        m0 = m0 * np.exp(1j * np.imag(lw))
    return m0, e0


def normalized_sequence(tau, n, z, log_weight=0.0, precision="double"):
    """``exp(log_weight) * C_k(z) / sqrt(k!)`` for ``k = 0..n``.

    Runs the normalised recurrence
    ``c_{k+1} = (z c_k - tau sqrt(k) c_{k-1}) / sqrt(k+1)`` with a running
    power-of-two rescaling, keeping every mantissa within ``[2^-500, 2^500]``.

    Parameters
    ----------
    precision : {"double", "high"}
        ``"high"`` runs the recurrence in 40-digit mpmath arithmetic.
    """
    if precision == "high":
        return _normalized_sequence_mp(tau, n, z, log_weight)
    z = np.asarray(z)
    complex_out = np.iscomplexobj(z) or np.iscomplexobj(log_weight)
    dtype = complex if complex_out else float
    cur, expo = _split_log_weight(log_weight, z.shape, complex_out)
    cur = cur.astype(dtype)
    prev = np.zeros_like(cur)
    expo = expo.copy()
    mant = np.empty((n + 1,) + z.shape, dtype=dtype)
    exps = np.empty((n + 1,) + z.shape, dtype=np.int64)
    mant[0], exps[0] = cur, expo
    for k in range(n):
        nxt = (z * cur - tau * math.sqrt(k) * prev) / math.sqrt(k + 1)
        prev, cur = cur, nxt
        big = np.maximum(np.abs(cur), np.abs(prev))
        need = (big > _BIG) | ((big < _SMALL) & (big > 0))
        if np.any(need):
            s = np.where(need, np.frexp(np.where(need, big, 1.0))[1], 0)
            factor = np.ldexp(1.0, -s)
            cur = cur * factor
            prev = prev * factor
            expo = expo + s
        mant[k + 1], exps[k + 1] = cur, expo
    return ScaledSequence(mant, exps)


def _normalized_sequence_mp(tau, n, z, log_weight, dps=40):
    z = np.asarray(z)
    lw = np.broadcast_to(np.asarray(log_weight), z.shape)
    complex_out = np.iscomplexobj(z) or np.iscomplexobj(log_weight)
    dtype = complex if complex_out else float
    mant = np.empty((n + 1,) + z.shape, dtype=dtype)
    exps = np.empty((n + 1,) + z.shape, dtype=np.int64)
    with mpmath.workdps(dps):
        t = mpmath.mpf(tau)
        for idx in np.ndindex(z.shape):
            zz = mpmath.mpc(complex(z[idx])) if complex_out else mpmath.mpf(float(z[idx]))
            w = complex(lw[idx]) if complex_out else float(lw[idx])
            cur = mpmath.exp(mpmath.mpc(w) if complex_out else mpmath.mpf(w))
            prev = mpmath.mpf(0)
            for k in range(n + 1):
                if k > 0:
                    prev, cur = cur, (zz * cur - t * mpmath.sqrt(k - 1) * prev) / mpmath.sqrt(k)
                mag = abs(cur)
                e = int(mpmath.floor(mpmath.log(mag, 2))) if mag != 0 else 0
                m = cur / mpmath.mpf(2) ** e
                mant[(k,) + idx] = complex(m) if complex_out else float(m)
                exps[(k,) + idx] = e
    return ScaledSequence(mant, exps)


def weighted_c(ctx, n, x, sigma2):
    """``exp(-x^2 / 2 sigma2) C_n(x) / sqrt(n!)`` without intermediate overflow.

    ``sigma2 = inf`` drops the Gaussian weight.
    """
    _check_degree(ctx, n)
    if not sigma2 > 0:
        raise DomainError("sigma2 must be positive")
    x = np.asarray(x, dtype=float)
    lw = -x * x / (2.0 * sigma2) if math.isfinite(sigma2) else np.zeros_like(x)
    val = normalized_sequence(ctx.tau, n, x, lw)[n].values()
    return val if np.ndim(val) else float(val)


def plancherel_rotach(n, x, log=False):
    """Plancherel-Rotach approximation to ``H_n(x)`` outside the oscillatory zone.

    Only valid for ``x > sqrt(2n)``. With ``log=True`` the natural log of the
    approximation is returned instead, which is the useful form once ``H_n``
    exceeds double range (already at ``n = 200``).
    """
    x = float(x)
    if n < 1 or x <= math.sqrt(2.0 * n):
        raise DomainError("Plancherel-Rotach form requires x > sqrt(2n)")
    s = math.sqrt(x * x - 2.0 * n)
    logval = (
        n * math.log(2.0 * n)
        + 0.5 * (x * x - x * s - n)
        - n * math.log(x - s)
        + 0.5 * math.log(0.5 * (1.0 + x / s))
    )
    return logval if log else math.exp(logval)
