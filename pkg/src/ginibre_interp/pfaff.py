"""Overflow-safe Pfaffians, determinants and ``det(zeta A + B)`` coefficients."""

from dataclasses import dataclass
import math
import warnings

import mpmath
import numpy as np
from scipy import linalg as sla

from .errors import AccuracyError, DomainError

__all__ = [
    "ScaledValue",
    "pfaffian",
    "det_scaled",
    "det_poly_in_zeta",
    "chebyshev_nodes",
]


@dataclass(frozen=True)
class ScaledValue:
    """A number stored as ``mantissa * 2**scale``.

    ``abs(mantissa)`` lies in ``[1, 2)`` (complex mantissas are normalised by
    modulus); zero is ``(0, 0)``.
    """

    mantissa: complex | float = 0.0
    scale: int = 0

    @classmethod
    def from_parts(cls, mantissa, scale=0):
        if mantissa == 0:
            return cls(0.0, 0)
        if isinstance(mantissa, mpmath.mpf) or isinstance(mantissa, mpmath.mpc):
            mag = abs(mantissa)
            e = int(mpmath.floor(mpmath.log(mag, 2)))
            m = mantissa / mpmath.mpf(2) ** e
            m = complex(m) if isinstance(m, mpmath.mpc) else float(m)
            return cls._norm(m, scale + e)
        return cls._norm(mantissa, scale)

    @classmethod
    def _norm(cls, m, scale):
        if m == 0:
            return cls(0.0, 0)
        _, e = math.frexp(abs(m))
        # frexp gives |m| = f * 2^e with f in [0.5, 1)
        shift = e - 1
        if isinstance(m, complex):
            m = complex(math.ldexp(m.real, -shift), math.ldexp(m.imag, -shift))
        else:
            m = math.ldexp(float(m), -shift)
        return cls(m, int(scale + shift))

    @classmethod
    def from_float(cls, x):
        return cls.from_parts(x)

    @classmethod
    def from_log(cls, log_abs, sign=1.0):
        """Build from a natural-log magnitude and a sign (or unit phase)."""
        if log_abs == -math.inf:
            return cls(0.0, 0)
        e = math.floor(log_abs / math.log(2.0))
        m = math.exp(log_abs - e * math.log(2.0)) * sign
        return cls.from_parts(m, e)

    def to_float(self):
        if isinstance(self.mantissa, complex):
            return complex(math.ldexp(self.mantissa.real, self.scale),
                           math.ldexp(self.mantissa.imag, self.scale))
        try:
            return math.ldexp(self.mantissa, self.scale)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    value = property(to_float)

    def __float__(self):
        v = self.to_float()
        if isinstance(v, complex):
            raise TypeError("complex ScaledValue; use to_float()")
        return v

    def __complex__(self):
        return complex(self.to_float())

    @property
    def log_abs(self):
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.scale * math.log(2.0)

    def __mul__(self, other):
        if not isinstance(other, ScaledValue):
            other = ScaledValue.from_parts(other)
        return ScaledValue.from_parts(self.mantissa * other.mantissa, self.scale + other.scale)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ScaledValue):
            other = ScaledValue.from_parts(other)
        if other.mantissa == 0:
            raise ZeroDivisionError("ScaledValue division by zero")
        return ScaledValue.from_parts(self.mantissa / other.mantissa, self.scale - other.scale)

    def __neg__(self):
        return ScaledValue(-self.mantissa, self.scale)

    def ldexp(self, k):
        """Multiply by ``2**k``."""
        if self.mantissa == 0:
            return self
        return ScaledValue(self.mantissa, self.scale + int(k))


def _check_skew(a, rtol=1e-12):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("Pfaffian needs a square matrix")
    if a.shape[0] % 2:
        raise DomainError("Pfaffian needs an even dimension")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale and np.max(np.abs(a + a.T)) > rtol * scale:
        raise DomainError("matrix is not antisymmetric")


def pfaffian(a, check=True):
    """Pfaffian of an even-dimensional antisymmetric matrix.

    Parlett-Reid elimination with partial pivoting, reducing the matrix to
    skew tridiagonal form; the product of the pivots is accumulated as a
    :class:`ScaledValue`. Sign convention: ``Pf([[0, a], [-a, 0]]) = a``.
    """
    a = np.array(a, dtype=np.result_type(np.asarray(a), float), copy=True)
    if check:
        _check_skew(a)
    n = a.shape[0]
    if n == 0:
        return ScaledValue.from_parts(1.0)
    mant = 1.0 + 0.0j if np.iscomplexobj(a) else 1.0
    scale = 0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            mant = -mant
        piv = a[k, k + 1]
        if piv == 0:
            return ScaledValue(0.0, 0)
        sv = ScaledValue.from_parts(mant * piv, scale)
        mant, scale = sv.mantissa, sv.scale
        if k + 2 < n:
            t = a[k, k + 2:] / piv
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(t, col) - np.outer(col, t)
    if not np.iscomplexobj(a) and isinstance(mant, complex):
        mant = mant.real
    return ScaledValue.from_parts(mant, scale)


def det_scaled(m):
    """Determinant by LU with partial pivoting, returned as a ScaledValue."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("determinant needs a square matrix")
    if m.shape[0] == 0:
        return ScaledValue.from_parts(1.0)
    with warnings.catch_warnings():
        # a singular matrix is a legitimate input here; it yields zero
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(m, check_finite=True)
    diag = np.diag(lu)
    if np.any(diag == 0):
        return ScaledValue(0.0, 0)
    swaps = int(np.sum(piv != np.arange(len(piv))))
    f, e = np.frexp(np.abs(diag))
    phase = np.prod(diag / np.abs(diag))
    mant = float(np.prod(f)) if not np.iscomplexobj(diag) else complex(np.prod(f))
    mant = mant * phase * (-1) ** swaps
    if not np.iscomplexobj(diag):
        mant = float(np.real(mant))
    return ScaledValue.from_parts(mant, int(np.sum(e)))


def chebyshev_nodes(count, lo=0.0, hi=2.0):
    """Chebyshev points of the first kind mapped to ``[lo, hi]``."""
    k = np.arange(count)
    x = np.cos((2 * k + 1) * np.pi / (2 * count))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x


def _balance(a, b):
    """Row then column scalings (powers of two) for ``zeta A + B``."""
    mag = np.abs(a) + np.abs(b)
    rows = np.zeros(mag.shape[0], dtype=np.int64)
    cols = np.zeros(mag.shape[1], dtype=np.int64)
    rmax = mag.max(axis=1)
    ok = rmax > 0
    rows[ok] = -np.frexp(rmax[ok])[1]
    mag = mag * np.ldexp(1.0, rows)[:, None]
    cmax = mag.max(axis=0)
    ok = cmax > 0
    cols[ok] = -np.frexp(cmax[ok])[1]
    return rows, cols


def _newton_to_monomial(nodes, values):
    """Monomial coefficients of the interpolant, via divided differences."""
    n = len(nodes)
    dd = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j])
    coef = [dd[-1] * 0 for _ in range(n)]
    coef[0] = dd[n - 1]
    # Horner expansion of the Newton form, highest divided difference first.
    for i in range(n - 2, -1, -1):
        new = [dd[i] * 0 for _ in range(n)]
        for p in range(n - 1):
            new[p + 1] += coef[p]
            new[p] -= nodes[i] * coef[p]
        new[0] += dd[i]
        coef = new
    return coef


def det_poly_in_zeta(a, b, m=None, precision="double", check_tol=1e-8, dps=50,
                     method="chebyshev"):
    """Coefficients ``c_0..c_m`` of ``p(zeta) = det(zeta A + B)``.

    With ``method="chebyshev"``, ``p`` is sampled at ``m + 1`` Chebyshev
    nodes on ``[0, 2]`` and the interpolant converted to the monomial basis
    through its Newton form. The matrices are first balanced by power-of-two
    row and column scalings, which are undone exactly on the scale of the
    result. A held-out node checks the interpolant.

    ``method="circle"`` (double precision only) instead samples ``p`` at the
    ``m + 1`` roots of unity on a ladder of radii ``rho`` and reads each
    ``c_k`` off the radius minimising ``max |p| / rho^k``. The error in
    ``c_k`` is then of order ``eps * min_rho max|p| / rho^k``, which for a
    log-concave coefficient sequence is within a small factor of ``|c_k|``
    itself, so strongly graded coefficients keep their relative accuracy.

    Parameters
    ----------
    a, b : array_like or mpmath matrices
        Square matrices of the same shape. With ``precision="high"`` the
        entries may be mpmath numbers and all arithmetic uses ``dps`` digits.
    m : int, optional
        Degree bound; defaults to the matrix size.

    Returns
    -------
    list of ScaledValue

    Raises
    ------
    AccuracyError
        If the held-out residual exceeds ``check_tol`` relative to
        ``sum |c_i| |zeta*|^i``.
    """
    if precision == "high":
        return _det_poly_mp(a, b, m, check_tol, dps)
    if precision != "double":
        raise DomainError(f"unknown precision {precision!r}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("A and B must be square and of equal shape")
    size = a.shape[0]
    m = size if m is None else m
    if method == "circle":
        return _det_poly_circle(a, b, m, check_tol)
    if method != "chebyshev":
        raise DomainError(f"unknown method {method!r}")
    rows, cols = _balance(a, b)
    rs, cs = np.ldexp(1.0, rows), np.ldexp(1.0, cols)
    a_b = a * rs[:, None] * cs[None, :]
    b_b = b * rs[:, None] * cs[None, :]
    undo = -int(rows.sum() + cols.sum())

    nodes = chebyshev_nodes(m + 1)
    dets = [det_scaled(z * a_b + b_b) for z in nodes]
    common = max(d.scale for d in dets if d.mantissa != 0) if any(d.mantissa for d in dets) else 0
    vals = [math.ldexp(d.mantissa, d.scale - common) for d in dets]
    coef = _newton_to_monomial(list(nodes), vals)

    z_star = 1.2345
    ref = det_scaled(z_star * a_b + b_b)
    ref_v = math.ldexp(ref.mantissa, ref.scale - common) if ref.mantissa else 0.0
    approx = sum(c * z_star ** i for i, c in enumerate(coef))
    bound = sum(abs(c) * z_star ** i for i, c in enumerate(coef)) or 1.0
    resid = abs(approx - ref_v) / bound
    if resid > check_tol:
        raise AccuracyError(f"interpolation residual {resid:.2e} at held-out node",
                            estimate=coef, error=resid)
    return [ScaledValue.from_parts(c, common + undo) for c in coef]


def _det_balanced(z, a, b):
    rows, cols = _balance(abs(z) * a, b)
    rs, cs = np.ldexp(1.0, rows), np.ldexp(1.0, cols)
    d = det_scaled((z * a + b) * rs[:, None] * cs[None, :])
    return d.ldexp(-int(rows.sum() + cols.sum()))


def _circle_pass(a, b, s, m):
    """FFT coefficients on the circle ``|zeta| = e^s``.

    Returns ``(log_max, est)`` where ``est[k] = c_k`` as (mantissa, log2
    scale) pairs and ``log_max`` is the natural log of ``max |p|`` there.
    """
    n = m + 1
    nodes = np.exp(s) * np.exp(2j * np.pi * np.arange(n) / n)
    dets = [_det_balanced(z, a, b) for z in nodes]
    nz = [d.scale for d in dets if d.mantissa != 0]
    if not nz:
        return -math.inf, None
    common = max(nz)
    vals = np.array([complex(d.mantissa) * 2.0 ** (d.scale - common) for d in dets])
    coef = np.fft.fft(vals) / n
    log_max = math.log(np.max(np.abs(vals))) + common * math.log(2.0)
    return log_max, (coef.real, common)


def _det_poly_circle(a, b, m, check_tol, step=0.5, s_max=200.0):
    cache = {}

    def visit(s):
        if s not in cache:
            cache[s] = _circle_pass(a, b, s, m)
        return cache[s][0]

    # walk outward until the lowest / highest degree dominates max|p|
    for direction, target in ((-1, 0.0), (1, float(m))):
        s, prev = 0.0, visit(0.0)
        while abs(s) < s_max:
            s_next = s + direction * step
            cur = visit(s_next)
            slope = (cur - prev) / (s_next - s)
            s, prev = s_next, cur
            if abs(slope - target) < 0.05 or not math.isfinite(cur):
                break

    best = [(math.inf, 0.0, 0, 0.0)] * (m + 1)
    for s, (log_max, est) in cache.items():
        if est is None:
            continue
        coef, common = est
        for k in range(m + 1):
            cost = log_max - k * s
            if cost < best[k][0]:
                best[k] = (cost, coef[k], common, s)
    out = []
    for k, entry in enumerate(best):
        if entry[0] == math.inf:
            out.append(ScaledValue(0.0, 0))
            continue
        _, c, common, s = entry
        # c_k = c * 2^common * e^{-k s}
        out.append(ScaledValue.from_parts(c, common) * ScaledValue.from_log(-k * s))

    z_star = 1.2345
    ref = _det_balanced(z_star, a, b)
    terms = [v * ScaledValue.from_log(k * math.log(z_star)) for k, v in enumerate(out)]
    top = max((t.scale for t in terms if t.mantissa != 0), default=0)
    approx = sum(math.ldexp(t.mantissa, t.scale - top) for t in terms)
    bound = sum(abs(math.ldexp(t.mantissa, t.scale - top)) for t in terms) or 1.0
    ref_v = math.ldexp(ref.mantissa, ref.scale - top) if ref.mantissa else 0.0
    resid = abs(approx - ref_v) / bound
    if resid > check_tol:
        raise AccuracyError(f"interpolation residual {resid:.2e} at held-out node",
                            estimate=out, error=resid)
    return out


def _det_poly_mp(a, b, m, check_tol, dps):
    with mpmath.workdps(dps):
        A = mpmath.matrix(a)
        B = mpmath.matrix(b)
        if A.rows != A.cols or (A.rows, A.cols) != (B.rows, B.cols):
            raise DomainError("A and B must be square and of equal shape")
        m = A.rows if m is None else m
        nodes = [mpmath.mpf(1) + mpmath.cos((2 * k + 1) * mpmath.pi / (2 * (m + 1)))
                 for k in range(m + 1)]
        vals = [mpmath.det(z * A + B) for z in nodes]
        coef = _newton_to_monomial(nodes, vals)
        z_star = mpmath.mpf("1.2345")
        ref = mpmath.det(z_star * A + B)
        approx = sum(c * z_star ** i for i, c in enumerate(coef))
        bound = sum(abs(c) * z_star ** i for i, c in enumerate(coef)) or 1
        resid = float(abs(approx - ref) / bound)
        if resid > check_tol:
            raise AccuracyError(f"interpolation residual {resid:.2e} at held-out node",
                                estimate=coef, error=resid)
        return [ScaledValue.from_parts(mpmath.mpf(c)) for c in coef]
