"""Special functions and quadrature used throughout the package.

The scalar special functions are thin, domain-checked wrappers over
:mod:`scipy.special`; ``hyp2f1_regular`` is implemented here because only a
narrow parameter family is needed and that family admits an exact terminating
form.  Quadrature comes in two flavours: an adaptive 1-D driver
(``integrate``) and fixed composite Gauss-Legendre panel rules that the 2-D
inner products vectorise over.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import integrate as _sp_integrate
from scipy import special as _sp

from .errors import AccuracyError, DomainError

__all__ = [
    "QuadratureSpec",
    "log_gamma",
    "erfc",
    "erf",
    "log_erfc",
    "hyp2f1_regular",
    "integrate",
    "truncation_radius",
    "gauss_legendre",
    "panel_rule",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances shared by every quadrature in the package.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Requested relative and absolute accuracy.
    max_subdivisions : int
        Budget of interval bisections (adaptive) or panel doublings (fixed
        rules).
    eps_trunc : float
        Cutoff for Gaussian tails when an infinite domain is truncated.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    eps_trunc: float = 1e-18

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.eps_trunc > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_SPEC = QuadratureSpec()


def log_gamma(x):
    """Natural log of the gamma function for positive arguments."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("log_gamma requires x > 0")
    out = _sp.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def erfc(x):
    """Complementary error function (real argument)."""
    out = _sp.erfc(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def erf(x):
    out = _sp.erf(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def log_erfc(x):
    """log(erfc(x)), finite far into the right tail where erfc underflows."""
    x = np.asarray(x, dtype=float)
    # erfc(x) = 2 * Phi(-sqrt(2) x)
    out = math.log(2.0) + _sp.log_ndtr(-math.sqrt(2.0) * x)
    return float(out) if out.ndim == 0 else out


def _is_nonpositive_int(v):
    return v <= 0 and float(v).is_integer()


def _hyp_series(a, b, c, z, max_terms=20000):
    # Plain Gauss series; stops exactly when a or b is a non-positive integer.
    total = 1.0
    term = 1.0
    small = 0
    for n in range(max_terms):
        num = (a + n) * (b + n)
        if num == 0.0:
            return total
        term *= num / ((c + n) * (n + 1)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise AccuracyError("2F1 series did not converge", estimate=total, error=abs(term))


def hyp2f1_regular(a, b, c, z):
    """Gauss hypergeometric function for the real family used by the mean count.

    Supported: ``|z| < 0.9`` by direct summation, and ``z < 0`` through the
    Pfaff transformation ``(1-z)^{-a} 2F1(a, c-b; c; z/(z-1))`` (or its twin
    with ``a`` and ``b`` exchanged), which terminates when ``c-b`` is a
    non-positive integer. This covers ``2F1(1/2, 1/2; 1/2-2k; -t/(1-t))`` for
    all ``0 <= t < 1``.

    Raises
    ------
    DomainError
        For parameter combinations outside the supported family.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if _is_nonpositive_int(c):
        raise DomainError("2F1 undefined for non-positive integer c")
    if z == 0.0:
        return 1.0
    if abs(z) < 0.9:
        return _hyp_series(a, b, c, z)
    if z < 0.0:
        u = z / (z - 1.0)
        for p, q in ((a, b), (b, a)):
            if _is_nonpositive_int(c - q):
                return (1.0 - z) ** (-p) * _hyp_series(p, c - q, c, u)
        if u < 0.9:
            return (1.0 - z) ** (-a) * _hyp_series(a, c - b, c, u)
    raise DomainError(f"2F1({a}, {b}; {c}; {z}) outside the supported family")


def truncation_radius(sigma, eps=DEFAULT_SPEC.eps_trunc, degree=0):
    """Half-width beyond which ``|t|^degree exp(-t^2 / 2 sigma^2)`` is below eps.

    Measured in units where the polynomial factor is normalised by
    ``sigma^degree``; for ``degree == 0`` this is the plain rule
    ``sigma * sqrt(2 ln(1/eps))``.
    """
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    target = math.log(1.0 / eps)
    t = math.sqrt(2.0 * target)
    for _ in range(50):
        t_new = math.sqrt(2.0 * (target + degree * math.log(max(t, 1.0))))
        if abs(t_new - t) < 1e-12:
            break
        t = t_new
    return sigma * t


def integrate(f, a, b, spec=None, *, center=0.0, sigma=None, degree=0):
    """Adaptive Gauss-Kronrod integral of a scalar function.

    Infinite endpoints are replaced by ``center +- truncation_radius(sigma)``
    when the caller supplies the Gaussian scale ``sigma`` of the integrand's
    weight; otherwise QUADPACK's own infinite-interval mapping is used.

    Raises
    ------
    AccuracyError
        When the subdivision budget runs out; ``estimate`` and ``error`` hold
        the best value and its error bound.
    """
    spec = spec or DEFAULT_SPEC
    lo, hi = float(a), float(b)
    if sigma is not None:
        radius = truncation_radius(sigma, spec.eps_trunc, degree)
        if math.isinf(lo):
            lo = center - radius if lo < 0 else center + radius
        if math.isinf(hi):
            hi = center + radius if hi > 0 else center - radius
    if lo == hi:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _sp_integrate.IntegrationWarning)
        res = _sp_integrate.quad(
            f, lo, hi,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, full_output=1,
        )
    value, err = res[0], res[1]
    if len(res) > 3 and err > max(spec.abs_tol, spec.rel_tol * abs(value)):
        raise AccuracyError(
            f"quadrature on [{lo}, {hi}] did not converge: {res[3].splitlines()[0]}",
            estimate=value, error=err,
        )
    return value


@lru_cache(maxsize=64)
def gauss_legendre(order):
    """Nodes and weights on [-1, 1] (cached, read-only)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(a, b, panels, order=20):
    """Composite Gauss-Legendre rule on [a, b].

    ``a`` and ``b`` may be arrays of equal shape, in which case the result has
    shape ``a.shape + (panels * order,)`` so that many intervals can be
    integrated in one vectorised sweep.
    """
    x, w = gauss_legendre(order)
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    nodes = a + (b - a) * t
    weights = (b - a) * wt
    return nodes, weights
