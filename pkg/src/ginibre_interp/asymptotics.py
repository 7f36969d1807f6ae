"""Large-N limits of the densities and kernels.

Three regimes are covered: the bulk (fixed interior point), the real edge
at ``(1+tau) sqrt(N)``, and the weakly non-symmetric limit
``tau = 1 - alpha^2 / N`` with coordinates in units of ``pi / sqrt(N)``.
For fixed ``tau`` every local limit is the ``tau = 0`` one after the change
of length scale ``s -> s / sqrt(1 - tau^2)``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import special as _sp

from .errors import DomainError
from .specfun import gauss_legendre

__all__ = [
    "EdgeFrame",
    "bulk_real_density",
    "edge_real_density",
    "edge_real_density_tau0",
    "bulk_sr_limit",
    "bulk_sc_limit",
    "weak_sr",
    "weak_sc",
    "weak_weight",
    "support_ellipse",
]

_SQRT2PI = math.sqrt(2.0 * math.pi)


def _check_tau(tau):
    if not 0.0 <= tau < 1.0:
        raise DomainError("tau must lie in [0, 1)")


@dataclass(frozen=True)
class EdgeFrame:
    """Coordinates centred at the right edge ``(1+tau) sqrt(N)`` of the real spectrum."""

    n: int
    tau: float

    def __post_init__(self):
        _check_tau(self.tau)
        if self.n < 1:
            raise DomainError("N must be positive")

    @property
    def edge(self):
        return (1.0 + self.tau) * math.sqrt(self.n)

    def to_x(self, X):
        return self.edge + np.asarray(X, dtype=float)

    def to_offset(self, x):
        return np.asarray(x, dtype=float) - self.edge


def bulk_real_density(tau):
    """Limiting density of real eigenvalues away from the edges."""
    _check_tau(tau)
    return 1.0 / math.sqrt(2.0 * math.pi * (1.0 - tau * tau))


def edge_real_density(X, tau):
    """Limiting density of real eigenvalues at offset ``X`` from the edge."""
    _check_tau(tau)
    X = np.asarray(X, dtype=float)
    s = math.sqrt(1.0 - tau * tau)
    val = (0.5 * _sp.erfc(math.sqrt(2.0) * X / s)
           + np.exp(-X * X / (s * s)) / (2.0 * math.sqrt(2.0)) * (1.0 + _sp.erf(X / s)))
    val = val / (_SQRT2PI * s)
    return val if val.ndim else float(val)


def edge_real_density_tau0(X):
    """The ``tau = 0`` edge profile, written out directly."""
    X = np.asarray(X, dtype=float)
    val = (0.5 * (1.0 - _sp.erf(math.sqrt(2.0) * X))
           + np.exp(-X * X) / (2.0 * math.sqrt(2.0)) * (1.0 + _sp.erf(X))) / _SQRT2PI
    return val if val.ndim else float(val)


def bulk_sr_limit(x, y, tau):
    """Bulk limit of the real-real kernel, a Gaussian in ``x - y``."""
    _check_tau(tau)
    s2 = 1.0 - tau * tau
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    val = np.exp(-d * d / (2.0 * s2)) / math.sqrt(2.0 * math.pi * s2)
    return val if val.ndim else float(val)


def bulk_sc_limit(w, z, tau, hat=True):
    """Bulk limit of the complex-complex kernel.

    Parameters
    ----------
    hat : bool
        ``True`` returns the limit of ``exp(-(w^2+z^2)/2(1+tau)) S^c(w, z)``,
        which depends on ``w - z`` only; ``False`` the limit of ``S^c``
        itself. Both carry ``(1 - tau^2)^{-3/2}``, the factor that makes the
        planar density scale by ``1 / (1 - tau^2)``.
    """
    _check_tau(tau)
    s2 = 1.0 - tau * tau
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    pref = (w - z) / (2.0 * _SQRT2PI * s2 ** 1.5)
    if hat:
        val = pref * np.exp(-(z - w) ** 2 / (2.0 * s2))
    else:
        val = pref * np.exp(-tau / (2.0 * s2) * (z * z + w * w) + z * w / s2)
    return val if val.ndim else complex(val)


def _check_alpha(alpha):
    if not alpha > 0:
        raise DomainError("alpha must be positive")


def _unit_rule(order=64):
    x, w = gauss_legendre(order)
    return 0.5 * (x + 1.0), 0.5 * w


def weak_sr(x, y, alpha, order=64):
    """Weakly non-symmetric limit of the scaled real-real kernel.

    ``int_0^1 exp(-alpha^2 u^2) cos(pi u (x - y)) du`` by Gauss-Legendre
    quadrature (the integrand is entire, so 64 nodes are ample for
    ``|x - y|`` up to a few dozen).
    """
    _check_alpha(alpha)
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    u, wu = _unit_rule(order)
    val = np.tensordot(np.cos(np.pi * d[..., None] * u) * np.exp(-alpha * alpha * u * u),
                       wu, axes=([-1], [0]))
    return val if np.ndim(val) else float(val)


def weak_sc(w, z, alpha, order=64):
    """Weakly non-symmetric limit of the scaled complex-complex kernel.

    ``(pi/2) int_0^1 u exp(-alpha^2 u^2) sin(pi u (w - z)) du``.
    """
    _check_alpha(alpha)
    d = np.asarray(w, dtype=complex) - np.asarray(z, dtype=complex)
    u, wu = _unit_rule(order)
    f = u * np.exp(-alpha * alpha * u * u) * np.sin(np.pi * d[..., None] * u)
    val = 0.5 * np.pi * np.tensordot(f, wu, axes=([-1], [0]))
    return val if np.ndim(val) else complex(val)


def weak_weight(y, alpha):
    """Limit ``erfc(pi y / alpha)`` of the per-point weight of complex eigenvalues."""
    _check_alpha(alpha)
    val = _sp.erfc(np.pi * np.asarray(y, dtype=float) / alpha)
    return val if np.ndim(val) else float(val)


def support_ellipse(n, tau):
    """Semi-axes ``(sqrt(N)(1+tau), sqrt(N)(1-tau))`` of the eigenvalue support."""
    if n < 1:
        raise DomainError("N must be positive")
    if not 0.0 <= tau <= 1.0:
        raise DomainError("tau must lie in [0, 1]")
    r = math.sqrt(n)
    return r * (1.0 + tau), r * (1.0 - tau)
