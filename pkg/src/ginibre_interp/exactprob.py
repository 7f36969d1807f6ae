"""Exact probabilities ``p_{k,N}`` of exactly ``k`` real eigenvalues.

``p_{k,N}`` is the coefficient of ``zeta^{k/2}`` in
``det[zeta alpha_{2j-1,2k} + beta_{2j-1,2k}]_{j,k=1..N/2}`` times the
prefactor ``(1+tau)^{N(N-1)/4} / (2^{N(N+1)/4} prod_{l=1}^N Gamma(l/2))``.
The entries are closed forms (``b = 1`` throughout; the probabilities do not
depend on it).
"""

from dataclasses import dataclass
import math

import mpmath
import numpy as np

from .errors import DomainError, PrecisionError
from .pfaff import ScaledValue, det_poly_in_zeta
from .specfun import hyp2f1_regular

__all__ = [
    "PknTable",
    "alpha_entry",
    "beta_entry",
    "i_odd",
    "alpha_matrix",
    "beta_matrix",
    "log_prefactor",
    "pkn_table",
    "p_all_real",
    "mean_real_count_exact",
    "mean_real_count_closed",
    "mean_real_count_asymptotic",
]

DOUBLE_N_MAX = 20


def _check_tau(tau):
    if not 0.0 <= tau < 1.0:
        raise DomainError("tau must lie in [0, 1)")


def _check_n(n):
    if n < 2 or n % 2:
        raise DomainError("N must be even")


@dataclass(frozen=True)
class PknTable:
    """Probabilities ``p_k`` for ``k = 0, 2, ..., N``."""

    n: int
    tau: float
    k: np.ndarray
    p: np.ndarray
    precision: str = "double"

    @property
    def total(self):
        return float(self.p.sum())

    @property
    def mean(self):
        return float((self.k * self.p).sum())

    def as_dict(self):
        return {int(k): float(p) for k, p in zip(self.k, self.p)}


class _Arith:
    """Gamma/sqrt/etc. in either float or mpmath arithmetic."""

    def __init__(self, high):
        self.high = high

    def num(self, v):
        return mpmath.mpf(v) if self.high else float(v)

    def gamma(self, v):
        return mpmath.gamma(v) if self.high else math.gamma(v)

    def sqrt(self, v):
        return mpmath.sqrt(v) if self.high else math.sqrt(v)

    def fact(self, n):
        return mpmath.factorial(n) if self.high else float(math.factorial(n))

    def binom(self, n, k):
        return mpmath.binomial(n, k) if self.high else float(math.comb(n, k))


def _alpha(j, k, ar):
    half = ar.num(1) / 2
    s = sum(ar.gamma(j + p - 1 - half) / (ar.num(2) ** (p - 1) * ar.fact(p - 1))
            for p in range(1, k + 1))
    return ar.num(2) ** k * ar.fact(k - 1) * s


def _i_odd_series(j, tau, ar):
    # finite binomial-sum form; cancels badly for large j, kept as an oracle
    m = (j - 1) // 2
    t = ar.num(tau)
    q = (1 - t) / (1 + t)
    poch = ar.num(1)  # (1/2)_p / p!
    s = ar.num(0)
    for p in range(m + 1):
        if p > 0:
            poch = poch * (ar.num(p) - ar.num(1) / 2) / p
        s += (-1) ** p * q ** p * poch
    return (-1) ** m * ar.fact(m) / 2 * (ar.sqrt(2 / (1 + t)) * s - 1)


def _i_odd(j, tau, ar):
    # The finite sum is a Taylor polynomial of (1+q)^{-1/2}, so I_j is
    # proportional to its remainder; written via the integral remainder as a
    # positive series in x = (1-tau)/2 <= 1/2.
    m = (j - 1) // 2
    t = ar.num(tau)
    q = (1 - t) / (1 + t)
    x = (1 - t) / 2
    term, total, n = ar.num(1), ar.num(1), 0
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps - 2) if ar.high else 1e-18
    while term > eps * total:
        term = term * (n + ar.num(1) / 2) / (n + m + 2) * x
        total += term
        n += 1
    poch = ar.gamma(m + ar.num(3) / 2) / ar.gamma(ar.num(1) / 2)  # (1/2)_{m+1}
    return (ar.sqrt(2 / (1 + t)) / 2 * poch * q ** (m + 1)
            / ((m + 1) * (1 + q)) * total)


class _Tables:
    """Cached ``I_j`` and ``Gamma`` values for one matrix build."""

    def __init__(self, tau, ar):
        self.tau, self.ar = tau, ar
        self._i, self._g = {}, {}

    def i(self, j):
        if j not in self._i:
            self._i[j] = _i_odd(j, self.tau, self.ar)
        return self._i[j]

    def gamma(self, twice):
        # Gamma(twice / 2)
        if twice not in self._g:
            self._g[twice] = self.ar.gamma(self.ar.num(twice) / 2)
        return self._g[twice]


def _beta(j, k, tau, ar, tables=None):
    tables = tables or _Tables(tau, ar)
    total = ar.num(0)
    for l in range(2 * j - 1):
        for p in range(2 * k):
            if (l + p) % 2 == 0:
                continue
            twice = 2 * (j + k - 1) - (l + p)
            if twice <= 0:
                raise DomainError(f"non-positive Gamma argument {twice / 2} in beta({j},{k})")
            # Im i^{l+p} = (-1)^{(l+p-1)/2} for odd l+p
            sign = (-1) ** (p + (l + p - 1) // 2)
            total += (sign * ar.binom(2 * j - 2, l) * ar.binom(2 * k - 1, p)
                      * tables.gamma(twice) * tables.i(l + p))
    return -4 * total


def alpha_entry(j, k):
    """``alpha_{2j-1,2k}[1]`` (sgn-weighted real-line double integral)."""
    if j < 1 or k < 1:
        raise DomainError("indices start at 1")
    return ScaledValue.from_float(_alpha(j, k, _Arith(False)))


def i_odd(j, tau):
    """``int_0^inf y^j erfc(sqrt(2/(1-tau)) y) exp(y^2) dy`` for odd ``j``."""
    if j < 1 or j % 2 == 0:
        raise DomainError("j must be odd and positive")
    _check_tau(tau)
    return _i_odd(j, tau, _Arith(False))


def beta_entry(j, k, tau):
    """``beta_{2j-1,2k}[1]`` (upper half-plane integral) as a ScaledValue."""
    if j < 1 or k < 1:
        raise DomainError("indices start at 1")
    _check_tau(tau)
    return ScaledValue.from_float(_beta(j, k, tau, _Arith(False)))


def alpha_matrix(m, high=False):
    ar = _Arith(high)
    return [[_alpha(j, k, ar) for k in range(1, m + 1)] for j in range(1, m + 1)]


def beta_matrix(m, tau, high=False):
    ar = _Arith(high)
    tables = _Tables(tau, ar)
    return [[_beta(j, k, tau, ar, tables) for k in range(1, m + 1)] for j in range(1, m + 1)]


def log_prefactor(n, tau):
    """Natural log of ``(1+tau)^{N(N-1)/4} / (2^{N(N+1)/4} prod Gamma(l/2))``."""
    return (n * (n - 1) / 4.0 * math.log1p(tau)
            - n * (n + 1) / 4.0 * math.log(2.0)
            - sum(math.lgamma(l / 2.0) for l in range(1, n + 1)))


def pkn_table(n, tau, precision="auto"):
    """Exact table of ``p_{k,N}``.

    Parameters
    ----------
    precision : {"auto", "double", "high"}
        ``"auto"`` selects 50-digit arithmetic for ``N > 20``.

    Raises
    ------
    PrecisionError
        When a probability comes out below ``-1e-8``.
    """
    _check_n(n)
    _check_tau(tau)
    if precision == "auto":
        precision = "high" if n > DOUBLE_N_MAX else "double"
    if precision not in ("double", "high"):
        raise DomainError(f"unknown precision {precision!r}")
    m = n // 2
    high = precision == "high"
    dps = max(50, 2 * n)
    with mpmath.workdps(dps):
        a = alpha_matrix(m, high)
        b = beta_matrix(m, tau, high)
        coef = det_poly_in_zeta(a if high else np.array(a), b if high else np.array(b),
                                precision=precision, dps=dps,
                                method="circle")
    lp = log_prefactor(n, tau)
    pref = ScaledValue.from_log(lp)
    p = np.array([(c * pref).to_float() for c in coef])
    if np.any(p < -1e-8):
        raise PrecisionError(
            f"negative probability {p.min():.3e} at N={n}; use precision='high'")
    return PknTable(n=n, tau=tau, k=np.arange(0, n + 1, 2), p=p, precision=precision)


def p_all_real(n, tau):
    """``p_{N,N} = ((1+tau)/2)^{N(N-1)/4}``."""
    _check_n(n)
    if not 0.0 <= tau <= 1.0:
        raise DomainError("tau must lie in [0, 1]")
    return ((1.0 + tau) / 2.0) ** (n * (n - 1) / 4.0)


def mean_real_count_exact(n, tau, precision="auto"):
    """``sum_k k p_{k,N}`` from the exact table."""
    return pkn_table(n, tau, precision).mean


def mean_real_count_closed(n, tau):
    """Mean real count as a finite sum of Gauss hypergeometric values.

    Integrating the real density term by term gives, for each ``k < N/2``,
    ``sqrt(2/pi) sqrt((1+tau)/(1-tau)) Gamma(2k+1/2)/(2k)! *
    2F1(1/2, 1/2; 1/2-2k; -tau/(1-tau))``.
    """
    _check_n(n)
    _check_tau(tau)
    z = -tau / (1.0 - tau)
    pref = math.sqrt(2.0 / math.pi) * math.sqrt((1.0 + tau) / (1.0 - tau))
    total = 0.0
    for k in range(n // 2):
        g = math.exp(math.lgamma(2 * k + 0.5) - math.lgamma(2 * k + 1))
        total += g * hyp2f1_regular(0.5, 0.5, 0.5 - 2 * k, z)
    return pref * total


def mean_real_count_asymptotic(n, tau):
    """Large-N mean number of real eigenvalues."""
    if not 0.0 <= tau < 1.0:
        raise DomainError("tau must lie in [0, 1)")
    return math.sqrt(2.0 * n / math.pi) * math.sqrt((1.0 + tau) / (1.0 - tau))
