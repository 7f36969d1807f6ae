"""Monte Carlo sampling of the ensemble and empirical eigenvalue statistics.

Every draw is reproducible from ``(seed, draw index)`` alone: the draw index
selects an independent block of a Philox counter-based stream, so results
do not depend on how draws are split between workers.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import linalg as sla

from .errors import DomainError, NumericError

__all__ = [
    "EnsembleParams",
    "SpectrumSample",
    "EmpiricalStats",
    "gaussians",
    "sample_matrix",
    "eigen_spectrum",
    "spectra",
    "empirical_pkn",
    "empirical_density",
    "raw_rows",
]


@dataclass(frozen=True)
class EnsembleParams:
    """``X = (S + sqrt(c) A) / sqrt(b)`` with ``c = (1 - tau) / (1 + tau)``.

    ``S`` is GOE-like (diagonal variance 1, off-diagonal variance 1/2) and
    ``A`` is antisymmetric with off-diagonal variance 1/2.
    """

    n: int
    tau: float
    b: float = 1.0
    seed: int = 0
    draws: int = 1000

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise DomainError("N must be even")
        if not 0.0 <= self.tau < 1.0:
            raise DomainError("tau must lie in [0, 1)")
        if not self.b > 0:
            raise DomainError("b must be positive")
        if self.draws < 1:
            raise DomainError("draws must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    @property
    def c(self):
        return (1.0 - self.tau) / (1.0 + self.tau)


@dataclass(frozen=True)
class SpectrumSample:
    """Real eigenvalues (sorted) and upper-half-plane complex eigenvalues."""

    real: np.ndarray
    complex: np.ndarray

    @property
    def n_real(self):
        return int(self.real.size)

    @property
    def n_pairs(self):
        return int(self.complex.size)

    def all_eigenvalues(self):
        c = self.complex
        return np.concatenate([self.real.astype(complex), c, c.conj()])


@dataclass
class EmpiricalStats:
    """Monte Carlo estimates; ``stderr`` is the binomial standard error."""

    params: EnsembleParams
    k: np.ndarray
    counts: np.ndarray
    p_hat: np.ndarray
    stderr: np.ndarray
    mean_real: float
    mean_real_se: float
    real_edges: np.ndarray = None
    real_density: np.ndarray = None
    real_density_se: np.ndarray = None
    complex_edges: tuple = None
    complex_density: np.ndarray = None
    extra: dict = field(default_factory=dict)

    @property
    def draws(self):
        return int(self.counts.sum())

    def mean_real_ci(self, z=3.0):
        return self.mean_real - z * self.mean_real_se, self.mean_real + z * self.mean_real_se


def gaussians(seed, index, count):
    """``count`` standard normals for draw ``index`` via Box-Muller.

    The Philox key is the seed; the top counter word is the draw index, so
    each draw owns a disjoint, fixed block of the stream.
    """
    bg = np.random.Philox(key=int(seed), counter=[0, 0, 0, int(index)])
    m = (count + 1) // 2
    u = np.random.Generator(bg).random(2 * m)
    r = np.sqrt(-2.0 * np.log1p(-u[:m]))  # 1 - u lies in (0, 1]
    t = 2.0 * np.pi * u[m:]
    return np.concatenate([r * np.cos(t), r * np.sin(t)])[:count]


def sample_matrix(params, index):
    """The ``index``-th matrix of the run described by ``params``."""
    n = params.n
    g = gaussians(params.seed, index, n * n)
    iu = np.triu_indices(n, 1)
    m = iu[0].size
    s = np.zeros((n, n))
    s[iu] = g[:m] / math.sqrt(2.0)
    s = s + s.T
    s[np.diag_indices(n)] = g[m: m + n]
    a = np.zeros((n, n))
    a[iu] = g[m + n: 2 * m + n] / math.sqrt(2.0)
    a = a - a.T
    return (s + math.sqrt(params.c) * a) / math.sqrt(params.b)


def eigen_spectrum(x):
    """Eigenvalues of a real matrix, split by the real Schur block structure.

    The matrix is balanced, then reduced to real Schur form (Hessenberg
    reduction plus Francis double-shift QR). A 1x1 block is a real
    eigenvalue; a 2x2 block is a complex pair when its discriminant is
    negative and a real pair otherwise.

    Raises
    ------
    NumericError
        If the QR iteration fails or produces non-finite output.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise NumericError("matrix has non-finite entries")
    try:
        bal, _ = sla.matrix_balance(x, permute=False)
        t = sla.schur(bal, output="real", check_finite=False)[0]
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericError(f"real Schur decomposition failed: {exc}") from exc
    if not np.all(np.isfinite(t)):
        raise NumericError("real Schur form has non-finite entries")
    n = t.shape[0]
    real, cplx = [], []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            a, b, c, d = t[i, i], t[i, i + 1], t[i + 1, i], t[i + 1, i + 1]
            half = 0.5 * (a + d)
            disc = 0.25 * (a - d) ** 2 + b * c
            if disc >= 0.0:
                r = math.sqrt(disc)
                real.extend([half - r, half + r])
            else:
                cplx.append(complex(half, math.sqrt(-disc)))
            i += 2
        else:
            real.append(t[i, i])
            i += 1
    return SpectrumSample(np.sort(np.array(real, dtype=float)),
                          np.array(cplx, dtype=complex))


def _chunk_spectra(params, start, stop):
    out = []
    for idx in range(start, stop):
        try:
            out.append(eigen_spectrum(sample_matrix(params, idx)))
        except NumericError as exc:
            raise NumericError(f"{exc} (seed={params.seed}, draw={idx})") from exc
    return out


def spectra(params, threads=1, chunk=2000):
    """Yield the spectrum of every draw, in draw order.

    With ``threads > 1`` chunks of draws are computed concurrently; the
    yielded sequence is identical for any thread count.
    """
    ranges = [(s, min(s + chunk, params.draws)) for s in range(0, params.draws, chunk)]
    if threads <= 1:
        for s, e in ranges:
            yield from _chunk_spectra(params, s, e)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(lambda r: _chunk_spectra(params, *r), ranges):
            yield from part


def _pkn_from_counts(params, counts_real, extra=None):
    n, draws = params.n, params.draws
    k = np.arange(0, n + 1, 2)
    counts = np.array([np.count_nonzero(counts_real == kk) for kk in k])
    p = counts / draws
    se = np.sqrt(p * (1.0 - p) / draws)
    mean = float(counts_real.mean())
    mean_se = float(counts_real.std(ddof=1) / math.sqrt(draws)) if draws > 1 else math.inf
    return EmpiricalStats(params=params, k=k, counts=counts, p_hat=p, stderr=se,
                          mean_real=mean, mean_real_se=mean_se, extra=extra or {})


def empirical_pkn(params, threads=1):
    """Empirical probabilities of ``k`` real eigenvalues.

    Raises
    ------
    NumericError
        If a sample violates the parity of ``N`` (a classification failure).
    """
    nr = np.empty(params.draws, dtype=np.int64)
    for i, sp in enumerate(spectra(params, threads)):
        if (sp.n_real - params.n) % 2:
            raise NumericError(f"parity violated at draw {i}")
        nr[i] = sp.n_real
    return _pkn_from_counts(params, nr)


def empirical_density(params, real_edges, complex_edges=None, threads=1):
    """Histogram densities of real and upper-half-plane complex eigenvalues.

    The real histogram is normalised to integrate to the mean number of
    real eigenvalues; the 2-D histogram of the upper-half representatives
    integrates to the mean number of complex-conjugate pairs (the
    normalisation of the one-point complex density).
    """
    real_edges = np.asarray(real_edges, dtype=float)
    if real_edges.ndim != 1 or real_edges.size < 2 or np.any(np.diff(real_edges) <= 0):
        raise DomainError("real bin edges must be strictly increasing")
    draws = params.draws
    rh = np.zeros(real_edges.size - 1)
    rh2 = np.zeros_like(rh)
    ch = None
    if complex_edges is not None:
        xe, ye = (np.asarray(e, dtype=float) for e in complex_edges)
        ch = np.zeros((xe.size - 1, ye.size - 1))
    nr = np.empty(draws, dtype=np.int64)
    for i, sp in enumerate(spectra(params, threads)):
        nr[i] = sp.n_real
        h = np.histogram(sp.real, bins=real_edges)[0]
        rh += h
        rh2 += h * h
        if ch is not None and sp.n_pairs:
            ch += np.histogram2d(sp.complex.real, sp.complex.imag, bins=(xe, ye))[0]
    stats = _pkn_from_counts(params, nr)
    width = np.diff(real_edges)
    mean_h = rh / draws
    var_h = np.maximum(rh2 / draws - mean_h ** 2, 0.0)
    stats.real_edges = real_edges
    stats.real_density = mean_h / width
    stats.real_density_se = np.sqrt(var_h / draws) / width
    if ch is not None:
        area = np.outer(np.diff(xe), np.diff(ye))
        stats.complex_edges = (xe, ye)
        stats.complex_density = ch / (draws * area)
    return stats


def raw_rows(params, threads=1):
    """Rows ``(draw_index, kind, x, y)`` for every eigenvalue of every draw."""
    for i, sp in enumerate(spectra(params, threads)):
        for v in sp.real:
            yield i, "real", float(v), 0.0
        for v in sp.complex:
            yield i, "complex", float(v.real), float(v.imag)
