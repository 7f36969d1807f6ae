"""Cross-validation suite: each check compares a computed quantity with an
independent reference and reports ``{check, expected, actual, tolerance, pass}``.

Suites are registered by name; ``scale`` multiplies every tolerance, so
``scale=0`` turns the suite into a fault-injection run that must fail.
"""

import itertools
import math

import numpy as np

from . import asymptotics as asy
from . import exactprob as ep
from . import kernels as K
from . import sampler as smp
from .pfaff import det_poly_in_zeta, det_scaled, pfaffian
from .skewop import SkewOPFamily, r_norm, skew_gram, verify_m1
from .specfun import panel_rule, truncation_radius

__all__ = ["SUITES", "run", "all_passed", "count_sum", "weak_errors", "edge_error"]


def _rec(check, expected, actual, tol, ok):
    return {"check": check, "expected": _num(expected), "actual": _num(actual),
            "tolerance": _num(tol), "pass": bool(ok)}


def _num(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


# -- skew-orthogonality -----------------------------------------------------

def suite_skewop(scale=1.0):
    out = []
    for tau in (0.0, 0.25, 0.5, 0.9):
        fam = SkewOPFamily(tau, 12)
        g = skew_gram([fam.coeffs(n) for n in range(12)], tau)
        r = np.array([r_norm(fam, j).to_float() for j in range(6)])
        r_max = r.max()
        mask = np.ones_like(g, dtype=bool)
        for j in range(6):
            mask[2 * j, 2 * j + 1] = mask[2 * j + 1, 2 * j] = False
        off = float(np.max(np.abs(g[mask])) / r_max)
        tol = 1e-8 * scale
        out.append(_rec(f"skew-orthogonality tau={tau}", 0.0, off, tol, off <= tol))
        norm = float(np.max(np.abs(np.array([g[2 * j, 2 * j + 1] for j in range(6)]) / r - 1)))
        out.append(_rec(f"normalisation r_n tau={tau}", 0.0, norm, tol, norm <= tol))
    return out


def suite_m1(scale=1.0):
    out = []
    for tau in (0.0, 0.5):
        worst = 0.0
        for j, k in itertools.product(range(5), repeat=2):
            worst = max(worst, verify_m1(j, k, tau)[2])
        tol = 1e-7 * scale
        out.append(_rec(f"<C_2j+1, C_2k> table tau={tau}", 0.0, worst, tol, worst <= tol))
    return out


# -- exact probabilities ----------------------------------------------------

def suite_exactprob(scale=1.0):
    out = []
    p22 = ep.pkn_table(2, 0.0).p[-1]
    tol = 1e-12 * scale
    out.append(_rec("p_{2,2}(tau=0)", 2 ** -0.5, p22, tol, abs(p22 - 2 ** -0.5) <= tol))
    for n, tau in itertools.product((2, 4, 6, 8), (0.0, 0.3, 0.7)):
        got = ep.pkn_table(n, tau).p[-1]
        ref = ep.p_all_real(n, tau)
        err = abs(got / ref - 1)
        out.append(_rec(f"p_NN N={n} tau={tau}", ref, got, 1e-10 * scale, err <= 1e-10 * scale))
    for n, tau in itertools.product(range(2, 13, 2), (0.0, 0.3, 0.7)):
        tot = ep.pkn_table(n, tau).total
        out.append(_rec(f"sum p_k N={n} tau={tau}", 1.0, tot, 1e-10 * scale,
                        abs(tot - 1) <= 1e-10 * scale))
    return out


def suite_montecarlo(scale=1.0, draws=100_000, threads=1):
    out = []
    for i, (n, tau) in enumerate(itertools.product((2, 4, 6), (0.0, 0.5))):
        params = smp.EnsembleParams(n, tau, seed=20_000 + i, draws=draws)
        st = smp.empirical_pkn(params, threads)
        exact = ep.pkn_table(n, tau)
        se = np.maximum(st.stderr, 1.0 / draws)
        z = float(np.max(np.abs(st.p_hat - exact.p) / se))
        out.append(_rec(f"MC p_k N={n} tau={tau} (max |z|)", 0.0, z, 3.0 * scale, z <= 3.0 * scale))
        zm = abs(st.mean_real - exact.mean) / st.mean_real_se
        out.append(_rec(f"MC mean real count N={n} tau={tau} (|z|)", exact.mean, st.mean_real,
                        3.0 * scale, zm <= 3.0 * scale))
    return out


# -- kernels and limits -----------------------------------------------------

def _integrate_1d(f, lo, hi, tol, order=20, max_panels=512):
    panels, old = 4, None
    while True:
        x, w = panel_rule(lo, hi, panels, order)
        val = float(np.sum(w * f(x)))
        if old is not None and abs(val - old) <= tol * max(1.0, abs(val)):
            return val
        if panels >= max_panels:
            return val
        old, panels = val, 2 * panels


def count_sum(ctx, tol=1e-12):
    """``int rho_r + 2 iint rho_c`` over the plane by panel quadrature."""
    n, tau = ctx.n, ctx.tau
    L = truncation_radius(math.sqrt(1.0 + tau), 1e-18, 2 * n) + math.sqrt(n)
    real = _integrate_1d(lambda x: K.rho_r1_profile(ctx, x), -L, L, tol)
    Ly = truncation_radius(math.sqrt((1.0 - tau) / 2.0), 1e-18, 2 * n) + 1.0
    panels, old = 8, None
    while True:
        x, wx = panel_rule(-L, L, panels, 20)
        y, wy = panel_rule(0.0, Ly, panels, 20)
        X, Y = np.meshgrid(x, y, indexing="ij")
        cplx = float(wx @ K.rho_c1(ctx, X, Y) @ wy)
        if old is not None and abs(cplx - old) <= tol * max(1.0, cplx):
            break
        if panels >= 128:
            break
        old, panels = cplx, 2 * panels
    return real + 2.0 * cplx, real, cplx


def suite_sumrule(scale=1.0):
    out = []
    for n, tau in itertools.product((2, 4, 6), (0.0, 0.5)):
        total, _, _ = count_sum(K.KernelContext(n, tau))
        out.append(_rec(f"count sum rule N={n} tau={tau}", n, total, 1e-6 * scale,
                        abs(total - n) <= 1e-6 * scale))
    return out


def suite_bulk(scale=1.0):
    out = []
    for tau in (0.0, 0.5):
        lim = asy.bulk_real_density(tau)
        errs = []
        for n in (50, 100, 200):
            val = float(K.rho_r1_profile(K.KernelContext(n, tau), [0.0])[0])
            errs.append(abs(val / lim - 1))
        out.append(_rec(f"bulk density N=200 tau={tau} (rel err)", lim, val, 5e-3 * scale,
                        errs[-1] <= 5e-3 * scale))
        slack = 1e-12 * scale
        mono = all(b <= a + slack for a, b in zip(errs, errs[1:]))
        out.append(_rec(f"bulk density trend N=50,100,200 tau={tau}", "non-increasing",
                        errs, slack, mono))
    return out


def edge_error(n, tau, npts=121):
    """Sup-norm gap between the finite-N edge profile and its limit on [-3, 3]."""
    X = np.linspace(-3.0, 3.0, npts)
    fin = K.rho_r1_profile(K.KernelContext(n, tau), asy.EdgeFrame(n, tau).to_x(X))
    lim = asy.edge_real_density(X, tau)
    return float(np.max(np.abs(fin - lim))), float(np.max(lim))


def suite_edge(scale=1.0):
    out = []
    for tau in (0.0, 0.5):
        gap, top = edge_error(200, tau)
        rel = gap / top
        out.append(_rec(f"edge profile N=200 tau={tau} (sup gap / sup limit)", 0.0, rel,
                        0.03 * scale, rel <= 0.03 * scale))
    X = np.linspace(-3.0, 3.0, 101)
    d = float(np.max(np.abs(asy.edge_real_density(X, 0.0) - asy.edge_real_density_tau0(X))))
    out.append(_rec("edge formula at tau=0 equals the tau=0 profile", 0.0, d, 1e-14 * scale,
                    d <= 1e-14 * scale))
    return out


def suite_universality(scale=1.0):
    out = []
    rng = np.random.default_rng(5)
    X = np.linspace(-4.0, 4.0, 100)
    x, y = rng.uniform(-3, 3, 100), rng.uniform(-3, 3, 100)
    w = rng.uniform(-3, 3, 100) + 1j * rng.uniform(0, 3, 100)
    z = rng.uniform(-3, 3, 100) + 1j * rng.uniform(0, 3, 100)
    tol = 1e-12 * scale
    for tau in (0.25, 0.5, 0.9):
        s = math.sqrt(1.0 - tau * tau)
        pairs = [
            ("edge density", asy.edge_real_density(X, tau), asy.edge_real_density(X / s, 0.0) / s),
            ("bulk S^r limit", asy.bulk_sr_limit(x, y, tau), asy.bulk_sr_limit(x / s, y / s, 0.0) / s),
            ("bulk S^c limit", asy.bulk_sc_limit(w, z, tau), asy.bulk_sc_limit(w / s, z / s, 0.0) / s ** 2),
        ]
        for name, a, b in pairs:
            err = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))
            out.append(_rec(f"rescaling {name} tau={tau}", 0.0, err, tol, err <= tol))
    return out


def weak_errors(n, alpha, precision="high", weighted=False):
    """Gaps between finite-N scaled kernels at tau = 1 - alpha^2/N and their limits.

    Returns ``(real_gap, real_scale, complex_gap, complex_scale)`` where the
    gaps are sup-norms over point pairs with ``|x - y| <= 3`` and the scales
    are the sup-norms of the limits there. ``weighted=True`` compares the
    complex kernel with the point weights ``exp(-z^2/2(1+tau))`` folded in;
    those weights tend to 1 on the scaled points but shift the finite-N value
    at order 1/N.
    """
    tau = 1.0 - alpha * alpha / n
    ctx = K.KernelContext(n, tau, precision=precision)
    h = math.pi / math.sqrt(n)
    d = np.linspace(-3.0, 3.0, 61)
    xs, ys = 0.5 * d, -0.5 * d
    fin = h * np.asarray(K.s_r(ctx, h * xs, h * ys))
    lim = asy.weak_sr(xs, ys, alpha)
    g = np.linspace(-1.5, 1.5, 5)
    w = (g[:, None] + 1j * np.array([0.2, 0.8])[None, :]).ravel()
    W, Z = np.meshgrid(w, w, indexing="ij")
    keep = np.abs(W - Z) <= 3.0
    W, Z = W[keep], Z[keep]
    kern = K.s_c_hat if weighted else K.s_c
    finc = h * h * np.asarray(kern(ctx, h * W, h * Z))
    limc = asy.weak_sc(W, Z, alpha)
    return (float(np.max(np.abs(fin - lim))), float(np.max(np.abs(lim))),
            float(np.max(np.abs(finc - limc))), float(np.max(np.abs(limc))))


def suite_weak(scale=1.0):
    # 2% at N=400, or else gaps strictly decreasing over N = 100, 200, 400
    out = []
    tol = 0.02 * scale
    for alpha in (0.5, 1.0, 2.0):
        runs = {n: weak_errors(n, alpha) for n in (100, 200, 400)}
        for name, gi, si in (("S^r", 0, 1), ("S^c", 2, 3)):
            rel = [runs[n][gi] / runs[n][si] for n in (100, 200, 400)]
            if rel[-1] <= tol:
                out.append(_rec(f"weak limit {name} N=400 alpha={alpha} (gap / scale)", 0.0,
                                rel[-1], tol, True))
            else:
                mono = rel[0] > rel[1] > rel[2]
                out.append(_rec(f"weak limit {name} alpha={alpha}: above {tol:g} at N=400, "
                                "gap / scale at N=100,200,400 must decrease", "decreasing",
                                rel, tol, mono))
        gw = weak_errors(400, alpha, weighted=True)
        out.append(_rec(f"weak limit weighted S^c N=400 alpha={alpha} (gap / scale)", 0.0,
                        gw[2] / gw[3], tol, gw[2] / gw[3] <= tol))
    return out


def suite_ellipse(scale=1.0):
    params = smp.EnsembleParams(64, 0.5, seed=31_337, draws=200)
    A, B = asy.support_ellipse(64, 0.5)
    inside = total = 0
    for sp in smp.spectra(params):
        ev = sp.all_eigenvalues()
        inside += int(np.count_nonzero((ev.real / (1.1 * A)) ** 2 + (ev.imag / (1.1 * B)) ** 2 <= 1.0))
        total += ev.size
    frac = inside / total
    need = 1.0 - 0.01 * scale
    return [_rec("fraction inside 1.1x ellipse N=64 tau=0.5", ">= 0.99", frac, 0.01 * scale,
                 frac >= need)]


def _det3_coeffs(a, b):
    # det(zeta A + B) for 3x3 by multilinearity in the columns
    def det_cols(cols):
        return float(np.linalg.det(np.column_stack(cols)))
    out = []
    for deg in range(4):
        total = 0.0
        for pick in itertools.combinations(range(3), deg):
            cols = [a[:, j] if j in pick else b[:, j] for j in range(3)]
            total += det_cols(cols)
        out.append(total)
    return out


def suite_pfaff(scale=1.0):
    out = []
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        n = 2 * int(rng.integers(1, 7))
        g = rng.normal(size=(n, n))
        a = g - g.T
        pf = pfaffian(a).to_float()
        det = det_scaled(a).to_float()
        worst = max(worst, abs(pf * pf - det) / abs(det))
    out.append(_rec("Pf(A)^2 = det(A), 100 random cases", 0.0, worst, 1e-9 * scale,
                    worst <= 1e-9 * scale))
    worst = 0.0
    for _ in range(20):
        a, b = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
        got = [c.to_float() for c in det_poly_in_zeta(a, b)]
        ref = _det3_coeffs(a, b)
        worst = max(worst, max(abs(g - r) / max(1.0, abs(r)) for g, r in zip(got, ref)))
    out.append(_rec("det(zeta A + B) coefficients vs 3x3 expansion", 0.0, worst, 1e-9 * scale,
                    worst <= 1e-9 * scale))
    return out


SUITES = {
    "skewop": suite_skewop,
    "m1": suite_m1,
    "exactprob": suite_exactprob,
    "montecarlo": suite_montecarlo,
    "sumrule": suite_sumrule,
    "bulk": suite_bulk,
    "edge": suite_edge,
    "universality": suite_universality,
    "weak": suite_weak,
    "ellipse": suite_ellipse,
    "pfaff": suite_pfaff,
}


def run(suites=None, scale=1.0):
    """Run the named suites (all by default) and return the list of records."""
    names = list(SUITES) if not suites else list(suites)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    records = []
    for name in names:
        for r in SUITES[name](scale):
            r["suite"] = name
            records.append(r)
    return records


def all_passed(records):
    return all(r["pass"] for r in records)
