"""Command-line front end: tables, density and kernel grids, Monte Carlo runs,
and the validation suite. Output is CSV (default) or JSON.

Exit codes: 0 ok, 1 validation failure, 2 domain error, 3 precision or
accuracy error, 4 numerical failure in the eigensolver.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import exactprob as ep
from . import kernels as K
from . import sampler as smp
from . import validation
from .errors import AccuracyError, DomainError, GinibreError, NumericError, PrecisionError
from .io import write_table

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_PRECISION, EXIT_NUMERIC = 0, 1, 2, 3, 4


def parse_grid(text):
    """``"min:max:step"`` with inclusive endpoints; ``min == max`` gives one point."""
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise DomainError(f"grid must look like min:max:step, got {text!r}") from None
    if lo == hi:
        return np.array([lo])
    if not step > 0 or hi < lo:
        raise DomainError("grid needs min <= max and a positive step")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _threads(arg):
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("GINIBRE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"GINIBRE_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _config(args, **extra):
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg.update(extra)
    return cfg


def cmd_pkn(args):
    table = ep.pkn_table(args.n, args.tau, precision=args.precision)
    cum = np.cumsum(table.p)
    rows = [(int(k), float(p), float(c)) for k, p, c in zip(table.k, table.p, cum)]
    cfg = _config(args, precision_used=table.precision, sum_residual=table.total - 1.0)
    write_table(["k", "p_k", "cumulative"], rows, cfg, args.out, args.format)
    return EXIT_OK


def cmd_density(args):
    ctx = K.KernelContext(args.n, args.tau, precision=_kernel_precision(args))
    x = parse_grid(args.grid)
    rho = K.rho_r1_profile(ctx, x)
    write_table(["x", "rho_r"], list(zip(x.tolist(), rho.tolist())), _config(args),
                args.out, args.format)
    return EXIT_OK


def cmd_edge(args):
    X = parse_grid(args.grid)
    lim = np.atleast_1d(asy.edge_real_density(X, args.tau))
    cols, data = ["X", "limit"], [X, lim]
    if args.finite_n:
        ctx = K.KernelContext(args.finite_n, args.tau, precision=_kernel_precision(args))
        frame = asy.EdgeFrame(args.finite_n, args.tau)
        cols.append("finite_n")
        data.append(K.rho_r1_profile(ctx, frame.to_x(X)))
    write_table(cols, list(zip(*(d.tolist() for d in data))), _config(args),
                args.out, args.format)
    return EXIT_OK


def cmd_kernel(args):
    ctx = K.KernelContext(args.n, args.tau, precision=_kernel_precision(args))
    x = parse_grid(args.grid)
    if args.kind == "real":
        y = np.full_like(x, args.y)
        rows = zip(x.tolist(), y.tolist(), np.atleast_1d(K.s_r(ctx, x, y)).tolist(),
                   np.atleast_1d(K.d_r(ctx, x, y)).tolist())
        cols = ["x", "y", "S_r", "D_r"]
    else:
        if not args.y > K.Y_MIN:
            raise DomainError("complex kernel needs --y > 0")
        z = x + 1j * args.y
        s = np.atleast_1d(K.s_c_hat(ctx, z.conj(), z))
        rho = np.atleast_1d(K.rho_c1(ctx, x, np.full_like(x, args.y)))
        rows = zip(x.tolist(), [args.y] * x.size, s.imag.tolist(), rho.tolist())
        cols = ["x", "y", "im_S_c_hat_conj", "rho_c"]
    write_table(cols, list(rows), _config(args), args.out, args.format)
    return EXIT_OK


def cmd_weak(args):
    x = parse_grid(args.grid)
    n = args.finite_n
    if n:
        tau = 1.0 - args.alpha ** 2 / n
        prec = "high" if args.precision == "auto" else args.precision
        ctx = K.KernelContext(n, tau, precision=prec)
        h = math.pi / math.sqrt(n)
    if args.kind == "real":
        # S^r at separation x, in units of pi / sqrt(N)
        cols, data = ["x_minus_y", "limit"], [x, np.atleast_1d(asy.weak_sr(x, 0.0, args.alpha))]
        if n:
            cols.append("finite_n")
            data.append(h * np.atleast_1d(K.s_r(ctx, 0.5 * h * x, -0.5 * h * x)))
    else:
        # one-point complex density at x + iy: 2i erfc(pi y / alpha) S^c(conj z, z)
        if not args.y > K.Y_MIN:
            raise DomainError("complex weak limit needs --y > 0")
        z = x + 1j * args.y
        weight = asy.weak_weight(args.y, args.alpha)
        lim = (2j * weight * np.atleast_1d(asy.weak_sc(z.conj(), z, args.alpha))).real
        cols, data = ["x", "y", "limit"], [x, np.full_like(x, args.y), lim]
        if n:
            cols.append("finite_n")
            data.append(h * h * np.atleast_1d(K.rho_c1(ctx, h * x, np.full_like(x, h * args.y))))
    write_table(cols, list(zip(*(v.tolist() for v in data))), _config(args),
                args.out, args.format)
    return EXIT_OK


def cmd_sample(args):
    params = smp.EnsembleParams(args.n, args.tau, b=args.b, seed=args.seed, draws=args.draws)
    threads = _threads(args.threads)
    if args.raw:
        with open(args.raw, "w") as fh:
            fh.write(f"# ginibre-interp v{__version__}\n")
            fh.write("# config: " + json.dumps(_config(args), sort_keys=True) + "\n")
            fh.write("draw_index,kind,x,y\n")
            for i, kind, x, y in smp.raw_rows(params, threads):
                fh.write(f"{i},{kind},{x!r},{y!r}\n")
    st = smp.empirical_pkn(params, threads)
    exact = ep.pkn_table(args.n, args.tau) if args.n <= 20 else None
    rows = []
    for j, k in enumerate(st.k):
        row = [int(k), int(st.counts[j]), float(st.p_hat[j]), float(st.stderr[j]),
               (int(k) - args.n) % 2 == 0]
        if exact is not None:
            p = float(exact.p[j])
            se = max(float(st.stderr[j]), 1.0 / args.draws)
            row += [p, (float(st.p_hat[j]) - p) / se]
        rows.append(row)
    cols = ["k", "count", "p_hat", "stderr", "parity_ok"]
    if exact is not None:
        cols += ["p_exact", "z"]
    cfg = _config(args, threads=threads, mean_real=st.mean_real, mean_real_se=st.mean_real_se)
    write_table(cols, rows, cfg, args.out, args.format)
    return EXIT_OK


def cmd_validate(args):
    records = validation.run(args.suite or None, scale=args.tolerance_scale)
    ok = validation.all_passed(records)
    doc = {"version": f"ginibre-interp v{__version__}", "passed": ok, "checks": records}
    text = json.dumps(doc, indent=2) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def _kernel_precision(args):
    return "double" if args.precision in ("auto", None) else args.precision


def build_parser():
    p = argparse.ArgumentParser(
        prog="ginibre-interp",
        description="Eigenvalue statistics of real random matrices between Ginibre and GOE")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=True, tau=True, grid=False):
        if n:
            sp.add_argument("--n", type=int, required=True, help="matrix size N (even)")
        if tau:
            sp.add_argument("--tau", type=float, default=0.0, help="asymmetry parameter in [0, 1)")
        if grid:
            sp.add_argument("--grid", required=True, help="min:max:step, inclusive")
        sp.add_argument("--precision", choices=["auto", "double", "high"], default="auto")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("pkn", help="exact probabilities of k real eigenvalues")
    common(sp)
    sp.set_defaults(func=cmd_pkn)

    sp = sub.add_parser("density", help="finite-N density of real eigenvalues")
    common(sp, grid=True)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("edge", help="limiting edge profile of the real density")
    common(sp, n=False, grid=True)
    sp.add_argument("--finite-n", type=int, default=None,
                    help="also evaluate the finite-N density at this N")
    sp.set_defaults(func=cmd_edge)

    sp = sub.add_parser("kernel", help="finite-N correlation kernels on a line")
    common(sp, grid=True)
    sp.add_argument("--kind", choices=["real", "complex"], default="real")
    sp.add_argument("--y", type=float, default=0.0,
                    help="second real point, or imaginary part for --kind complex")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("weak", help="weakly non-symmetric limits (tau = 1 - alpha^2/N)")
    common(sp, n=False, tau=False, grid=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--kind", choices=["real", "complex"], default="real",
                    help="real: S^r against x - y; complex: density along Im z = --y")
    sp.add_argument("--y", type=float, default=0.5, help="imaginary part for --kind complex")
    sp.add_argument("--finite-n", type=int, default=None,
                    help="compare with N at tau = 1 - alpha^2/N")
    sp.set_defaults(func=cmd_weak)

    sp = sub.add_parser("sample", help="Monte Carlo estimate of p_k")
    common(sp)
    sp.add_argument("--b", type=float, default=1.0, help="overall scale parameter b > 0")
    sp.add_argument("--draws", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: $GINIBRE_THREADS or all cores)")
    sp.add_argument("--raw", default=None, help="also write every eigenvalue to this CSV")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("validate", help="run the cross-validation suite")
    sp.add_argument("--suite", action="append", choices=sorted(validation.SUITES),
                    help="restrict to a suite (repeatable)")
    sp.add_argument("--tolerance-scale", type=float, default=1.0,
                    help="multiply every tolerance; 0 injects a failure")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_validate)
    return p


def _join_grid(argv):
    # "--grid -1:1:0.5" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for a in it:
        if a == "--grid":
            out.append("--grid=" + next(it, ""))
        else:
            out.append(a)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_grid(argv))
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (PrecisionError, AccuracyError) as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except NumericError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GinibreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
