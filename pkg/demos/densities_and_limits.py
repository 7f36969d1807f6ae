"""Finite-N real eigenvalue density against its bulk and edge limits.

For fixed tau the density is flat at 1/sqrt(2 pi (1 - tau^2)) inside the
support and falls off near (1+tau) sqrt(N). The edge gap shrinks like
N^{-1/2}, which is visible in the last table.

Run:  python3 demos/densities_and_limits.py [--tau 0.5]
"""

import argparse
import math

import numpy as np

from ginibre_interp import EdgeFrame, KernelContext, bulk_real_density, edge_real_density
from ginibre_interp.kernels import rho_r1_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tau", type=float, default=0.5)
    args = ap.parse_args()
    tau = args.tau

    print(f"bulk limit 1/sqrt(2 pi (1 - tau^2)) = {bulk_real_density(tau):.6f}")
    for n in (50, 100, 200, 400):
        v = rho_r1_profile(KernelContext(n, tau), [0.0])[0]
        print(f"  N={n:<4} rho(0) = {v:.6f}  rel gap {v / bulk_real_density(tau) - 1:+.2e}")

    n = 200
    frame = EdgeFrame(n, tau)
    X = np.linspace(-3, 3, 7)
    fin = rho_r1_profile(KernelContext(n, tau), frame.to_x(X))
    print(f"\nedge at (1+tau) sqrt(N) = {frame.edge:.4f}, N={n}")
    print(f"{'X':>6} {'finite N':>10} {'limit':>10}")
    for x, f, l in zip(X, fin, edge_real_density(X, tau)):
        print(f"{x:6.2f} {f:10.6f} {l:10.6f}")

    print("\nsup |finite - limit| on [-3, 3], scaled by sqrt(N):")
    Xs = np.linspace(-3, 3, 121)
    for n in (100, 400, 1600):
        fin = rho_r1_profile(KernelContext(n, tau), EdgeFrame(n, tau).to_x(Xs))
        gap = np.max(np.abs(fin - edge_real_density(Xs, tau)))
        print(f"  N={n:<5} gap {gap:.5f}   gap*sqrt(N) {gap * math.sqrt(n):.4f}")


if __name__ == "__main__":
    main()
