"""Weakly non-symmetric crossover: tau = 1 - alpha^2/N, lengths in units of pi/sqrt(N).

Small alpha recovers a unit-density GOE-like real axis; large alpha pushes
eigenvalues off it. The finite-N kernel approaches the limit integral as N
grows.

Run:  python3 demos/weak_crossover.py
"""

import math

import numpy as np

from ginibre_interp import KernelContext, weak_sr
from ginibre_interp.asymptotics import weak_weight
from ginibre_interp.kernels import s_r


def main():
    d = np.array([0.0, 0.5, 1.0, 2.0, 3.0])
    for alpha in (0.5, 1.0, 2.0):
        print(f"alpha={alpha}: real density limit {weak_sr(0.0, 0.0, alpha):.5f}, "
              f"complex weight at y=0.3: {weak_weight(0.3, alpha):.4f}")
        print(f"  {'x-y':>5} {'limit':>10}" + "".join(f" {'N=' + str(n):>10}" for n in (50, 200)))
        cols = []
        for n in (50, 200):
            ctx = KernelContext(n, 1 - alpha * alpha / n, precision="high")
            h = math.pi / math.sqrt(n)
            cols.append(h * np.asarray(s_r(ctx, 0.5 * h * d, -0.5 * h * d)))
        for i, x in enumerate(d):
            row = f"  {x:5.2f} {weak_sr(x, 0.0, alpha):10.6f}"
            row += "".join(f" {c[i]:10.6f}" for c in cols)
            print(row)


if __name__ == "__main__":
    main()
