"""Injectivity and positive-definiteness certificates over random angles.

Usage: python scripts/angle_sweep.py [--count N] [--seed S] [--out sweep.csv]
"""

import argparse
import math

import numpy as np

from saradon.experiment import run_angle_sweep, write_sweep_csv
from saradon.projection import LatticeRegion
from saradon.splines import BoxSplineGenerator


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n1", type=int, default=1)
    ap.add_argument("--n2", type=int, default=1)
    ap.add_argument("--lattice", type=int, nargs=4, default=[0, 4, 0, 4])
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = run_angle_sweep(
        BoxSplineGenerator(args.n1, args.n2),
        LatticeRegion(tuple(args.lattice)),
        args.count,
        args.seed,
        extra_angles=[0.0, math.pi / 4, math.pi / 2],
    )
    certified = [r for r in rows if r.injective and r.positive_definite]
    print(f"{len(certified)}/{len(rows)} angles injective and PD")
    eig = np.array([r.min_eigenvalue for r in certified])
    cond = np.array([r.condition for r in certified])
    if certified:
        print(f"lambda_min: min {eig.min():.3e}, median {np.median(eig):.3e}")
        print(f"condition:  median {np.median(cond):.3e}, max {cond.max():.3e}")
    for r in rows:
        if not r.injective:
            print(f"theta = {r.theta:.6f}: not injective")
    if args.out:
        write_sweep_csv(rows, args.out)


if __name__ == "__main__":
    main()
