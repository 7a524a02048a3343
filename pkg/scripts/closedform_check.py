"""Branch-by-branch check of the n1 = n2 = 1 closed-form projected profile.

Compares both the published form and the corrected one against the adaptive
line integral, printing the worst error on each branch.

Usage: python scripts/closedform_check.py [--theta 1.2208] [--samples 50]
"""

import argparse

from saradon.radon import closedform_diagnostics


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=1.2208)
    ap.add_argument("--samples", type=int, default=50)
    args = ap.parse_args()

    rows = closedform_diagnostics(args.theta, samples_per_branch=args.samples)
    print(f"{'branch':<20} {'interval':<22} {'published':>10} {'corrected':>10}")
    for row in rows:
        lo, hi = row["interval"]
        print(
            f"{row['branch']:<20} [{lo:+.4f}, {hi:+.4f}]  "
            f"{row['printed_max_error']:10.2e} {row['corrected_max_error']:10.2e}"
        )


if __name__ == "__main__":
    main()
