"""Command-line front end: ``saradon <subcommand> ...``."""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
import tempfile

import numpy as np

from . import experiment as ex
from .errors import SARadonError
from .projection import (
    LatticeRegion,
    check_injectivity,
    compute_region,
    design_projection,
)
from .radon import ProjectionVector, RadonProfile, radon_box_analytic, radon_box_closedform_n1
from .recon import (
    CoefficientGrid,
    add_noise,
    build_system,
    error_metric,
    sample_radon,
    solve_direct,
    synthesize,
    tikhonov_solve,
)
from .splines import BoxSplineGenerator

SEED_ENV = "SA_RADON_SEED"


class UsageError(SARadonError):
    pass


@contextlib.contextmanager
def atomic_output(path, newline=""):
    """Write to a temporary sibling file, move it into place on success."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".saradon-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline=newline) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _fmt(v):
    return repr(float(v))


def _seed(explicit, fallback):
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    return fallback


def _lattice(args):
    region = LatticeRegion(tuple(args.lattice))
    if region.empty:
        raise UsageError(f"lattice {args.lattice} is empty")
    return region


def _read_coeffs(path, region):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    lookup = {(int(r["k1"]), int(r["k2"])): float(r["c"]) for r in rows}
    vals = [lookup.get((int(k1), int(k2)), 0.0) for k1, k2 in region.points]
    return CoefficientGrid(region, np.array(vals))


def _write_coeffs(fh, region, values):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["k1", "k2", "c"])
    for (k1, k2), c in zip(region.points, values):
        w.writerow([int(k1), int(k2), _fmt(c)])


# ---------------------------------------------------------------------------


def cmd_profile(args):
    if not args.step > 0:
        raise UsageError("--step must be positive")
    if args.to < args.from_:
        raise UsageError("--to must not be smaller than --from")
    count = int(round((args.to - args.from_) / args.step)) + 1
    t = args.from_ + args.step * np.arange(count)
    if args.closed_form:
        if (args.n1, args.n2) != (1, 1):
            raise UsageError("--closed-form requires n1 = n2 = 1")
        vals = radon_box_closedform_n1(args.theta, t, verbatim=args.verbatim)
    else:
        gen = BoxSplineGenerator(args.n1, args.n2)
        vals = radon_box_analytic(gen, ProjectionVector.from_angle(args.theta), t)
    with atomic_output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "value"])
        for a, b in zip(t, vals):
            w.writerow([_fmt(a), _fmt(b)])
    return 0


def cmd_design(args):
    gen_support = args.supp if args.supp else BoxSplineGenerator(args.n1, args.n2).support
    region = compute_region(args.region, gen_support)
    proj = design_projection(region)
    cert = check_injectivity(proj, region)
    out = {
        "E": list(args.region),
        "generator_support": list(gen_support),
        "region": {"bounds": list(region.bounds), "count": len(region)},
        "projection": {
            "ptilde": list(proj.integer_lift),
            "gamma": proj.gamma,
            "p": list(proj.p),
            "theta": proj.theta,
        },
        "certificate": cert.to_dict(),
    }
    with atomic_output(args.out) as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_gram(args):
    gen = BoxSplineGenerator(args.n1, args.n2)
    region = _lattice(args)
    profile = RadonProfile(gen, ProjectionVector.from_angle(args.theta))
    system = build_system(profile, region)
    with atomic_output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        n = system.size
        w.writerow(["k1", "k2", "node"] + [f"a{j}" for j in range(n)])
        for (k1, k2), node, row in zip(region.points, system.nodes, system.matrix):
            w.writerow([int(k1), int(k2), _fmt(node)] + [_fmt(v) for v in row])
    print(
        json.dumps(
            {"condition": system.condition_estimate, "min_eigenvalue": system.min_eigenvalue}
        )
    )
    return 0


def cmd_simulate(args):
    gen = BoxSplineGenerator(args.n1, args.n2)
    region = _lattice(args)
    proj = ProjectionVector.from_angle(args.theta)
    seed = _seed(args.seed, 0)
    if args.coeffs:
        truth = _read_coeffs(args.coeffs, region)
    else:
        truth = CoefficientGrid.random(region, seed)
    nodes = np.asarray(region.points, float) @ np.array(proj.p)
    clean = sample_radon(truth, gen, proj, nodes)
    noisy = clean if args.snr is None else add_noise(clean, args.snr, seed=seed + 1)
    with atomic_output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k1", "k2", "node", "clean", "noisy"])
        for (k1, k2), t, a, b in zip(region.points, nodes, clean, noisy):
            w.writerow([int(k1), int(k2), _fmt(t), _fmt(a), _fmt(b)])
    if args.coeffs_out:
        with atomic_output(args.coeffs_out) as fh:
            _write_coeffs(fh, region, truth.values)
    return 0


def cmd_reconstruct(args):
    gen = BoxSplineGenerator(args.n1, args.n2)
    region = _lattice(args)
    proj = ProjectionVector.from_angle(args.theta)
    with open(args.samples, newline="") as fh:
        rows = list(csv.DictReader(fh))
    col = args.column
    if len(rows) != len(region):
        raise UsageError(f"{len(rows)} samples for {len(region)} lattice points")
    if rows and col not in rows[0]:
        raise UsageError(f"samples file has no column {col!r}")
    y = np.array([float(r[col]) for r in rows])
    system = build_system(RadonProfile(gen, proj), region, y)
    values = solve_direct(system) if args.alpha == 0 else tikhonov_solve(system, args.alpha)
    report = {"condition": system.condition_estimate, "min_eigenvalue": system.min_eigenvalue}
    if args.truth:
        truth = _read_coeffs(args.truth, region)
        report["error"] = error_metric(
            synthesize(CoefficientGrid(region, values), gen), synthesize(truth, gen)
        )
    with atomic_output(args.out) as fh:
        _write_coeffs(fh, region, values)
    print(json.dumps(report))
    return 0


def cmd_table1(args):
    config = ex.load_config(args.config) if args.config else ex.ExperimentConfig()
    config.seed = _seed(args.seed, config.seed)
    if args.trials is not None:
        config.trials = args.trials
    config.validate()
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    result = ex.run_table1(config, jobs=args.jobs)
    with atomic_output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ex.CSV_COLUMNS)
        for r in result.records:
            w.writerow([_fmt(getattr(r, c)) for c in ex.CSV_COLUMNS])
    if args.json_out:
        with atomic_output(args.json_out) as fh:
            json.dump(result.to_dict(), fh, indent=2)
            fh.write("\n")
    return 0


def cmd_sweep(args):
    gen = BoxSplineGenerator(args.n1, args.n2)
    region = _lattice(args)
    rows = ex.run_angle_sweep(gen, region, args.count, _seed(args.seed, 0), args.theta or ())
    with atomic_output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta", "injective", "positive_definite", "min_eigenvalue", "condition", "min_node_gap"])
        for r in rows:
            w.writerow(
                [
                    _fmt(r.theta),
                    int(r.injective),
                    int(r.positive_definite),
                    _fmt(r.min_eigenvalue),
                    _fmt(r.condition),
                    _fmt(r.min_node_gap),
                ]
            )
    return 0


# ---------------------------------------------------------------------------


def _add_orders(p):
    p.add_argument("--n1", type=int, default=1)
    p.add_argument("--n2", type=int, default=1)


def _add_lattice(p):
    p.add_argument(
        "--lattice", type=int, nargs=4, default=[0, 4, 0, 4],
        metavar=("K1LO", "K1HI", "K2LO", "K2HI"),
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="saradon", description="Single-angle Radon sampling in box-spline spaces."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="sample the projected generator to CSV")
    _add_orders(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--from", dest="from_", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--closed-form", action="store_true", help="use the n1=n2=1 closed form")
    p.add_argument("--verbatim", action="store_true", help="closed form exactly as published")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("design", help="design an integer projection for a support box")
    _add_orders(p)
    p.add_argument("--region", type=float, nargs=4, required=True, metavar=("A1", "B1", "A2", "B2"))
    p.add_argument("--supp", type=float, nargs=4, metavar=("N1", "M1", "N2", "M2"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("gram", help="export the Gram matrix at an angle")
    _add_orders(p)
    _add_lattice(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("simulate", help="synthesize coefficients and Radon samples")
    _add_orders(p)
    _add_lattice(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--coeffs", help="coefficient CSV (k1,k2,c); random if omitted")
    p.add_argument("--coeffs-out")
    p.add_argument("--snr", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", help="recover coefficients from samples")
    _add_orders(p)
    _add_lattice(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--column", default="noisy")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--truth")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("table1", help="error-vs-SNR Monte-Carlo sweep")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--json-out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sweep", help="certify injectivity and PD over random angles")
    _add_orders(p)
    _add_lattice(p)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--theta", type=float, action="append", help="extra angle (repeatable)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SARadonError, OSError) as exc:
        print(f"saradon {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
