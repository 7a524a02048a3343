"""Monte-Carlo harness for the error-vs-SNR table and angle sweeps."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import ConfigError, DeterminabilityError, ParseError
from .projection import LatticeRegion, check_injectivity
from .radon import ProjectionVector, RadonProfile, radon_box_closedform_n1
from .recon import (
    CoefficientGrid,
    GramSystem,
    basis_matrices,
    build_system,
    error_metric,
    gram_matrix,
    noise_sigma,
    pd_certify,
    projected_nodes,
    sample_radon,
)
from .splines import BoxSplineGenerator

PAPER_SNRS = (30.0, 35.0, 40.0, 45.0, 50.0, 55.0)
PAPER_ALPHAS = (2e-3, 2.5e-4, 3.5e-5, 2e-6, 1.5e-7, 9.4e-8)
PAPER_ERRORS = (0.4255, 0.2471, 0.0924, 0.0480, 0.0290, 0.0087)
PAPER_THETA = 1.2208

CSV_COLUMNS = ("snr", "alpha", "mean_error", "std_error", "cond", "min_eig", "seconds")
GRAM_MODELS = ("exact", "printed-closed-form")


@dataclass
class ExperimentConfig:
    n1: int = 1
    n2: int = 1
    theta: float = PAPER_THETA
    region: tuple[int, int, int, int] = (0, 4, 0, 4)
    coefficients: list[float] | None = None
    coeff_seed: int = 0
    coeff_range: tuple[float, float] = (0.0, 1.0)
    snr_list: list[float] = field(default_factory=lambda: list(PAPER_SNRS))
    alpha_map: dict[float, float] = field(
        default_factory=lambda: dict(zip(PAPER_SNRS, PAPER_ALPHAS))
    )
    trials: int = 1000
    seed: int = 2020
    grid: tuple[float, float, int] = (-2.0, 0.1, 81)
    # "printed-closed-form" rebuilds the system from the published closed form
    # including its misprinted branch; diagnostic only
    gram_model: str = "exact"

    def __post_init__(self):
        self.region = tuple(int(v) for v in self.region)
        self.coeff_range = tuple(float(v) for v in self.coeff_range)
        self.grid = (float(self.grid[0]), float(self.grid[1]), int(self.grid[2]))
        self.snr_list = [float(s) for s in self.snr_list]
        self.alpha_map = {float(k): float(v) for k, v in self.alpha_map.items()}
        if self.coefficients is not None:
            self.coefficients = [float(c) for c in self.coefficients]

    def validate(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.snr_list:
            raise ConfigError("snr_list must be nonempty")
        missing = [s for s in self.snr_list if s not in self.alpha_map]
        if missing:
            raise ConfigError(f"alpha_map has no entry for SNR {missing}")
        if any(a < 0 for a in self.alpha_map.values()):
            raise ConfigError("alpha values must be nonnegative")
        if self.gram_model not in GRAM_MODELS:
            raise ConfigError(f"gram_model must be one of {GRAM_MODELS}")
        region = LatticeRegion(self.region)
        if region.empty:
            raise ConfigError(f"region {self.region} is empty")
        if self.coefficients is not None and len(self.coefficients) != len(region):
            raise ConfigError(
                f"{len(self.coefficients)} coefficients given for {len(region)} region points"
            )
        if self.grid[1] <= 0 or self.grid[2] < 1:
            raise ConfigError("grid step must be positive and count >= 1")
        return self

    def to_dict(self):
        d = asdict(self)
        d["region"] = list(self.region)
        d["coeff_range"] = list(self.coeff_range)
        d["grid"] = list(self.grid)
        d["alpha_map"] = {repr(k): v for k, v in self.alpha_map.items()}
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ParseError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ParseError(f"unknown config field(s): {unknown}")
        try:
            return cls(**d)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"invalid config value: {exc}") from exc

    def config_hash(self):
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    # derived objects
    @property
    def generator(self):
        return BoxSplineGenerator(self.n1, self.n2)

    @property
    def projection(self):
        return ProjectionVector.from_angle(self.theta)

    @property
    def lattice(self):
        return LatticeRegion(self.region)

    def grid_axes(self):
        start, step, count = self.grid
        xs = start + step * np.arange(count)
        return xs, xs.copy()

    def truth(self):
        region = self.lattice
        if self.coefficients is not None:
            return CoefficientGrid(region, np.array(self.coefficients))
        lo, hi = self.coeff_range
        return CoefficientGrid.random(region, self.coeff_seed, lo, hi)


@dataclass
class SNRRecord:
    snr: float
    alpha: float
    mean_error: float
    std_error: float
    cond: float
    min_eig: float
    seconds: float
    trial_error_mean: float = math.nan


@dataclass
class ExperimentResult:
    records: list[SNRRecord]
    config_hash: str
    seed: int
    truth: list[float] = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        try:
            recs = [SNRRecord(**r) for r in d["records"]]
            return cls(recs, d["config_hash"], int(d["seed"]), list(d.get("truth", [])))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed result: {exc}") from exc

    def table(self):
        return [(r.snr, r.alpha, r.mean_error) for r in self.records]


def trial_seed(master, snr_index, trial_index):
    return np.random.SeedSequence([int(master), int(snr_index), int(trial_index)])


def _system_for(config):
    gen, proj, region = config.generator, config.projection, config.lattice
    cert = check_injectivity(proj, region)
    if not cert.a1_injective:
        raise DeterminabilityError(
            f"theta={config.theta} maps lattice points {cert.collision} to the same node"
        )
    profile = RadonProfile(gen, proj)
    truth = config.truth()
    if config.gram_model == "exact":
        system = build_system(profile, region)
        y = sample_radon(truth, gen, proj, system.nodes)
    else:
        nodes = projected_nodes(proj, region)
        A = radon_box_closedform_n1(
            config.theta, nodes[:, None] - nodes[None, :], verbatim=True
        )
        system = GramSystem(nodes=nodes, matrix=A, points=region.points)
        y = A @ truth.values
    return system, truth, y


def _filter_factors(matrix, alpha):
    U, s, Vt = np.linalg.svd(matrix)
    return U, s / (alpha + s * s), Vt


def _trial_block(args):
    """Solve a contiguous block of trials; each trial uses its own seed and
    its own mat-vec products, so results do not depend on the block split."""
    y, sigma, U, filt, Vt, master, snr_index, start, stop = args
    out = np.empty((stop - start, y.size))
    for i, t in enumerate(range(start, stop)):
        rng = np.random.default_rng(trial_seed(master, snr_index, t))
        noisy = y + sigma * rng.standard_normal(y.size)
        out[i] = Vt.T @ (filt * (U.T @ noisy))
    return out


def _blocks(trials, jobs):
    edges = np.linspace(0, trials, max(1, min(jobs, trials)) + 1).astype(int)
    return list(zip(edges[:-1], edges[1:]))


def run_table1(config, jobs=1):
    """Error-vs-SNR sweep.

    For every SNR, ``trials`` noisy sample vectors are solved with Tikhonov
    regularisation, the recovered coefficient vectors are averaged, and the
    relative grid error of the resulting function is recorded. The spread of
    the per-trial errors is reported as ``std_error``.
    """
    config.validate()
    gen = config.generator
    system, truth, y = _system_for(config)
    cert = pd_certify(system)
    cond = float(np.linalg.cond(system.matrix))
    grid = config.grid_axes()
    B1, B2 = basis_matrices(config.lattice, gen, grid)
    f_ref = B1 @ truth.as_matrix() @ B2.T
    shape = config.lattice.shape

    records = []
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for si, snr in enumerate(config.snr_list):
            t0 = time.perf_counter()
            alpha = config.alpha_map[snr]
            U, filt, Vt = _filter_factors(system.matrix, alpha)
            sigma = noise_sigma(y, snr)
            tasks = [
                (y, sigma, U, filt, Vt, config.seed, si, a, b)
                for a, b in _blocks(config.trials, jobs)
            ]
            parts = list(pool.map(_trial_block, tasks)) if pool else [_trial_block(t) for t in tasks]
            coeffs = np.concatenate(parts, axis=0)
            f_avg = B1 @ coeffs.mean(axis=0).reshape(shape) @ B2.T
            per_trial = np.array(
                [error_metric(B1 @ c.reshape(shape) @ B2.T, f_ref) for c in coeffs]
            )
            records.append(
                SNRRecord(
                    snr=snr,
                    alpha=alpha,
                    mean_error=error_metric(f_avg, f_ref),
                    std_error=float(per_trial.std()),
                    cond=cond,
                    min_eig=float(cert.min_eigenvalue),
                    seconds=time.perf_counter() - t0,
                    trial_error_mean=float(per_trial.mean()),
                )
            )
    finally:
        if pool:
            pool.shutdown()
    return ExperimentResult(records, config.config_hash(), config.seed, truth.values.tolist())


@dataclass
class SweepRow:
    theta: float
    injective: bool
    positive_definite: bool
    min_eigenvalue: float
    condition: float
    min_node_gap: float


def sweep_row(gen, region, theta):
    proj = ProjectionVector.from_angle(theta)
    cert = check_injectivity(proj, region)
    if not cert.a1_injective:
        return SweepRow(float(theta), False, False, math.nan, math.inf, cert.min_node_gap)
    profile = RadonProfile(gen, proj)
    system = gram_matrix(profile, projected_nodes(proj, region), region.points)
    pd = pd_certify(system)
    return SweepRow(
        float(theta), True, pd.positive_definite, pd.min_eigenvalue, pd.condition, cert.min_node_gap
    )


def run_angle_sweep(gen, region, angle_count, seed, extra_angles=()):
    """Certify injectivity and positive definiteness at uniformly random
    angles in [0, 2 pi) (plus any ``extra_angles``). Failures are rows, not
    exceptions."""
    if angle_count < 0:
        raise ValueError("angle_count must be nonnegative")
    rng = np.random.default_rng(seed)
    thetas = list(rng.uniform(0.0, 2 * math.pi, angle_count)) + [float(t) for t in extra_angles]
    return [sweep_row(gen, region, t) for t in thetas]


# ---------------------------------------------------------------------------
# persistence


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_config(config, path):
    _write_json(config.to_dict(), path)


def load_config(path):
    return ExperimentConfig.from_dict(_read_json(path))


def save_result(result, path):
    _write_json(result.to_dict(), path)


def load_result(path):
    return ExperimentResult.from_dict(_read_json(path))


def write_table_csv(result, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in result.records:
            w.writerow([repr(float(getattr(r, col))) for col in CSV_COLUMNS])


def read_table_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ParseError(f"{path}: line 1: expected header {','.join(CSV_COLUMNS)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"{path}: line {lineno}: expected {len(CSV_COLUMNS)} fields")
        rec = {}
        for col, val in zip(CSV_COLUMNS, row):
            try:
                rec[col] = float(val)
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}, field {col!r}: {val!r}") from exc
        out.append(rec)
    return out


def write_sweep_csv(rows, path):
    cols = [f.name for f in fields(SweepRow)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([repr(getattr(r, c)) if isinstance(getattr(r, c), float) else int(getattr(r, c)) for c in cols])
