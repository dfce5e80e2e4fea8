"""Simulation scenarios, replicated experiments and their CSV records.

Scenarios S1-S3 use unit-variance Gaussian data, S4-S5 Gamma data with
shape 4. Each replicate draws its parameters and data from its own Philox
stream keyed by (seed, scenario, m, sparsity, rep), so results do not depend
on how replicates are scheduled across workers.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .baselines import mr_estimate, one_sided_pvalue, storey_estimate
from .errors import ConfigurationError, DomainError, NullPropError
from .estimators import (
    GAMMA_BOUNDED,
    GAMMA_ONESIDED,
    LS_BOUNDED,
    LS_ONESIDED_GAUSS,
    WEIGHTED_GAUSS,
    EstimatorConfig,
    SpeedSchedule,
    estimate_functional,
    estimate_pi1,
    induced_null_proportion,
)
from .families import GammaNEF, LocationShift, ParameterVector, gamma_mean, sample
from .kernels import BoundedNull, FunctionalSpec, OneSidedNull, SeriesConfig
from .numerics import QuadratureConfig, get_weight

__all__ = [
    "SCENARIOS",
    "DENSE",
    "MODERATE",
    "ScenarioSpec",
    "RepRow",
    "Aggregate",
    "ExperimentResult",
    "nominal_pi1",
    "rep_stream",
    "generate_scenario",
    "scenario_problem",
    "run_experiment",
    "write_results",
    "read_results",
    "result_filename",
    "CSV_HEADER",
]

SCENARIOS = ("S1", "S2", "S3", "S4", "S5")
DENSE = "dense"
MODERATE = "moderate"
CSV_HEADER = ("scenario", "m", "sparsity", "estimator", "rep", "estimate", "truth", "excess")
AGG_HEADER = "# aggregate: scenario,m,sparsity,estimator,n,mean_excess,sd_excess,mean_abs_excess"

# Gaussian scenarios
S1_A, S1_B = -1.0, 2.0
S2_B = 0.0
S3_B = 2.0
# Gamma scenarios, natural-parameter scale
GAMMA_SHAPE = 4.0
THETA_A, THETA_B, THETA_LOW, THETA_HIGH = 0.0, 0.35, -0.2, 0.55


@dataclass(frozen=True)
class ScenarioSpec:
    """One experiment: a scenario at a given m and sparsity, replicated ``reps`` times.

    ``sigma`` defaults to 1 (S1-S3) or 4 (S4-S5); ``gamma`` to 0.495 or 1.
    ``baselines`` defaults to on for the one-sided scenarios S2 and S5.
    """

    scenario: str
    m: int
    sparsity: str = DENSE
    seed: int = 0
    reps: int = 1
    sigma: Optional[float] = None
    gamma: Optional[float] = None
    partition_norm: float = 0.01
    series_n: int = 25
    omega: str = "uniform"
    schedule_form: str = "simulation"
    baselines: Optional[bool] = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if self.sparsity not in (DENSE, MODERATE):
            raise ConfigurationError(f"sparsity must be {DENSE!r} or {MODERATE!r}, got {self.sparsity!r}")
        if self.m < 100:
            raise ConfigurationError(f"m must be >= 100, got {self.m}")
        if self.reps < 1:
            raise ConfigurationError(f"reps must be >= 1, got {self.reps}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")

    @property
    def is_gamma(self) -> bool:
        return self.scenario in ("S4", "S5")

    @property
    def resolved_sigma(self) -> float:
        if self.sigma is not None:
            return float(self.sigma)
        return GAMMA_SHAPE if self.is_gamma else 1.0

    @property
    def resolved_gamma(self) -> float:
        if self.gamma is not None:
            return float(self.gamma)
        return 1.0 if self.is_gamma else 0.495

    @property
    def with_baselines(self) -> bool:
        if self.baselines is not None:
            return self.baselines
        return self.scenario in ("S2", "S5")


def nominal_pi1(m: int, sparsity: str) -> float:
    return 0.2 if sparsity == DENSE else 1.0 / math.log(math.log(m))


def rep_stream(spec: ScenarioSpec, rep: int) -> np.random.Generator:
    key = [spec.seed, SCENARIOS.index(spec.scenario), spec.m, 0 if spec.sparsity == DENSE else 1, rep]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _counts(spec):
    m = spec.m
    m1 = int(round(nominal_pi1(m, spec.sparsity) * m))
    return m - m1, m1


def _check_counts(**counts):
    bad = {k: v for k, v in counts.items() if v < 0}
    if bad:
        raise DomainError(f"scenario counts went negative: {bad}")


def _split_two_sided(m, m0, m1, lnln):
    m11 = max(1, m1 // 2 - int(m // lnln))
    rest = m - m0 - 2 * m11
    _check_counts(m11=m11, boundary=rest)
    return m11, rest - rest // 2, rest // 2


def generate_scenario(spec: ScenarioSpec, rep_index: int, rng: np.random.Generator = None):
    """Draw the parameter vector of one replicate and its truth.

    Returns ``(params, truth)``; ``truth`` is the realised alternative
    proportion, except for S3 where it is the phi-weighted proportion of the
    drawn means with half weight at the interval ends.
    """
    rng = rng or rep_stream(spec, rep_index)
    m = spec.m
    m0, m1 = _counts(spec)
    lnln = math.log(math.log(m))
    sid = spec.scenario
    if sid in ("S1", "S2", "S3"):
        u = 1.0 / lnln
        fam = LocationShift("gaussian", spec.resolved_sigma)
        if sid == "S1":
            a, b = S1_A, S1_B
            m11, n_a, n_b = _split_two_sided(m, m0, m1, lnln)
            mu = np.concatenate(
                [
                    rng.uniform(a + u, b - u, m0),
                    rng.uniform(b + u, b + 6, m11),
                    rng.uniform(a - 4, a - u, m11),
                    np.full(n_a, a),
                    np.full(n_b, b),
                ]
            )
            truth = float(np.count_nonzero((mu <= a) | (mu >= b))) / m
        elif sid == "S2":
            b = S2_B
            k = int(math.floor(0.9 * m1))
            _check_counts(boundary=m1 - k)
            mu = np.concatenate([rng.uniform(-4, b - u, m0), rng.uniform(b + u, b + 6, k), np.full(m1 - k, b)])
            truth = float(np.count_nonzero(mu >= b)) / m
        else:
            b = S3_B
            a = -b
            k = m1 // 2
            mu = np.concatenate([rng.uniform(a, b, m0), rng.uniform(b + u, b + 6, k), rng.uniform(b - 4, b - u, m1 - k)])
            truth = induced_null_proportion(mu, FunctionalSpec.truncated_square(b), boundary_weight=0.5)
        return ParameterVector(mu, fam), truth
    u = 0.2 / lnln
    fam = GammaNEF(spec.resolved_sigma)
    if sid == "S4":
        m11, n_a, n_b = _split_two_sided(m, m0, m1, lnln)
        th = np.concatenate(
            [
                rng.uniform(THETA_A + u, THETA_B - u, m0),
                rng.uniform(THETA_B + u, THETA_HIGH, m11),
                rng.uniform(THETA_LOW, THETA_A - u, m11),
                np.full(n_a, THETA_A),
                np.full(n_b, THETA_B),
            ]
        )
        truth = float(np.count_nonzero((th <= THETA_A) | (th >= THETA_B))) / m
    else:
        k = int(math.floor(0.9 * m1))
        _check_counts(boundary=m1 - k)
        th = np.concatenate(
            [rng.uniform(THETA_LOW, THETA_B - u, m0), rng.uniform(THETA_B + u, THETA_HIGH, k), np.full(m1 - k, THETA_B)]
        )
        truth = float(np.count_nonzero(th >= THETA_B)) / m
    return ParameterVector(th, fam), truth


def scenario_problem(spec: ScenarioSpec):
    """Return ``(family, null, cfg)`` used by the proposed estimator for ``spec``."""
    sig = spec.resolved_sigma
    cfg_kw = dict(
        omega=get_weight(spec.omega),
        quadrature=QuadratureConfig(spec.partition_norm),
        series=SeriesConfig(spec.series_n),
    )
    g = spec.resolved_gamma
    sid = spec.scenario
    if sid == "S1":
        fam, null, tag = LocationShift("gaussian", sig), BoundedNull(S1_A, S1_B), LS_BOUNDED
    elif sid == "S2":
        fam, null, tag = LocationShift("gaussian", sig), OneSidedNull(S2_B), LS_ONESIDED_GAUSS
    elif sid == "S3":
        fam, null, tag = LocationShift("gaussian", sig), FunctionalSpec.truncated_square(S3_B), WEIGHTED_GAUSS
    else:
        fam = GammaNEF(sig)
        if sid == "S4":
            null, tag = BoundedNull(gamma_mean(fam, THETA_A), gamma_mean(fam, THETA_B)), GAMMA_BOUNDED
        else:
            null, tag = OneSidedNull(gamma_mean(fam, THETA_B)), GAMMA_ONESIDED
    schedule = SpeedSchedule(tag=tag, gamma=g, form=spec.schedule_form)
    return fam, null, EstimatorConfig(schedule=schedule, **cfg_kw)


@dataclass(frozen=True)
class RepRow:
    estimator: str
    rep: int
    estimate: float
    truth: float
    excess: float
    error: str = ""


@dataclass(frozen=True)
class Aggregate:
    estimator: str
    n: int
    mean_excess: float
    sd_excess: float
    mean_abs_excess: float
    single_row: bool


@dataclass
class ExperimentResult:
    spec: ScenarioSpec
    rows: list
    aggregates: list = field(default_factory=list)
    nominal_pi1: float = math.nan
    runtime: float = 0.0

    def aggregate(self, estimator: str) -> Aggregate:
        for agg in self.aggregates:
            if agg.estimator == estimator:
                return agg
        raise KeyError(estimator)

    def excesses(self, estimator: str) -> np.ndarray:
        return np.array([r.excess for r in self.rows if r.estimator == estimator])


def _excess(est, truth):
    return est / truth - 1.0 if truth != 0 else math.nan


def _run_rep(spec: ScenarioSpec, rep: int) -> list:
    rng = rep_stream(spec, rep)
    params, truth = generate_scenario(spec, rep, rng)
    fam, null, cfg = scenario_problem(spec)
    z = sample(fam, params.values, rng)
    rows = []
    try:
        if isinstance(null, FunctionalSpec):
            est = estimate_functional(z, fam, null, cfg, corrected=False).estimate
        else:
            est = estimate_pi1(z, fam, null, cfg).estimate
        rows.append(RepRow("proposed", rep, est, truth, _excess(est, truth)))
    except NullPropError as exc:
        rows.append(RepRow("proposed", rep, math.nan, truth, math.nan, f"{type(exc).__name__}: {exc}"))
    if spec.with_baselines:
        boundary = THETA_B if spec.is_gamma else null.b
        p = one_sided_pvalue(z, fam, boundary)
        for name, fn in (("MR", mr_estimate), ("Storey", lambda pv: storey_estimate(pv).estimate)):
            est = fn(p)
            rows.append(RepRow(name, rep, est, truth, _excess(est, truth)))
    return rows


def _aggregate(rows) -> list:
    names = []
    for r in rows:
        if r.estimator not in names:
            names.append(r.estimator)
    out = []
    for name in names:
        ex = np.array([r.excess for r in rows if r.estimator == name and not r.error])
        ex = ex[np.isfinite(ex)]
        n = ex.size
        mean = float(np.mean(ex)) if n else math.nan
        sd = float(np.std(ex, ddof=1)) if n > 1 else 0.0
        mabs = float(np.mean(np.abs(ex))) if n else math.nan
        out.append(Aggregate(name, n, mean, sd, mabs, n == 1))
    return out


def run_experiment(spec: ScenarioSpec, workers: int = 1) -> ExperimentResult:
    """Run all replicates of ``spec``; ``workers > 1`` uses a process pool.

    Rows are ordered by replicate then estimator whatever the schedule.
    """
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    start = time.perf_counter()
    reps = range(spec.reps)
    if workers == 1 or spec.reps == 1:
        per_rep = [_run_rep(spec, r) for r in reps]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, spec.reps)) as pool:
            per_rep = list(pool.map(_run_rep, [spec] * spec.reps, reps))
    rows = [row for chunk in per_rep for row in chunk]
    proposed = [r for r in rows if r.estimator == "proposed"]
    if proposed and all(r.error for r in proposed):
        raise NullPropError(f"every replicate failed; first error: {proposed[0].error}")
    return ExperimentResult(spec, rows, _aggregate(rows), nominal_pi1(spec.m, spec.sparsity), time.perf_counter() - start)


def _g(x) -> str:
    return f"{x:.12g}"


def result_filename(spec: ScenarioSpec) -> str:
    return f"{spec.scenario}_{spec.m}_{spec.sparsity}_{spec.seed}.csv"


def write_results(result: Optional[ExperimentResult], path) -> None:
    """Write rows and the aggregate block as UTF-8 CSV with LF line endings.

    ``result=None`` (or a result without rows) writes the header only.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    if result is not None and result.rows:
        s = result.spec
        for r in result.rows:
            w.writerow([s.scenario, s.m, s.sparsity, r.estimator, r.rep, _g(r.estimate), _g(r.truth), _g(r.excess)])
        buf.write(AGG_HEADER + "\n")
        for a in result.aggregates:
            w.writerow([s.scenario, s.m, s.sparsity, a.estimator, a.n, _g(a.mean_excess), _g(a.sd_excess), _g(a.mean_abs_excess)])
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write results to {os.fspath(path)}: {exc}") from exc


def read_results(path):
    """Parse a file written by :func:`write_results`.

    Returns ``(rows, aggregates)``: rows as dicts keyed by the CSV header and
    aggregates as dicts keyed by estimator.
    """
    rows, aggs = [], {}
    in_agg = False
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    for line in lines[1:]:
        if not line:
            continue
        if line.startswith("#"):
            in_agg = True
            continue
        f = next(csv.reader([line]))
        if in_agg:
            aggs[f[3]] = {
                "n": int(f[4]),
                "mean_excess": float(f[5]),
                "sd_excess": float(f[6]),
                "mean_abs_excess": float(f[7]),
            }
        else:
            vals = [f[0], int(f[1]), f[2], f[3], int(f[4]), float(f[5]), float(f[6]), float(f[7])]
            rows.append(dict(zip(CSV_HEADER, vals)))
    return rows, aggs
