"""Command-line interface: ``nullprop {estimate,simulate,oracle,diagnose}``.

Settings come from built-in defaults, then an optional ``--config`` file of
``key = value`` lines, then command-line flags. Exit codes: 0 success,
2 input error, 3 unsupported configuration, 4 numeric range error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Optional

import numpy as np

from .errors import (
    ConfigurationError,
    DomainError,
    NumericRangeError,
    QuadratureResourceError,
    UnsupportedConstruction,
)
from .estimators import (
    EstimatorConfig,
    SpeedSchedule,
    class_membership,
    concentration_halfwidth,
    estimate_pi1,
    variance_bound,
)
from .families import GammaNEF, family_from_name
from .kernels import BoundedNull, OneSidedNull, PointNull, SeriesConfig, compose_full_kernel
from .numerics import QuadratureConfig, get_weight
from .simlab import GAMMA_SHAPE, ScenarioSpec, result_filename, run_experiment, write_results

__all__ = ["CliConfig", "main", "cmd_estimate", "cmd_simulate", "cmd_oracle", "cmd_diagnose", "parse_config_file"]

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_RANGE = 0, 2, 3, 4


@dataclass
class CliConfig:
    command: str = "estimate"
    family: str = "gaussian"
    sigma: Optional[float] = None
    null: Optional[str] = None
    omega: Optional[str] = None
    gamma: Optional[float] = None
    h: float = 0.01
    series_n: int = 25
    seed: int = 0
    reps: Optional[int] = None
    scenario: str = "S1"
    m: int = 1000
    sparsity: str = "dense"
    input: Optional[str] = None
    out: Optional[str] = None
    t: Optional[float] = None
    grid: Optional[str] = None
    lam: float = 3.0
    workers: int = 1
    schedule_form: str = "simulation"
    pi1: Optional[float] = None
    extra: dict = field(default_factory=dict)
    print_config: bool = False

    def resolved(self) -> "CliConfig":
        """Fill the scenario- and family-dependent defaults."""
        c = CliConfig(**{f.name: getattr(self, f.name) for f in fields(self)})
        gamma_family = c.family == "gamma"
        if c.command == "simulate":
            gamma_family = c.scenario in ("S4", "S5")
            if c.reps is None:
                c.reps = 100 if gamma_family else 200
            if c.omega is None:
                c.omega = "uniform"
        if c.sigma is None:
            c.sigma = GAMMA_SHAPE if gamma_family else 1.0
        if c.gamma is None:
            c.gamma = 1.0 if gamma_family else 0.495
        if c.omega is None:
            c.omega = "triangular"
        if c.reps is None:
            c.reps = 1
        return c


_KEY_TYPES = {
    "family": str,
    "sigma": float,
    "null": str,
    "omega": str,
    "gamma": float,
    "h": float,
    "series_n": int,
    "seed": int,
    "reps": int,
    "scenario": str,
    "m": int,
    "sparsity": str,
    "input": str,
    "out": str,
    "t": float,
    "grid": str,
    "lam": float,
    "workers": int,
    "schedule_form": str,
    "pi1": float,
}
_ALIASES = {"in": "input", "lambda": "lam", "series-n": "series_n", "schedule-form": "schedule_form"}


def parse_config_file(path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment. Unknown keys go to ``extra``."""
    out, extra = {}, {}
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key.replace("-", "_"))
        if key in _KEY_TYPES:
            out[key] = _convert(key, value)
        else:
            extra[key] = value
    if extra:
        out["extra"] = extra
    return out


def _convert(key, value):
    try:
        return _KEY_TYPES[key](value)
    except ValueError:
        raise ConfigurationError(f"bad value for {key}: {value!r}") from None


def _parse_null(text: Optional[str]):
    if not text:
        raise ConfigurationError("a null is required: --null point:MU0 | bounded:A,B | onesided:B")
    kind, _, rest = text.partition(":")
    try:
        vals = [float(v) for v in rest.split(",")] if rest else []
    except ValueError:
        raise ConfigurationError(f"cannot parse null {text!r}") from None
    if kind == "point" and len(vals) == 1:
        return PointNull(vals[0])
    if kind == "bounded" and len(vals) == 2:
        return BoundedNull(vals[0], vals[1])
    if kind == "onesided" and len(vals) == 1:
        return OneSidedNull(vals[0])
    raise ConfigurationError(f"cannot parse null {text!r}; use point:MU0, bounded:A,B or onesided:B")


def _estimator_config(c: CliConfig, t=None) -> EstimatorConfig:
    return EstimatorConfig(
        omega=get_weight(c.omega),
        quadrature=QuadratureConfig(c.h),
        series=SeriesConfig(c.series_n),
        t=t,
    )


def _schedule(c: CliConfig, family, null) -> SpeedSchedule:
    return SpeedSchedule.for_problem(family, null, gamma=c.gamma, form=c.schedule_form)


def _read_numbers(path) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read data file {path}: {exc}") from exc
    vals = []
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s:
            continue
        try:
            vals.append(float(s))
        except ValueError:
            raise ConfigurationError(f"{path}:{lineno}: not a number: {s!r}") from None
    return np.array(vals)


def _fmt(x) -> str:
    return x if isinstance(x, str) else f"{x:.12g}"


def cmd_estimate(c: CliConfig, out=sys.stdout) -> int:
    """Estimate the alternative proportion from a data file."""
    if not c.input:
        raise ConfigurationError("estimate needs --in FILE")
    data = _read_numbers(c.input)
    family = family_from_name(c.family, c.sigma)
    null = _parse_null(c.null)
    cfg = _estimator_config(c, c.t)
    if c.t is None:
        cfg = replace(cfg, schedule=_schedule(c, family, null))
    report = estimate_pi1(data, family, null, cfg, lam=c.lam)
    for line in report.as_lines():
        print(line, file=out)
    return EXIT_OK


def cmd_simulate(c: CliConfig, out=sys.stdout) -> int:
    """Run a scenario experiment and write the per-replicate CSV."""
    spec = ScenarioSpec(
        c.scenario,
        c.m,
        c.sparsity,
        seed=c.seed,
        reps=c.reps,
        sigma=c.sigma,
        gamma=c.gamma,
        partition_norm=c.h,
        series_n=c.series_n,
        omega=c.omega,
        schedule_form=c.schedule_form,
    )
    result = run_experiment(spec, workers=c.workers)
    target = c.out or "."
    if os.path.isdir(target) or target.endswith(os.sep):
        os.makedirs(target, exist_ok=True)
        target = os.path.join(target, result_filename(spec))
    write_results(result, target)
    for agg in result.aggregates:
        print(
            f"estimator={agg.estimator} n={agg.n} mean_excess={_fmt(agg.mean_excess)} "
            f"sd_excess={_fmt(agg.sd_excess)} mean_abs_excess={_fmt(agg.mean_abs_excess)}",
            file=out,
        )
    print(f"csv={target}", file=out)
    return EXIT_OK


def _grid(c: CliConfig) -> np.ndarray:
    if c.grid is not None:
        items = [s for s in c.grid.replace(" ", "").split(",") if s]
        try:
            return np.array([float(s) for s in items])
        except ValueError:
            raise ConfigurationError(f"cannot parse grid {c.grid!r}") from None
    if c.input:
        return _read_numbers(c.input)
    raise ConfigurationError("oracle needs --grid V1,V2,... or --in FILE")


def _speed(c: CliConfig, family, null, schedule=None) -> float:
    if c.t is not None:
        return float(c.t)
    return EstimatorConfig(schedule=schedule or _schedule(c, family, null)).resolve_t(c.m, family, null)


def cmd_oracle(c: CliConfig, out=sys.stdout) -> int:
    """Print ``param, psi, 1 - psi`` for each grid value (theta for Gamma)."""
    family = family_from_name(c.family, c.sigma)
    null = _parse_null(c.null)
    grid = _grid(c)
    cfg = _estimator_config(c)
    t = _speed(c, family, null)
    pair = compose_full_kernel(null, family, cfg.omega, cfg.series, cfg.quadrature, cfg.psi_quadrature)
    print(f"# t={_fmt(t)}", file=out)
    print("param,psi,one_minus_psi", file=out)
    if grid.size:
        psi = np.atleast_1d(pair.psi(t, grid))
        for p, v in zip(grid, psi):
            print(f"{_fmt(float(p))},{_fmt(float(v))},{_fmt(1.0 - float(v))}", file=out)
    return EXIT_OK


_FLOAT_EXTRAS = ("q", "vartheta", "vartheta_prime", "rho", "gamma_prime", "gap", "mean_square",
                 "sup_one_minus_theta", "epsilon", "D_m", "u3")


def cmd_diagnose(c: CliConfig, out=sys.stdout) -> int:
    """Print the speed, variance bound, concentration bound and (with --pi1) class membership."""
    family = family_from_name(c.family, c.sigma)
    null = _parse_null(c.null)
    schedule = _schedule(c, family, null)
    extras = {}
    for k, v in c.extra.items():
        try:
            extras[k] = float(v) if k in _FLOAT_EXTRAS else v
        except ValueError:
            raise ConfigurationError(f"bad value for {k}: {v!r}") from None
    if c.input:
        extras["params"] = _read_numbers(c.input)
    cfg = _estimator_config(c)
    t = _speed(c, family, null, schedule)
    print(f"t={_fmt(t)}", file=out)
    print(f"m={c.m}", file=out)
    if "D_m" not in extras and "params" in extras and not isinstance(family, GammaNEF):
        b = null.b if isinstance(null, OneSidedNull) else 0.0
        extras["D_m"] = family.sigma**2 + float(np.mean((extras["params"] - b) ** 2))
    vb = variance_bound(family, null, t, c.m, extras, cfg.omega, cfg.quadrature)
    print(f"variance_bound={_fmt(vb)}", file=out)
    conc = concentration_halfwidth(family, null, t, c.m, c.lam, extras, cfg.omega, cfg.quadrature)
    if isinstance(conc, str):
        print(f"concentration_halfwidth={conc}", file=out)
    else:
        print(f"concentration_halfwidth={_fmt(conc[0])}", file=out)
        print(f"concentration_prob_floor={_fmt(conc[1])}", file=out)
    if c.pi1 is not None:
        report = class_membership(schedule, family, null, c.m, c.pi1, extras, cfg.quadrature)
        for line in report.as_lines():
            print(line, file=out)
    return EXIT_OK


_COMMANDS = {"estimate": cmd_estimate, "simulate": cmd_simulate, "oracle": cmd_oracle, "diagnose": cmd_diagnose}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    a = common.add_argument
    a("--config", help="flat key = value settings file; flags override it")
    a("--family", help="gaussian, laplace, logistic, cauchy, hsecant or gamma")
    a("--sigma", type=float, help="scale (location-shift) or shape (gamma)")
    a("--null", help="point:MU0 | bounded:A,B | onesided:B (gamma bounds are means)")
    a("--omega", help="triangular or uniform")
    a("--gamma", type=float, help="speed tuning constant")
    a("--h", type=float, help="quadrature partition norm")
    a("--series-n", dest="series_n", type=int, help="gamma series truncation")
    a("--seed", type=int)
    a("--reps", type=int)
    a("--scenario", help="S1 .. S5")
    a("--m", type=int, help="number of hypotheses for schedules and scenarios")
    a("--sparsity", help="dense or moderate")
    a("--in", dest="input", help="data file, one number per line")
    a("--out", help="output CSV path or directory")
    a("--t", type=float, help="use this speed instead of the schedule")
    a("--grid", help="comma-separated parameter values for oracle")
    a("--lambda", dest="lam", type=float, help="concentration level")
    a("--workers", type=int, help="parallel replicate workers for simulate")
    a("--schedule-form", dest="schedule_form", help="simulation or theorem (gamma speeds)")
    a("--pi1", type=float, help="hypothesised alternative proportion for diagnose")
    a("--extra", action="append", default=None, metavar="KEY=VALUE", help="class constants for diagnose")
    a("--print-config", dest="print_config", action="store_true", default=None)
    parser = argparse.ArgumentParser(prog="nullprop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sub.add_parser(name, parents=[common], help=(fn.__doc__ or name).splitlines()[0])
    return parser


def _merge(ns: argparse.Namespace) -> CliConfig:
    settings = {}
    if ns.config:
        settings.update(parse_config_file(ns.config))
    flags = {k: v for k, v in vars(ns).items() if v is not None and k not in ("config", "extra")}
    extra = dict(settings.pop("extra", {}))
    for item in ns.extra or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--extra expects KEY=VALUE, got {item!r}")
        extra[key.strip()] = value.strip()
    settings.update(flags)
    settings["extra"] = extra
    return CliConfig(**settings).resolved()


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = _merge(ns)
        if cfg.print_config:
            for k, v in asdict(cfg).items():
                print(f"{k} = {v}", file=out)
        return _COMMANDS[cfg.command](cfg, out=out)
    except UnsupportedConstruction as exc:
        print(f"error: unsupported configuration: {exc}", file=err)
        return EXIT_UNSUPPORTED
    except (NumericRangeError, QuadratureResourceError) as exc:
        print(f"error: numeric range: {exc}", file=err)
        return EXIT_RANGE
    except (ConfigurationError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
