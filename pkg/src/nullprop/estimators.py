"""Empirical and oracle estimators of the alternative proportion, speed
schedules, and the finite-sample diagnostics that accompany an estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import ConfigurationError, DomainError
from .families import (
    Family,
    GammaNEF,
    LocationShift,
    ParameterVector,
    abs_variance,
    g_factor,
    gamma_theta,
    mean_abs,
)
from .kernels import (
    PSI_QUADRATURE,
    BoundedNull,
    FunctionalSpec,
    NullSpec,
    OneSidedNull,
    PointNull,
    SeriesConfig,
    compose_full_kernel,
    compose_functional_kernel,
)
from .numerics import DEFAULT_QUADRATURE, QuadratureConfig, WeightFunction, triangular_weight

__all__ = [
    "LS_BOUNDED",
    "LS_ONESIDED_GAUSS",
    "GAMMA_BOUNDED",
    "GAMMA_ONESIDED",
    "WEIGHTED_GAUSS",
    "TREND_ONLY",
    "SpeedSchedule",
    "EstimatorConfig",
    "EstimateReport",
    "Predicate",
    "MembershipReport",
    "estimate_pi1",
    "oracle_pi1",
    "estimate_functional",
    "oracle_functional",
    "induced_null_proportion",
    "speed_t",
    "u3_default",
    "variance_bound",
    "concentration_halfwidth",
    "class_membership",
    "min_gap_bounded",
    "min_gap_onesided",
    "u3_min",
    "u3_gap_bounded",
    "u3_gap_onesided",
]

LS_BOUNDED = "LS_BOUNDED"
LS_ONESIDED_GAUSS = "LS_ONESIDED_GAUSS"
GAMMA_BOUNDED = "GAMMA_BOUNDED"
GAMMA_ONESIDED = "GAMMA_ONESIDED"
WEIGHTED_GAUSS = "WEIGHTED_GAUSS"
_TAGS = (LS_BOUNDED, LS_ONESIDED_GAUSS, GAMMA_BOUNDED, GAMMA_ONESIDED, WEIGHTED_GAUSS)

# Returned instead of a number where a bound carries an unknown absolute constant.
TREND_ONLY = "trend-only"


def u3_default(m: int) -> float:
    """0.2 / ln ln m, the distance used by the Gamma simulation schedules."""
    if m < 3:
        raise DomainError(f"ln ln m must be positive, got m={m}")
    return 0.2 / math.log(math.log(m))


@dataclass(frozen=True)
class SpeedSchedule:
    """Selects how the speed ``t`` grows with the number of hypotheses ``m``.

    ``form`` only matters for the Gamma tags: ``"simulation"`` is the
    square-root schedule used by the scenario grid, ``"theorem"`` the linear
    one from the consistency results. ``u3`` overrides 0.2 / ln ln m.
    """

    tag: str = LS_BOUNDED
    gamma: float = 0.495
    form: str = "simulation"
    u3: Optional[float] = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ConfigurationError(f"unknown schedule tag {self.tag!r}; choose from {_TAGS}")
        if self.form not in ("simulation", "theorem"):
            raise ConfigurationError(f"schedule form must be 'simulation' or 'theorem', got {self.form!r}")
        g = self.gamma
        if self.tag in (LS_ONESIDED_GAUSS, WEIGHTED_GAUSS) and not 0 < g < 0.5:
            raise ConfigurationError(f"{self.tag} needs gamma in (0, 0.5), got {g}")
        if self.tag == LS_BOUNDED and not g > 0:
            raise ConfigurationError(f"{self.tag} needs gamma > 0, got {g}")
        if self.tag in (GAMMA_BOUNDED, GAMMA_ONESIDED) and not 0 < g <= 1:
            raise ConfigurationError(f"{self.tag} needs gamma in (0, 1], got {g}")
        if self.u3 is not None and not self.u3 > 0:
            raise ConfigurationError(f"u3 must be > 0, got {self.u3}")

    @classmethod
    def for_problem(cls, family: Family, null, **kw) -> "SpeedSchedule":
        """Default schedule for a (family, null) pair: gamma 0.495 for
        location-shift families and 1 for Gamma."""
        if isinstance(family, GammaNEF):
            tag = GAMMA_ONESIDED if isinstance(null, OneSidedNull) else GAMMA_BOUNDED
            kw.setdefault("gamma", 1.0)
        elif isinstance(null, FunctionalSpec):
            tag = WEIGHTED_GAUSS
        elif isinstance(null, OneSidedNull):
            tag = LS_ONESIDED_GAUSS
        else:
            tag = LS_BOUNDED
        return cls(tag=tag, **kw)


def speed_t(schedule: SpeedSchedule, m: int, family: Family) -> float:
    """The speed t_m for ``m`` hypotheses under ``schedule``."""
    if m < 2:
        raise DomainError(f"speed schedules need m >= 2, got {m}")
    lnm = math.log(m)
    sig = family.sigma
    g = schedule.gamma
    if schedule.tag in (LS_BOUNDED, LS_ONESIDED_GAUSS, WEIGHTED_GAUSS):
        return math.sqrt(2 * g * lnm) / sig
    u3 = schedule.u3 if schedule.u3 is not None else u3_default(m)
    denom = 4 * sig if schedule.tag == GAMMA_BOUNDED else 4 * math.sqrt(2) * sig
    base = g * u3 * lnm / denom
    return base if schedule.form == "theorem" else math.sqrt(base)


@dataclass(frozen=True)
class EstimatorConfig:
    """Everything an estimate needs besides the data, the family and the null.

    ``psi_quadrature`` is used for the population-side integrals, which
    oscillate faster than the estimator's kernels. ``t`` fixes the speed
    directly and bypasses ``schedule``.
    """

    omega: WeightFunction = field(default_factory=triangular_weight)
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE
    psi_quadrature: QuadratureConfig = PSI_QUADRATURE
    series: SeriesConfig = SeriesConfig()
    schedule: Optional[SpeedSchedule] = None
    t: Optional[float] = None

    def __post_init__(self):
        if self.t is not None and not (self.t >= 0 and math.isfinite(self.t)):
            raise ConfigurationError(f"t must be finite and >= 0, got {self.t}")

    def resolve_t(self, m: int, family: Family, null) -> float:
        if self.t is not None:
            return float(self.t)
        schedule = self.schedule or SpeedSchedule.for_problem(family, null)
        return speed_t(schedule, m, family)


@dataclass
class EstimateReport:
    estimate: float
    t_used: float
    m: int
    variance_bound: Union[float, str, None] = None
    concentration: Optional[tuple] = None
    membership: Optional["MembershipReport"] = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.m < 1:
            raise DomainError("a report needs m >= 1")

    @property
    def null_proportion(self) -> float:
        return 1.0 - self.estimate

    def as_lines(self) -> list:
        lines = [f"estimate={_fmt(self.estimate)}", f"t_used={_fmt(self.t_used)}", f"m={self.m}"]
        if self.variance_bound is not None:
            vb = self.variance_bound
            lines.append(f"variance_bound={vb if isinstance(vb, str) else _fmt(vb)}")
        if self.concentration is not None:
            hw, floor = self.concentration
            lines.append(f"concentration_halfwidth={_fmt(hw)}")
            lines.append(f"concentration_prob_floor={_fmt(floor)}")
        if self.membership is not None:
            lines.extend(self.membership.as_lines())
        lines.extend(f"note={n}" for n in self.notes)
        return lines


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _data_array(data) -> np.ndarray:
    z = np.asarray(data, dtype=float).ravel()
    if z.size == 0:
        raise DomainError("data must contain at least one observation")
    if not np.all(np.isfinite(z)):
        raise DomainError("data contains non-finite values")
    return z


def estimate_pi1(data, family: Family, null: NullSpec, cfg: EstimatorConfig = EstimatorConfig(), lam: float = 3.0):
    """Empirical matching estimate m^-1 * sum(1 - K(t, z_i)) of the alternative proportion."""
    z = _data_array(data)
    m = z.size
    t = cfg.resolve_t(m, family, null)
    pair = compose_full_kernel(null, family, cfg.omega, cfg.series, cfg.quadrature, cfg.psi_quadrature)
    est = float(np.mean(1.0 - pair.K(t, z)))
    report = EstimateReport(est, t, m)
    extras = {}
    if isinstance(family, LocationShift) and family.kind == "gaussian" and isinstance(null, OneSidedNull):
        # E z^2 = sigma^2 + mu^2, so the sample second moment of z - b estimates D_m
        extras["D_m"] = float(np.mean((z - null.b) ** 2))
        report.notes.append("D_m estimated by the sample second moment")
    if t > 0:
        report.variance_bound = variance_bound(family, null, t, m, extras, cfg.omega, cfg.quadrature)
        if report.variance_bound != TREND_ONLY:
            report.concentration = concentration_halfwidth(family, null, t, m, lam, extras, cfg.omega, cfg.quadrature)
    return report


def oracle_pi1(params: ParameterVector, null: NullSpec, cfg: EstimatorConfig = EstimatorConfig(), t: float = None) -> float:
    """Average discriminant m^-1 * sum(1 - psi(t, param_i)) at the true parameters."""
    family = params.family
    if t is None:
        t = cfg.resolve_t(params.m, family, null)
    pair = compose_full_kernel(null, family, cfg.omega, cfg.series, cfg.quadrature, cfg.psi_quadrature)
    return float(np.mean(1.0 - np.asarray(pair.psi(t, np.asarray(params.values, dtype=float)))))


def estimate_functional(
    data,
    family: Family,
    spec: FunctionalSpec,
    cfg: EstimatorConfig = EstimatorConfig(),
    corrected: bool = True,
    lam: float = 3.0,
) -> EstimateReport:
    """m^-1 * sum K(t, z_i) for the phi-weighted kernel.

    The corrected kernel targets the phi-weighted null proportion over the
    open interval; the uncorrected one also gives boundary means half weight.
    """
    z = _data_array(data)
    m = z.size
    t = cfg.resolve_t(m, family, spec)
    pair = compose_functional_kernel(spec, family, cfg.omega, cfg.series, cfg.quadrature, cfg.psi_quadrature, corrected)
    est = float(np.mean(pair.K(t, z)))
    report = EstimateReport(est, t, m)
    if t > 0:
        report.variance_bound = variance_bound(family, spec, t, m, {}, cfg.omega, cfg.quadrature)
        if report.variance_bound != TREND_ONLY:
            report.concentration = concentration_halfwidth(family, spec, t, m, lam, {}, cfg.omega, cfg.quadrature)
    return report


def oracle_functional(
    params: ParameterVector,
    spec: FunctionalSpec,
    cfg: EstimatorConfig = EstimatorConfig(),
    t: float = None,
    corrected: bool = True,
) -> float:
    family = params.family
    if t is None:
        t = cfg.resolve_t(params.m, family, spec)
    pair = compose_functional_kernel(spec, family, cfg.omega, cfg.series, cfg.quadrature, cfg.psi_quadrature, corrected)
    return float(np.mean(pair.psi(t, np.asarray(params.values, dtype=float))))


def induced_null_proportion(means, spec: FunctionalSpec, boundary_weight: float = 0.0) -> float:
    """m^-1 * sum of phi(mean) over means inside (a, b), plus ``boundary_weight``
    times phi at means equal to a or b.

    ``boundary_weight=0.5`` gives the target of the uncorrected estimator.
    """
    mu = np.asarray(means, dtype=float).ravel()
    if mu.size == 0:
        raise DomainError("need at least one mean")
    inside = (mu > spec.a) & (mu < spec.b)
    edge = (mu == spec.a) | (mu == spec.b)
    vals = spec(mu)
    return float((np.sum(vals[inside]) + boundary_weight * np.sum(vals[edge])) / mu.size)


# ---------------------------------------------------------------------------
# minimal distances
# ---------------------------------------------------------------------------


def _min_gap(values, target) -> float:
    v = np.asarray(values, dtype=float)
    d = np.abs(v[v != target] - target)
    return float(d.min()) if d.size else math.inf


def min_gap_bounded(mu, a: float, b: float) -> float:
    """Smallest |mu_j - tau| over tau in {a, b}, skipping mu_j equal to tau."""
    return min(_min_gap(mu, a), _min_gap(mu, b))


def min_gap_onesided(mu, b: float = 0.0) -> float:
    """Smallest |mu_j - b| over mu_j != b."""
    return _min_gap(mu, b)


def u3_min(theta) -> float:
    """Smallest 1 - theta_i."""
    th = np.asarray(theta, dtype=float)
    if th.size == 0:
        return math.inf
    return float(np.min(1.0 - th))


def _xi(theta):
    return 1.0 / (1.0 - np.asarray(theta, dtype=float))


def u3_gap_bounded(theta, theta_a: float, theta_b: float) -> float:
    th = np.asarray(theta, dtype=float)
    out = math.inf
    for ref in (theta_a, theta_b):
        sel = th[th != ref]
        if sel.size:
            out = min(out, float(np.min(np.abs(_xi(ref) - _xi(sel)))))
    return out


def u3_gap_onesided(theta, theta_b: float) -> float:
    th = np.asarray(theta, dtype=float)
    sel = th[th != theta_b]
    return float(np.min(np.abs(_xi(theta_b) - _xi(sel)))) if sel.size else math.inf


# ---------------------------------------------------------------------------
# variance and concentration bounds
# ---------------------------------------------------------------------------


def _require_t_positive(t):
    if not t > 0:
        raise DomainError(f"this bound needs t > 0, got {t}")


def _need(extras, key):
    if extras is None or key not in extras:
        raise ConfigurationError(f"missing required extra {key!r}")
    return extras[key]


def _is_gaussian(family):
    return isinstance(family, LocationShift) and family.kind == "gaussian"


def variance_bound(
    family: Family,
    null,
    t: float,
    m: int,
    extras: dict = None,
    omega: WeightFunction = None,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Closed-form upper bound on Var(e_m(t)).

    Explicit for location-shift bounded and phi-weighted nulls and for the
    Gaussian one-sided null (which needs ``extras['D_m']``); every other case
    returns :data:`TREND_ONLY`.
    """
    omega = omega or triangular_weight()
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if isinstance(family, GammaNEF) or isinstance(null, PointNull):
        return TREND_ONLY
    w = omega.sup_norm
    if isinstance(null, BoundedNull):
        g = g_factor(family, t, cfg)
        return g**2 / m * (4 * w**2 + 2 * (null.b - null.a) ** 2 * t**2 / math.pi**2)
    if isinstance(null, FunctionalSpec):
        g = g_factor(family, t, cfg)
        return g**2 / m * (4 * w**2 + 2 * t**2 * (null.b - null.a) ** 2 * null.sup_norm / math.pi**2)
    if isinstance(null, OneSidedNull):
        if not _is_gaussian(family):
            return TREND_ONLY
        d_m = _need(extras, "D_m")
        sig = family.sigma
        if t**2 * sig**2 > 700:
            raise DomainError(f"t={t} overflows the one-sided variance bound")
        g = g_factor(family, t, cfg)
        return 2 * t**2 * math.exp(t**2 * sig**2) / (math.pi**2 * m) * (4 * t**2 * sig**2 + d_m) + 2 * w * g**2 / m
    raise ConfigurationError(f"unknown null {null!r}")


def concentration_halfwidth(
    family: Family,
    null,
    t: float,
    m: int,
    lam: float,
    extras: dict = None,
    omega: WeightFunction = None,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Return ``(halfwidth, prob_floor)``: |e_m(t)| <= halfwidth with
    probability at least prob_floor. Unsupported branches give TREND_ONLY."""
    omega = omega or triangular_weight()
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    if isinstance(family, GammaNEF) or isinstance(null, PointNull):
        return TREND_ONLY
    w = omega.sup_norm
    if isinstance(null, (BoundedNull, FunctionalSpec)):
        g = g_factor(family, t, cfg)
        floor = 1.0 - 4.0 * math.exp(-0.5 * lam**2)
        if isinstance(null, BoundedNull):
            hw = lam / (2 * math.pi) / math.sqrt(m) * (abs(t) * (null.b - null.a) + 2 * w) * g
        else:
            hw = lam / math.sqrt(m) * g / (2 * math.pi) * (abs(t) * (null.b - null.a) * null.sup_norm + w)
        return hw, floor
    if isinstance(null, OneSidedNull):
        if not _is_gaussian(family):
            return TREND_ONLY
        _require_t_positive(t)
        d_m = _need(extras, "D_m")
        s2 = family.sigma**2
        hw = 2 * lam * math.expm1(0.5 * t**2 * s2) * (1 / (2 * math.pi) + 1 / (2 * math.pi * t * s2) + w / (t**2 * s2))
        floor = -math.inf if lam == 0 else 1.0 - 4.0 * math.exp(-0.5 * lam**2 * m) - d_m / (m * lam**2)
        return hw, floor
    raise ConfigurationError(f"unknown null {null!r}")


# ---------------------------------------------------------------------------
# uniform consistency classes at finite m
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Predicate:
    """One condition of a consistency class evaluated at finite m.

    Asymptotic conditions are ``heuristic``: little-o holds when
    lhs <= epsilon * rhs, big-O when lhs <= rhs / epsilon.
    """

    name: str
    lhs: float
    rhs: float
    holds: bool
    heuristic: bool = False

    def as_line(self) -> str:
        tag = " (heuristic)" if self.heuristic else ""
        return f"class.{self.name}: lhs={_fmt(self.lhs)} rhs={_fmt(self.rhs)} holds={self.holds}{tag}"


@dataclass
class MembershipReport:
    class_name: str
    predicates: list
    quantities: dict
    epsilon: float

    @property
    def all_hold(self) -> bool:
        return all(p.holds for p in self.predicates)

    def get(self, name: str) -> Predicate:
        for p in self.predicates:
            if p.name == name:
                return p
        raise KeyError(name)

    def as_lines(self) -> list:
        out = [f"class={self.class_name}", f"class.epsilon={_fmt(self.epsilon)}"]
        out += [p.as_line() for p in self.predicates]
        out += [f"class.{k}={_fmt(v)}" for k, v in self.quantities.items()]
        out.append(f"class.all_hold={self.all_hold}")
        return out


def _exact(name, lhs, rhs, holds):
    return Predicate(name, float(lhs), float(rhs), bool(holds))


def _little_o(name, lhs, rhs, eps):
    return Predicate(name, float(lhs), float(rhs), bool(lhs <= eps * rhs), heuristic=True)


def _big_o(name, lhs, rhs, eps):
    return Predicate(name, float(lhs), float(rhs), bool(lhs <= rhs / eps), heuristic=True)


def _gap_inverse(gap):
    return 0.0 if math.isinf(gap) else 1.0 / gap


def _radius(family, a, b, rho):
    taus = [0.0, a, b]
    return 2 * max(mean_abs(family, tau) for tau in taus) + 2 * rho + 2 * max(abs(a), abs(b))


def class_membership(
    schedule: SpeedSchedule,
    family: Family,
    null,
    m: int,
    pi1_hypothesis: float,
    extras: dict = None,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> MembershipReport:
    """Evaluate the consistency class selected by ``schedule.tag`` at finite m.

    ``extras`` supplies the class constants and the parameter information:

    * location-shift bounded / weighted: ``q``, ``vartheta``, ``vartheta_prime``,
      ``rho`` and either ``params`` (the means) or ``gap``;
    * Gaussian one-sided: ``gamma_prime`` and ``params`` or both ``gap`` and
      ``mean_square``;
    * Gamma: ``params`` (natural parameters) or ``u3``, ``gap`` and
      ``sup_one_minus_theta``.

    ``epsilon`` (default 0.5) is the threshold that stands in for o(1).
    For the phi-weighted class ``corrected`` selects the estimator.
    """
    extras = dict(extras or {})
    eps = float(extras.get("epsilon", 0.5))
    if not 0 < eps:
        raise ConfigurationError("epsilon must be > 0")
    if m < 3:
        raise DomainError(f"class membership needs m >= 3, got {m}")
    t = speed_t(schedule, m, family)
    g = schedule.gamma
    lnm = math.log(m)
    tag = schedule.tag
    if tag in (LS_BOUNDED, WEIGHTED_GAUSS):
        return _class_ls_bounded(schedule, family, null, m, t, pi1_hypothesis, extras, eps, cfg)
    if tag == LS_ONESIDED_GAUSS:
        if not _is_gaussian(family):
            raise ConfigurationError("the one-sided location class is for the Gaussian family")
        b = null.b if isinstance(null, OneSidedNull) else 0.0
        gp = float(_need(extras, "gamma_prime"))
        if "params" in extras:
            mu = np.asarray(extras["params"], dtype=float) - b
            gap, msq = min_gap_onesided(mu, 0.0), float(np.mean(mu**2))
        else:
            gap, msq = float(_need(extras, "gap")), float(_need(extras, "mean_square"))
        preds = [
            _exact("0<gamma<gamma_prime<0.5", g, gp, 0 < g < gp < 0.5),
            _little_o("speed_gap", (1 + _gap_inverse(gap)) / t, pi1_hypothesis, eps),
            _little_o("mean_square", msq, m ** (1 - 2 * gp), eps),
        ]
        return MembershipReport("gaussian-one-sided", preds, {"t": t, "gap": gap}, eps)
    if not isinstance(family, GammaNEF):
        raise ConfigurationError(f"{tag} needs the Gamma family")
    sig = family.shape
    u3 = schedule.u3 if schedule.u3 is not None else u3_default(m)
    if "params" in extras:
        th = np.asarray(extras["params"], dtype=float)
        sup1 = float(np.max(np.abs(1.0 - th)))
        if tag == GAMMA_BOUNDED:
            nb = null if isinstance(null, BoundedNull) else None
            if nb is None:
                raise ConfigurationError("GAMMA_BOUNDED needs a bounded null")
            gap = u3_gap_bounded(th, gamma_theta(family, nb.a), gamma_theta(family, nb.b))
        else:
            gap = u3_gap_onesided(th, gamma_theta(family, null.b))
    else:
        gap = float(_need(extras, "gap"))
        sup1 = float(_need(extras, "sup_one_minus_theta"))
    quantities = {"t": t, "u3": u3, "gap": gap}
    rhs_growth = m ** (1 - g) * pi1_hypothesis**2
    if tag == GAMMA_BOUNDED:
        if sig >= 11 / 4:
            name = "gamma-bounded-large-shape"
            growth = sup1 ** (sig - 0.75) * t ** (2.75 - sig)
            gamma_ok = 0 < g <= 1
        elif sig <= 3 / 4:
            name = "gamma-bounded-small-shape"
            growth = (g * lnm) ** (2.75 - sig) * u3**2
            gamma_ok = 0 < g < 1
        else:
            raise ConfigurationError(f"no consistency class is available for shape {sig} in (3/4, 11/4)")
    else:
        if sig >= 11 / 4:
            name = "gamma-onesided-large-shape"
            ltil = max(sup1 ** (sig - 2.75), sup1 ** (sig - 0.75))
            gamma_ok = 0 < g <= 1
        elif sig <= math.sqrt(2) / 2:
            name = "gamma-onesided-small-shape"
            ltil = max(u3 ** (sig - 0.75), u3 ** (sig - 2.75))
            gamma_ok = 0 < g < 1
        else:
            raise ConfigurationError(f"no consistency class is available for shape {sig} in (sqrt(2)/2, 11/4)")
        growth = (u3 * g * lnm) ** (2.75 - sig) * ltil
        quantities["l_tilde"] = ltil
    preds = [
        _exact("gamma_range", g, 1.0, gamma_ok),
        _little_o("speed_gap", (1 + _gap_inverse(gap)) / t, pi1_hypothesis, eps),
        _big_o("t_diverges", 1.0, t, eps),
        _little_o("variance_growth", growth, rhs_growth, eps),
    ]
    return MembershipReport(name, preds, quantities, eps)


def _class_ls_bounded(schedule, family, null, m, t, pi1, extras, eps, cfg):
    if not isinstance(family, LocationShift):
        raise ConfigurationError(f"{schedule.tag} needs a location-shift family")
    if not isinstance(null, (BoundedNull, FunctionalSpec)):
        raise ConfigurationError(f"{schedule.tag} needs a bounded or phi-weighted null")
    a, b = null.a, null.b
    g = schedule.gamma
    q = float(_need(extras, "q"))
    vt = float(_need(extras, "vartheta"))
    vtp = float(_need(extras, "vartheta_prime"))
    rho = float(_need(extras, "rho"))
    gap = min_gap_bounded(extras["params"], a, b) if "params" in extras else float(_need(extras, "gap"))
    gamma_m = g * math.log(m)
    radius = _radius(family, a, b, rho)
    upsilon = 2 / math.sqrt(m) * math.sqrt(2 * q * gamma_m) * g_factor(family, t, cfg)
    quantities = {"t": t, "gap": gap, "gamma_m": gamma_m, "R_rho": radius, "Upsilon": upsilon}
    if gamma_m > 1 and math.log(gamma_m) > 0:
        p_tau = [
            2 * m**vt * gamma_m**2 * math.exp(-q * gamma_m)
            + 4 * abs_variance(family, tau) * q * gamma_m * m ** (-2 * vt) / math.log(gamma_m) ** 2
            for tau in (0.0, a, b)
        ]
        quantities["p_star"] = 3 * max(p_tau)
    preds = [
        _exact("vartheta>1/2", vt, 0.5, vt > 0.5),
        _exact("0<=vartheta_prime<vartheta-1/2", vtp, vt - 0.5, 0 <= vtp < vt - 0.5),
        _big_o("R(rho)=O(m^vartheta_prime)", radius, m**vtp, eps),
    ]
    if schedule.tag == LS_BOUNDED:
        preds = [
            _exact("q*gamma>vartheta", q * g, vt, q * g > vt),
            _exact("gamma>0", g, 0.0, g > 0),
        ] + preds + [
            _exact("tau_m<=gamma_m", t, gamma_m, t <= gamma_m),
            _little_o("speed_gap", (1 + _gap_inverse(gap)) / t, pi1, eps),
            _little_o("t*Upsilon", t * upsilon, pi1, eps),
        ]
        return MembershipReport("location-bounded", preds, quantities, eps)
    preds.insert(0, _exact("0<gamma<0.5", g, 0.5, 0 < g < 0.5))
    if extras.get("corrected", True):
        preds.append(_little_o("speed_gap", (1 + _gap_inverse(gap)) / t, pi1, eps))
        name = "gaussian-weighted-corrected"
    else:
        preds.append(_little_o("speed", 1 / t, pi1, eps))
        name = "gaussian-weighted-uncorrected"
    return MembershipReport(name, preds, quantities, eps)
