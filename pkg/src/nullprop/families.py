"""Distribution families: Type I location-shift families and the Gamma NEF.

Location-shift members are indexed by their location ``mu`` with a common
scale ``sigma``. The Gamma family is indexed by its natural parameter
``theta < 1``; its density is proportional to ``x**(sigma-1) * exp(-(1-theta) x)``
so the mean is ``sigma / (1 - theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate, special

from .errors import ConfigurationError, DomainError, NumericRangeError, UnsupportedConstruction
from .numerics import DEFAULT_QUADRATURE, QuadratureConfig, integrate_1d

__all__ = [
    "LOCATION_KINDS",
    "LocationShift",
    "GammaNEF",
    "Family",
    "ParameterVector",
    "family_from_name",
    "modulus_recip",
    "modulus_recip_s_deriv",
    "g_factor",
    "dominates",
    "sample",
    "cdf",
    "pdf",
    "gamma_moment_data",
    "log_a_tilde",
    "gamma_mean",
    "gamma_theta",
    "mean_abs",
    "abs_variance",
]

LOCATION_KINDS = ("gaussian", "laplace", "logistic", "cauchy", "hsecant")

# exp() of anything larger overflows or is too close to it to be useful
_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class LocationShift:
    kind: str
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in LOCATION_KINDS:
            raise ConfigurationError(f"unknown location-shift kind {self.kind!r}; choose from {LOCATION_KINDS}")
        if not self.scale > 0:
            raise ConfigurationError(f"scale must be > 0, got {self.scale}")

    @property
    def sigma(self) -> float:
        return self.scale


@dataclass(frozen=True)
class GammaNEF:
    """Gamma natural exponential family with fixed shape ``sigma``."""

    shape: float

    def __post_init__(self):
        if not self.shape > 0:
            raise ConfigurationError(f"shape must be > 0, got {self.shape}")

    @property
    def sigma(self) -> float:
        return self.shape


Family = Union[LocationShift, GammaNEF]


def family_from_name(name: str, sigma: float) -> Family:
    name = name.lower()
    if name == "gamma":
        return GammaNEF(sigma)
    return LocationShift(name, sigma)


@dataclass(frozen=True)
class ParameterVector:
    """Means (location-shift) or natural parameters (Gamma) of m hypotheses."""

    values: np.ndarray
    family: Family

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ConfigurationError("a parameter vector needs at least one entry")
        if isinstance(self.family, GammaNEF) and np.any(vals >= 1):
            raise DomainError("Gamma natural parameters must all be < 1")
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.values.size

    def means(self) -> np.ndarray:
        if isinstance(self.family, GammaNEF):
            return gamma_mean(self.family, self.values)
        return self.values


def _require_location(family, what):
    if not isinstance(family, LocationShift):
        raise UnsupportedConstruction(f"{what} is only defined for location-shift families, got {family!r}")


def _checked_exp(arg):
    arg = np.asarray(arg, dtype=float)
    if np.any(arg > _EXP_LIMIT):
        raise NumericRangeError(f"exponent {float(np.max(arg)):.4g} exceeds {_EXP_LIMIT}; reduce t")
    return np.exp(arg)


def _sinhc(u):
    # sinh(u)/u, = 1 at u = 0
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    if np.any(au > _EXP_LIMIT):
        raise NumericRangeError(f"sinh argument {float(np.max(au)):.4g} exceeds {_EXP_LIMIT}; reduce t")
    out = np.ones_like(u)
    small = au < 1e-4
    out[small] = 1.0 + u[small] ** 2 / 6.0
    big = ~small
    out[big] = np.sinh(u[big]) / u[big]
    return out


def modulus_recip(family: Family, t):
    """Reciprocal 1/r_0(t) of the characteristic-function modulus at location 0.

    For the hyperbolic secant family the value ``sigma * cosh(t / sigma)`` is
    returned; it equals the reciprocal modulus only when ``sigma == 1``.
    """
    _require_location(family, "modulus_recip")
    t = np.asarray(t, dtype=float)
    sig = family.scale
    kind = family.kind
    if kind == "gaussian":
        out = _checked_exp(0.5 * (t * sig) ** 2)
    elif kind == "laplace":
        out = 1.0 + (sig * t) ** 2
    elif kind == "logistic":
        out = _sinhc(math.pi * sig * t)
    elif kind == "cauchy":
        out = _checked_exp(sig * np.abs(t))
    else:  # hsecant
        arg = np.abs(t) / sig
        if np.any(arg > _EXP_LIMIT):
            raise NumericRangeError(f"cosh argument {float(np.max(arg)):.4g} exceeds {_EXP_LIMIT}")
        out = sig * np.cosh(arg)
    return float(out) if out.ndim == 0 else out


def modulus_recip_s_deriv(family: Family, t, y, s):
    """(1/y) * d/ds [1/r_0(t*y*s)], continuous at y = 0.

    Only families with a finite first absolute moment qualify; Cauchy raises
    :class:`UnsupportedConstruction`.
    """
    _require_location(family, "modulus_recip_s_deriv")
    t, y, s = (np.asarray(v, dtype=float) for v in (t, y, s))
    sig = family.scale
    kind = family.kind
    if kind == "cauchy":
        raise UnsupportedConstruction(
            "the one-sided construction cannot be applied to the Cauchy family: "
            "its members have no finite first absolute moment"
        )
    if kind == "gaussian":
        out = sig**2 * s * t**2 * y * _checked_exp(0.5 * (t * y * s * sig) ** 2)
    elif kind == "laplace":
        out = 2.0 * sig**2 * t**2 * y * s
    elif kind == "logistic":
        c = math.pi * sig
        u = np.asarray(c * t * y * s, dtype=float)
        au = np.abs(u)
        if np.any(au > _EXP_LIMIT):
            raise NumericRangeError(f"sinh argument {float(np.max(au)):.4g} exceeds {_EXP_LIMIT}")
        # d/du [sinh(u)/u] = (u cosh u - sinh u)/u^2 ~ u/3 + u^3/30 near 0
        du = np.empty_like(u)
        small = au < 1e-3
        du[small] = u[small] / 3.0 + u[small] ** 3 / 30.0
        big = ~small
        ub = u[big]
        du[big] = (ub * np.cosh(ub) - np.sinh(ub)) / ub**2
        out = c * t * du
    else:  # hsecant, derivative of sigma*cosh(t*y*s/sigma)
        arg = t * y * s / sig
        if np.any(np.abs(arg) > _EXP_LIMIT):
            raise NumericRangeError("sinh argument exceeds overflow guard")
        out = t * np.sinh(arg)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def g_factor(family: Family, t: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Average reciprocal modulus: integral of 1/r_0(ts) over s in [-1, 1]."""
    _require_location(family, "g_factor")
    return integrate_1d(lambda s: modulus_recip(family, t * s), -1.0, 1.0, cfg)


def dominates(f1: LocationShift, f2: LocationShift, t) -> bool:
    """True when r_{1}(t) >= r_{2}(t) at every supplied t (pointwise ordering check)."""
    return bool(np.all(1.0 / np.asarray(modulus_recip(f1, t)) >= 1.0 / np.asarray(modulus_recip(f2, t))))


def _check_gamma_theta(theta):
    if np.any(np.asarray(theta) >= 1):
        raise DomainError(f"Gamma natural parameter must be < 1, got {theta}")


def gamma_mean(family: GammaNEF, theta):
    _check_gamma_theta(theta)
    out = family.shape / (1.0 - np.asarray(theta, dtype=float))
    return float(out) if out.ndim == 0 else out


def gamma_theta(family: GammaNEF, mean):
    """Natural parameter whose mean is ``mean`` (mean must be positive)."""
    if np.any(np.asarray(mean) <= 0):
        raise DomainError(f"Gamma means must be positive, got {mean}")
    out = 1.0 - family.shape / np.asarray(mean, dtype=float)
    return float(out) if out.ndim == 0 else out


def log_a_tilde(family: GammaNEF, n):
    """log of Gamma(n + sigma) / Gamma(sigma)."""
    n = np.asarray(n, dtype=float)
    return special.gammaln(n + family.shape) - special.gammaln(family.shape)


def gamma_moment_data(family: GammaNEF, n: int, theta: float):
    """Return ``(xi(theta), a_tilde_n)`` for the separable Gamma moments."""
    if not isinstance(family, GammaNEF):
        raise UnsupportedConstruction("moment data is only defined for the Gamma family")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    _check_gamma_theta(theta)
    return 1.0 / (1.0 - theta), float(np.exp(log_a_tilde(family, n)))


def sample(family: Family, param, rng: np.random.Generator, size=None):
    """Draw from F_param (location-shift) or G_param (Gamma).

    ``param`` may be an array, in which case one draw per entry is returned
    unless ``size`` says otherwise.
    """
    param = np.asarray(param, dtype=float)
    if size is None:
        size = param.shape
    if isinstance(family, GammaNEF):
        _check_gamma_theta(param)
        out = rng.gamma(family.shape, 1.0, size=size) / (1.0 - param)
    else:
        sig = family.scale
        kind = family.kind
        if kind == "gaussian":
            z = rng.standard_normal(size)
        elif kind == "laplace":
            z = rng.laplace(0.0, 1.0, size)
        elif kind == "logistic":
            z = rng.logistic(0.0, 1.0, size)
        elif kind == "cauchy":
            z = rng.standard_cauchy(size)
        else:
            # characteristic function sech(t/sigma): X = (2/(pi sigma)) log tan(pi U / 2)
            u = rng.uniform(size=size)
            z = (2.0 / math.pi) * np.log(np.tan(0.5 * math.pi * u)) / sig**2
        out = param + sig * z
    return float(out) if np.ndim(out) == 0 else out


def cdf(family: Family, param, x):
    """Exact CDF of F_param (or G_param) at x."""
    param = np.asarray(param, dtype=float)
    x = np.asarray(x, dtype=float)
    if isinstance(family, GammaNEF):
        _check_gamma_theta(param)
        out = special.gammainc(family.shape, np.clip((1.0 - param) * x, 0.0, None))
    else:
        z = (x - param) / family.scale
        kind = family.kind
        if kind == "gaussian":
            out = special.ndtr(z)
        elif kind == "laplace":
            out = np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))
        elif kind == "logistic":
            out = special.expit(z)
        elif kind == "cauchy":
            out = 0.5 + np.arctan(z) / math.pi
        else:
            out = (2.0 / math.pi) * np.arctan(np.exp(0.5 * math.pi * z * family.scale**2))
    return float(out) if np.ndim(out) == 0 else out


def pdf(family: Family, param, x):
    param = np.asarray(param, dtype=float)
    x = np.asarray(x, dtype=float)
    if isinstance(family, GammaNEF):
        _check_gamma_theta(param)
        sig = family.shape
        rate = 1.0 - param
        with np.errstate(divide="ignore"):
            logf = sig * np.log(rate) + (sig - 1.0) * np.log(np.where(x > 0, x, 1.0)) - rate * x - special.gammaln(sig)
        out = np.where(x > 0, np.exp(logf), 0.0)
    else:
        sig = family.scale
        z = (x - param) / sig
        kind = family.kind
        if kind == "gaussian":
            out = np.exp(-0.5 * z**2) / (math.sqrt(2 * math.pi) * sig)
        elif kind == "laplace":
            out = np.exp(-np.abs(z)) / (2 * sig)
        elif kind == "logistic":
            e = np.exp(-np.abs(z))
            out = e / (1.0 + e) ** 2 / sig
        elif kind == "cauchy":
            out = 1.0 / (math.pi * sig * (1.0 + z**2))
        else:
            c = 0.5 * math.pi * sig * sig
            e = np.exp(-np.abs(c * z))
            out = sig * e / (1.0 + e * e)
    return float(out) if np.ndim(out) == 0 else out


def mean_abs(family: Family, param: float) -> float:
    """E|X| for X ~ F_param (G_param for Gamma)."""
    if isinstance(family, GammaNEF):
        return float(gamma_mean(family, param))
    sig = family.scale
    kind = family.kind
    if kind == "cauchy":
        return math.inf
    if kind == "gaussian":
        return float(sig * math.sqrt(2 / math.pi) * math.exp(-0.5 * (param / sig) ** 2)
                     + param * (1 - 2 * special.ndtr(-param / sig)))
    if kind == "laplace":
        return abs(param) + sig * math.exp(-abs(param) / sig)
    val, _ = integrate.quad(lambda x: abs(x) * pdf(family, param, x), -np.inf, np.inf, points=None, limit=200)
    return float(val)


def abs_variance(family: Family, param: float) -> float:
    """Variance of |X| for X ~ F_param; infinite for Cauchy."""
    if isinstance(family, GammaNEF):
        return float(family.shape / (1.0 - param) ** 2)
    sig = family.scale
    second = {
        "gaussian": sig**2,
        "laplace": 2 * sig**2,
        "logistic": math.pi**2 * sig**2 / 3,
        "cauchy": math.inf,
        "hsecant": 1.0 / sig**2,
    }[family.kind]
    if math.isinf(second):
        return math.inf
    return param**2 + second - mean_abs(family, param) ** 2
