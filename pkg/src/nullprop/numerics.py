"""Oscillatory-integral primitives.

Every integral in the package is a composite midpoint sum on an equally
spaced partition whose panel width never exceeds ``partition_norm``.
Removable singularities (``sin(x)/x`` at 0) are replaced by their limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError, QuadratureResourceError

__all__ = [
    "QuadratureConfig",
    "WeightFunction",
    "triangular_weight",
    "uniform_weight",
    "get_weight",
    "midpoint_nodes",
    "integrate_1d",
    "sine_integral",
    "dirichlet_window",
    "dirichlet_halfline",
    "weighted_dirichlet",
    "fourier_decay_bound",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Riemann-sum settings.

    ``partition_norm`` is the largest allowed panel width; ``max_panels``
    caps the number of panels for any single interval.
    """

    partition_norm: float = 0.01
    max_panels: int = 10_000_000

    def __post_init__(self):
        if not self.partition_norm > 0:
            raise ConfigurationError(f"partition_norm must be > 0, got {self.partition_norm}")
        if self.max_panels < 1:
            raise ConfigurationError(f"max_panels must be >= 1, got {self.max_panels}")


DEFAULT_QUADRATURE = QuadratureConfig()


def midpoint_nodes(a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Return ``(nodes, width)`` of the midpoint rule on ``[a, b]``.

    The number of panels is ``ceil((b - a) / partition_norm)`` so the
    realised width is at most the partition norm and the endpoints are hit
    exactly.
    """
    if b < a:
        raise ConfigurationError(f"integration interval reversed: [{a}, {b}]")
    length = b - a
    if length == 0:
        return np.empty(0), 0.0
    n = max(1, math.ceil(length / cfg.partition_norm - 1e-9))
    if n > cfg.max_panels:
        raise QuadratureResourceError(
            f"[{a}, {b}] needs {n} panels at norm {cfg.partition_norm}; cap is {cfg.max_panels}"
        )
    h = length / n
    return a + h * (np.arange(n) + 0.5), h


def integrate_1d(f: Callable, a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Composite midpoint approximation of the integral of ``f`` over ``[a, b]``.

    ``f`` must accept a numpy array of nodes and return an array of the same
    shape.
    """
    x, h = midpoint_nodes(a, b, cfg)
    if x.size == 0:
        return 0.0
    return float(h * np.sum(f(x)))


@dataclass(frozen=True)
class WeightFunction:
    """Even probability density on [-1, 1] used to average over frequencies."""

    name: str
    eval: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sup_norm: float
    total_variation: float

    def __call__(self, s):
        return self.eval(np.asarray(s, dtype=float))


def _triangular(s):
    return np.clip(1.0 - np.abs(s), 0.0, None)


def _uniform(s):
    return np.where(np.abs(s) <= 1.0, 0.5, 0.0)


def triangular_weight() -> WeightFunction:
    return WeightFunction("triangular", _triangular, sup_norm=1.0, total_variation=2.0)


def uniform_weight() -> WeightFunction:
    return WeightFunction("uniform", _uniform, sup_norm=0.5, total_variation=0.0)


_WEIGHTS = {"triangular": triangular_weight, "uniform": uniform_weight}


def get_weight(name: str) -> WeightFunction:
    try:
        return _WEIGHTS[name]()
    except KeyError:
        raise ConfigurationError(f"unknown weight function {name!r}; choose from {sorted(_WEIGHTS)}") from None


def _sinc(x):
    # sin(x)/x with the removable singularity filled in
    out = np.ones_like(x)
    nz = x != 0
    out[nz] = np.sin(x[nz]) / x[nz]
    return out


def _si_scalar(t: float, cfg: QuadratureConfig) -> float:
    if t == 0:
        return 0.0
    sign = 1.0 if t > 0 else -1.0
    return sign * integrate_1d(_sinc, 0.0, abs(t), cfg)


def sine_integral(t, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Si(t) = integral of sin(x)/x over [0, t] by midpoint quadrature.

    Negative arguments use the oddness of Si. Array input is evaluated
    elementwise.
    """
    if np.ndim(t) == 0:
        return _si_scalar(float(t), cfg)
    arr = np.asarray(t, dtype=float)
    return np.array([_si_scalar(v, cfg) for v in arr.ravel()]).reshape(arr.shape)


def dirichlet_window(t: float, mu, a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """(1/pi) * integral of sin(y)/y over [(mu-b)t, (mu-a)t].

    Tends to 1 inside (a, b), 1/2 at the endpoints and 0 outside.
    """
    if not a < b:
        raise ConfigurationError(f"invalid interval: a={a} must be < b={b}")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    mu = np.asarray(mu, dtype=float)
    val = (sine_integral((mu - a) * t, cfg) - sine_integral((mu - b) * t, cfg)) / math.pi
    return float(val) if np.ndim(val) == 0 else val


def dirichlet_halfline(t: float, mu, b: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """(1/pi) * integral of sin((mu-b)y)/y over [0, t] = sign(mu-b) Si(|mu-b|t)/pi."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    mu = np.asarray(mu, dtype=float)
    val = sine_integral((mu - b) * t, cfg) / math.pi
    return float(val) if np.ndim(val) == 0 else val


def weighted_dirichlet(
    t: float,
    mu,
    a: float,
    b: float,
    phi: Callable,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """(1/pi) * integral over [a, b] of sin((mu-y)t)/(mu-y) * phi(y) dy.

    The node y = mu, if hit, contributes t * phi(mu) / pi.
    """
    if not a < b:
        raise ConfigurationError(f"invalid interval: a={a} must be < b={b}")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    scalar = np.ndim(mu) == 0
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    y, h = midpoint_nodes(a, b, cfg)
    phi_y = np.asarray(phi(y), dtype=float)
    d = mu[:, None] - y[None, :]
    kern = t * _sinc(d * t)
    val = h * (kern @ phi_y) / math.pi
    return float(val[0]) if scalar else val


def fourier_decay_bound(tv: float, sup: float, a1: float, b1: float, t: float) -> float:
    """Upper bound 2(b1-a1)(tv+sup)/|t| on |integral of f(s) cos(ts) ds| over [a1, b1]."""
    if not a1 < b1:
        raise ConfigurationError(f"invalid interval: a1={a1} must be < b1={b1}")
    if t == 0:
        raise DomainError("the Fourier decay bound is undefined at t = 0")
    if tv < 0 or sup < 0:
        raise DomainError("tv and sup must be non-negative")
    return 2.0 * (b1 - a1) * (tv + sup) / abs(t)
