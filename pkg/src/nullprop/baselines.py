"""Comparison estimators that work from one-sided p-values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .families import Family, cdf

__all__ = ["PValueVector", "one_sided_pvalue", "mr_estimate", "storey_estimate", "StoreyResult", "DEFAULT_LAMBDAS"]

DEFAULT_LAMBDAS = tuple(round(0.05 * k, 2) for k in range(1, 20))


@dataclass(frozen=True)
class PValueVector:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if np.any(np.isnan(v)) or np.any((v < 0) | (v > 1)):
            raise DomainError("p-values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.values.size


def _as_pvalues(p) -> np.ndarray:
    return p.values if isinstance(p, PValueVector) else PValueVector(p).values


def one_sided_pvalue(x, family: Family, b: float):
    """1 - F_b(x), the upper-tail p-value against the boundary parameter ``b``."""
    out = np.clip(1.0 - np.asarray(cdf(family, b, x), dtype=float), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def mr_estimate(p) -> float:
    """Clamped maximum over ranks 2..m-2 of the bounding-function statistic.

    Ranks whose p-value equals 1 are skipped.
    """
    v = np.sort(_as_pvalues(p), kind="stable")
    m = v.size
    if m <= 4:
        raise DomainError(f"the MR estimator needs m > 4, got {m}")
    b_star = math.sqrt(2.0 * math.log(math.log(m))) / math.sqrt(m)
    i = np.arange(2, m - 1)
    pi = v[i - 1]
    keep = pi < 1.0
    i, pi = i[keep], pi[keep]
    if i.size == 0:
        return 0.0
    q = (i / m - pi - b_star * np.sqrt(pi * (1.0 - pi))) / (1.0 - pi)
    return float(min(1.0, max(0.0, float(q.max()))))


@dataclass(frozen=True)
class StoreyResult:
    estimate: float
    lam: float
    profile: tuple  # (lambda, pi1_hat) pairs over the whole grid


def storey_estimate(p, lambdas: Sequence[float] = DEFAULT_LAMBDAS, at: float = None) -> StoreyResult:
    """1 - min(1, #{p > lambda} / (m (1 - lambda))), clamped to [0, 1].

    Evaluated at ``at`` (which must be on the grid) or at the last grid value.
    """
    v = _as_pvalues(p)
    if v.size == 0:
        raise DomainError("need at least one p-value")
    lams = [float(x) for x in lambdas]
    if not lams:
        raise ConfigurationError("the lambda grid is empty")
    if any(not 0 < x < 1 for x in lams) or lams != sorted(lams):
        raise ConfigurationError("lambdas must be ascending values in (0, 1)")
    m = v.size
    profile = []
    for lam in lams:
        pi0 = np.count_nonzero(v > lam) / (m * (1.0 - lam))
        profile.append((lam, 1.0 - min(1.0, max(0.0, pi0))))
    chosen = lams[-1] if at is None else float(at)
    for lam, est in profile:
        if lam == chosen:
            return StoreyResult(est, lam, tuple(profile))
    raise ConfigurationError(f"lambda {at} is not on the grid")
