"""Matching functions K and discriminant functions psi.

Every ``k_*`` function is vectorised over the observation ``x`` and returns
a Riemann-sum evaluation of an iterated integral on the configured
partition. Finite sums over quadrature nodes and over series terms are
reordered where that lets the x-independent part be computed once; the
discretisation itself is unchanged.

For a location-shift family the parameter is the location ``mu``. For the
Gamma family the parameter is the natural parameter ``theta`` while null
bounds are given on the mean scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy import special

from .errors import ConfigurationError, DomainError, NumericRangeError, UnsupportedConstruction
from .families import (
    Family,
    GammaNEF,
    LocationShift,
    gamma_mean,
    gamma_theta,
    log_a_tilde,
    modulus_recip,
    modulus_recip_s_deriv,
)
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    WeightFunction,
    dirichlet_halfline,
    dirichlet_window,
    midpoint_nodes,
    triangular_weight,
    weighted_dirichlet,
)

__all__ = [
    "PointNull",
    "BoundedNull",
    "OneSidedNull",
    "NullSpec",
    "FunctionalSpec",
    "SeriesConfig",
    "PSI_QUADRATURE",
    "KernelPair",
    "k_point_ls",
    "psi_point_ls",
    "k_bounded_ls",
    "psi_bounded_ls",
    "k_onesided_ls",
    "psi_onesided_ls",
    "k_bounded_gamma",
    "k_onesided_gamma",
    "k_point_gamma",
    "psi_point_gamma",
    "k_weighted",
    "psi_weighted",
    "compose_full_kernel",
    "compose_functional_kernel",
]

# Population-side integrals oscillate at frequency ~ t*|mu - mu'|, so they get a
# finer partition than the estimator's kernels.
PSI_QUADRATURE = QuadratureConfig(partition_norm=1e-4)

_LOG_LIMIT = 700.0
_CHUNK_ELEMS = 2_000_000


@dataclass(frozen=True)
class PointNull:
    mu0: float


@dataclass(frozen=True)
class BoundedNull:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise ConfigurationError(f"bounded null needs finite a < b, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class OneSidedNull:
    b: float


NullSpec = Union[PointNull, BoundedNull, OneSidedNull]


@dataclass(frozen=True)
class FunctionalSpec:
    """A continuous, bounded-variation weight phi on [a, b]."""

    phi: Callable = field(repr=False)
    a: float
    b: float
    sup_norm: float
    total_variation: float
    name: str = "phi"

    def __post_init__(self):
        if not self.a < self.b:
            raise ConfigurationError(f"functional interval needs a < b, got ({self.a}, {self.b})")
        if not math.isfinite(self.total_variation):
            raise ConfigurationError("phi must have finite total variation")

    def __call__(self, y):
        return np.asarray(self.phi(np.asarray(y, dtype=float)), dtype=float)

    @classmethod
    def constant(cls, a: float, b: float, value: float = 1.0) -> "FunctionalSpec":
        return cls(lambda y: np.full_like(y, value, dtype=float), a, b, abs(value), 0.0, name=f"const{value:g}")

    @classmethod
    def truncated_square(cls, b: float) -> "FunctionalSpec":
        """phi(y) = y**2 on [-b, b]."""
        return cls(lambda y: np.where(np.abs(y) <= b, y**2, 0.0), -b, b, b**2, 2 * b**2, name="truncated_square")


@dataclass(frozen=True)
class SeriesConfig:
    truncation: int = 25

    def __post_init__(self):
        if self.truncation < 1:
            raise ConfigurationError(f"series truncation must be >= 1, got {self.truncation}")


class KernelPair(NamedTuple):
    """A matching function ``K(t, x)`` and its discriminant ``psi(t, param)``."""

    K: Callable
    psi: Callable


def _chunked(fn, x, width):
    """Apply ``fn`` to slices of the flat array ``x`` sized to bound memory."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    step = max(1, _CHUNK_ELEMS // max(width, 1))
    out = np.empty(flat.size)
    for i in range(0, flat.size, step):
        out[i:i + step] = fn(flat[i:i + step])
    return out.reshape(x.shape)


def _interpolated(fn, x, bandwidth, width):
    """Evaluate ``fn`` over ``x`` through a Chebyshev interpolant on [min x, max x].

    ``fn`` must be a band-limited function of x (frequencies at most
    ``bandwidth``) times a polynomial of low degree. The interpolation degree
    is raised until the trailing coefficients are at roundoff level; when
    that is not cheaper than summing directly, ``fn`` is applied to every x.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    if flat.size >= 256:
        lo, hi = float(flat.min()), float(flat.max())
        mid, half = 0.5 * (lo + hi), max(0.5 * (hi - lo), 1e-12)
        deg = int(1.2 * bandwidth * half) + 40
        while deg <= flat.size // 8:
            coef = np.polynomial.chebyshev.chebinterpolate(lambda u: fn(mid + half * u), deg)
            if np.max(np.abs(coef[-6:])) <= 1e-13 * np.max(np.abs(coef)):
                return np.polynomial.chebyshev.chebval((flat - mid) / half, coef).reshape(x.shape)
            deg *= 2
    return _chunked(fn, x, width)


def _scalar_out(x, val):
    return float(val) if np.ndim(x) == 0 else val


def _require_ls(family, what):
    if not isinstance(family, LocationShift):
        raise UnsupportedConstruction(f"{what} needs a location-shift family, got {family!r}")


def _require_gamma(family, what):
    if not isinstance(family, GammaNEF):
        raise UnsupportedConstruction(f"{what} needs the Gamma family, got {family!r}")


# ---------------------------------------------------------------------------
# point nulls
# ---------------------------------------------------------------------------


def k_point_ls(t, x, mu_ref, family: Family, omega: WeightFunction = None, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Integral over s of omega(s) cos(ts(x - mu_ref)) / r_0(ts)."""
    _require_ls(family, "k_point_ls")
    omega = omega or triangular_weight()
    s, h = midpoint_nodes(-1.0, 1.0, cfg)
    w = h * omega(s) * modulus_recip(family, t * s)
    ts = t * s

    def block(xb):
        return np.cos(np.outer(xb - mu_ref, ts)) @ w

    return _scalar_out(x, _chunked(block, x, s.size))


def psi_point_ls(t, mu, mu_ref, omega: WeightFunction = None, cfg: QuadratureConfig = PSI_QUADRATURE):
    """Integral over s of omega(s) cos(ts(mu - mu_ref)); equals 1 at mu = mu_ref."""
    omega = omega or triangular_weight()
    s, h = midpoint_nodes(-1.0, 1.0, cfg)
    w = h * omega(s)
    ts = t * s

    def block(mb):
        return np.cos(np.outer(mb - mu_ref, ts)) @ w

    return _scalar_out(mu, _chunked(block, mu, s.size))


def k_point_gamma(
    t,
    x,
    theta_ref: float,
    family: Family,
    omega: WeightFunction = None,
    series: SeriesConfig = SeriesConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Truncated-series point-null kernel for the Gamma family (zeta = 1)."""
    _require_gamma(family, "k_point_gamma")
    omega = omega or triangular_weight()
    xi_ref = 1.0 / (1.0 - theta_ref)
    n = np.arange(series.truncation + 1)
    s, h = midpoint_nodes(-1.0, 1.0, cfg)
    phase = 0.5 * math.pi * n[:, None] + t * s[None, :] * xi_ref
    # Q_n = sum_s h omega(s) s^n cos(n pi/2 + t s xi')
    q = (np.cos(phase) * s[None, :] ** n[:, None]) @ (h * omega(s))
    signs = (-1.0) ** n
    log_c = -log_a_tilde(family, n) - special.gammaln(n + 1.0)
    return _scalar_out(x, _series_eval(x, t, n, log_c, signs * q))


def psi_point_gamma(t, theta, theta_ref, omega: WeightFunction = None, cfg: QuadratureConfig = PSI_QUADRATURE):
    """Integral of cos(ts(xi(theta') - xi(theta))) omega(s) ds; equals 1 at theta = theta'."""
    theta = np.asarray(theta, dtype=float)
    xi = 1.0 / (1.0 - theta)
    xi_ref = 1.0 / (1.0 - theta_ref)
    return psi_point_ls(t, xi if xi.ndim else float(xi), xi_ref, omega, cfg)


def _series_eval(x, t, n, log_c, coef, power_shift=0):
    """Sum_n exp((n + power_shift) log(x) + n log(t) + log_c[n]) * coef[n] over x.

    Used for all Gamma kernels: the x-dependence of each term is a pure power.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("Gamma observations must be non-negative")
    nn = n.astype(float)
    logt = math.log(t) if t > 0 else -math.inf

    def block(xb):
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.log(xb)[:, None]
            pw = nn[None, :] + power_shift
            lt = np.where(nn == 0, 0.0, nn * logt)[None, :]
            lxp = np.where(pw == 0, 0.0, pw * lx)
            logterm = lxp + lt + log_c[None, :]
        if np.any(logterm > _LOG_LIMIT):
            raise NumericRangeError(
                f"series term exp({float(np.nanmax(logterm)):.4g}) overflows at t={t}; reduce t or x"
            )
        return np.exp(logterm) @ coef

    return _chunked(block, x, n.size)


# ---------------------------------------------------------------------------
# bounded nulls (and their phi-weighted generalisation)
# ---------------------------------------------------------------------------


def _outer_moments(t, a, b, phi, cfg):
    """C_s, S_s = sum_y h phi(y) cos(tsy), sin(tsy) over the outer y partition."""
    s, hs = midpoint_nodes(-1.0, 1.0, cfg)
    y, hy = midpoint_nodes(a, b, cfg)
    py = hy * (phi(y) if phi is not None else np.ones_like(y))
    arg = t * np.outer(s, y)
    return s, hs, np.cos(arg) @ py, np.sin(arg) @ py


def _k1_ls(t, x, family, a, b, phi, cfg):
    s, hs, c_s, s_s = _outer_moments(t, a, b, phi, cfg)
    r = hs * modulus_recip(family, t * s)
    wc, ws = r * c_s, r * s_s
    ts = t * s

    def block(xb):
        arg = np.outer(xb, ts)
        return np.cos(arg) @ wc + np.sin(arg) @ ws

    return t / (2 * math.pi) * _chunked(block, x, s.size)


def k_bounded_ls(t, x, null: BoundedNull, family: Family, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """(t/2pi) * int_a^b dy int_{-1}^{1} cos(ts(x-y)) / r_0(ts) ds."""
    _require_ls(family, "k_bounded_ls")
    return _scalar_out(x, _k1_ls(t, x, family, null.a, null.b, None, cfg))


def psi_bounded_ls(t, mu, null: BoundedNull, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    return dirichlet_window(t, mu, null.a, null.b, cfg)


def _gamma_bounded_coef(t, a, b, phi, family, series, cfg):
    n = np.arange(series.truncation + 1)
    s, hs, c_s, s_s = _outer_moments(t, a, b, phi, cfg)
    half = 0.5 * math.pi * n
    spow = s[None, :] ** n[:, None]
    # M_n / t^n = sum_s h s^n [cos(n pi/2) C_s + sin(n pi/2) S_s]
    m_n = spow @ (hs * c_s) * np.cos(half) + spow @ (hs * s_s) * np.sin(half)
    log_c = n * math.log(family.shape) - log_a_tilde(family, n) - special.gammaln(n + 1.0)
    return n, log_c, m_n


def k_bounded_gamma(
    t,
    x,
    null: BoundedNull,
    family: Family,
    series: SeriesConfig = SeriesConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Bounded-null kernel for Gamma data; ``null`` bounds are means."""
    _require_gamma(family, "k_bounded_gamma")
    n, log_c, m_n = _gamma_bounded_coef(t, null.a, null.b, None, family, series, cfg)
    return _scalar_out(x, t / (2 * math.pi) * _series_eval(x, t, n, log_c, m_n))


# ---------------------------------------------------------------------------
# one-sided nulls
# ---------------------------------------------------------------------------


def k_onesided_ls(t, x, null: OneSidedNull, family: Family, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Real part of the one-sided kernel K_1 applied to the shifted data x - b.

    Uses the form valid when the s-derivative of 1/r_0 is odd; the integrand
    is then even in s and only s > 0 is summed. Large samples go through a
    Chebyshev interpolant of the node sum, which is band-limited in x.
    """
    _require_ls(family, "k_onesided_ls")
    y, hy = midpoint_nodes(0.0, 1.0, cfg)
    s, hs = midpoint_nodes(-1.0, 1.0, cfg)
    s = s[s > 0]
    yy, ss = np.meshgrid(y, s, indexing="ij")
    yy, ss = yy.ravel(), ss.ravel()
    v = t * yy * ss
    d = np.asarray(modulus_recip_s_deriv(family, t, yy, ss))
    r = np.asarray(modulus_recip(family, v))
    scale = 2.0 * hy * hs / (2 * math.pi)
    wd, wr = scale * d, scale * t * r

    def block(xb):
        arg = np.outer(xb, v)
        return np.sin(arg) @ wd + xb * (np.cos(arg) @ wr)

    xs = np.asarray(x, dtype=float) - null.b
    return _scalar_out(x, _interpolated(block, xs, abs(t), v.size))


def psi_onesided_ls(t, mu, null: OneSidedNull, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """(1/pi) Si((mu - b) t): the expectation of :func:`k_onesided_ls`."""
    return dirichlet_halfline(t, mu, null.b, cfg)


def k_onesided_gamma(
    t,
    x,
    null: OneSidedNull,
    family: Family,
    series: SeriesConfig = SeriesConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """One-sided kernel K_1 for Gamma data; ``null.b`` is a mean."""
    _require_gamma(family, "k_onesided_gamma")
    b = null.b
    sig = family.shape
    n = np.arange(series.truncation + 1)
    y, hy = midpoint_nodes(0.0, 1.0, cfg)
    s, hs = midpoint_nodes(-1.0, 1.0, cfg)
    ys = np.outer(y, s).ravel()
    phase = 0.5 * math.pi * n[:, None] - t * b * ys[None, :]
    # P_n / t^n = sum_{y,s} h (ys)^n cos(n pi/2 - t y s b)
    p_n = (np.cos(phase) * ys[None, :] ** n[:, None]).sum(axis=1) * hy * hs
    lfact = special.gammaln(n + 1.0)
    # (sigma x)^(n+1) / (n! a_{n+1}) term
    log_a = (n + 1) * math.log(sig) - lfact - log_a_tilde(family, n + 1)
    # b (sigma x)^n / (n! a_n) term
    log_b = n * math.log(sig) - lfact - log_a_tilde(family, n)
    first = _series_eval(x, t, n, log_a, p_n, power_shift=1)
    second = _series_eval(x, t, n, log_b, p_n)
    return _scalar_out(x, t / (2 * math.pi) * (first - b * second))


# ---------------------------------------------------------------------------
# phi-weighted bounded kernels
# ---------------------------------------------------------------------------


def k_weighted(
    t,
    x,
    spec: FunctionalSpec,
    family: Family,
    series: SeriesConfig = SeriesConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Uncorrected phi-weighted kernel K_1; its mean is D_phi at the data's mean."""
    if isinstance(family, LocationShift):
        return _scalar_out(x, _k1_ls(t, x, family, spec.a, spec.b, spec, cfg))
    if isinstance(family, GammaNEF):
        n, log_c, m_n = _gamma_bounded_coef(t, spec.a, spec.b, spec, family, series, cfg)
        return _scalar_out(x, t / (2 * math.pi) * _series_eval(x, t, n, log_c, m_n))
    raise UnsupportedConstruction(f"unsupported family {family!r}")


def psi_weighted(t, mean, spec: FunctionalSpec, cfg: QuadratureConfig = PSI_QUADRATURE):
    """D_phi(t, mean; a, b), evaluated on the mean scale."""
    return weighted_dirichlet(t, mean, spec.a, spec.b, spec, cfg)


# ---------------------------------------------------------------------------
# composition of full (corrected) pairs
# ---------------------------------------------------------------------------


def _gamma_theta_of_mean(family, value, what):
    if value <= 0:
        raise ConfigurationError(f"{what}={value} is not a positive Gamma mean")
    return gamma_theta(family, value)


def compose_full_kernel(
    null: NullSpec,
    family: Family,
    omega: WeightFunction = None,
    series: SeriesConfig = SeriesConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    psi_cfg: QuadratureConfig = PSI_QUADRATURE,
) -> KernelPair:
    """Build the boundary-corrected pair (K, psi) for a null geometry.

    ``K(t, x)`` estimates ``psi(t, param)`` without bias; ``1 - psi`` tends to
    the indicator of the alternative as t grows.
    """
    omega = omega or triangular_weight()
    if isinstance(family, LocationShift):
        return _compose_ls(null, family, omega, cfg, psi_cfg)
    if isinstance(family, GammaNEF):
        return _compose_gamma(null, family, omega, series, cfg, psi_cfg)
    raise UnsupportedConstruction(f"unsupported family {family!r}")


def _compose_ls(null, family, omega, cfg, psi_cfg):
    if isinstance(null, PointNull):
        mu0 = null.mu0
        return KernelPair(
            lambda t, x: k_point_ls(t, x, mu0, family, omega, cfg),
            lambda t, mu: psi_point_ls(t, mu, mu0, omega, psi_cfg),
        )
    if isinstance(null, BoundedNull):
        a, b = null.a, null.b

        def K(t, x):
            return k_bounded_ls(t, x, null, family, cfg) - 0.5 * (
                k_point_ls(t, x, a, family, omega, cfg) + k_point_ls(t, x, b, family, omega, cfg)
            )

        def psi(t, mu):
            return psi_bounded_ls(t, mu, null, cfg) - 0.5 * (
                psi_point_ls(t, mu, a, omega, psi_cfg) + psi_point_ls(t, mu, b, omega, psi_cfg)
            )

        return KernelPair(K, psi)
    if isinstance(null, OneSidedNull):
        if family.kind == "cauchy":
            raise UnsupportedConstruction(
                "the one-sided construction cannot be applied to the Cauchy family: "
                "its members have no finite first absolute moment"
            )
        b = null.b

        def K(t, x):
            return 0.5 - k_onesided_ls(t, x, null, family, cfg) - 0.5 * k_point_ls(t, x, b, family, omega, cfg)

        def psi(t, mu):
            return 0.5 - psi_onesided_ls(t, mu, null, cfg) - 0.5 * psi_point_ls(t, mu, b, omega, psi_cfg)

        return KernelPair(K, psi)
    raise ConfigurationError(f"unknown null specification {null!r}")


def _compose_gamma(null, family, omega, series, cfg, psi_cfg):
    if isinstance(null, PointNull):
        th0 = _gamma_theta_of_mean(family, null.mu0, "mu0")
        return KernelPair(
            lambda t, x: k_point_gamma(t, x, th0, family, omega, series, cfg),
            lambda t, th: psi_point_gamma(t, th, th0, omega, psi_cfg),
        )
    if isinstance(null, BoundedNull):
        th_a = _gamma_theta_of_mean(family, null.a, "a")
        th_b = _gamma_theta_of_mean(family, null.b, "b")

        def K(t, x):
            return k_bounded_gamma(t, x, null, family, series, cfg) - 0.5 * (
                k_point_gamma(t, x, th_a, family, omega, series, cfg)
                + k_point_gamma(t, x, th_b, family, omega, series, cfg)
            )

        def psi(t, th):
            return dirichlet_window(t, gamma_mean(family, th), null.a, null.b, cfg) - 0.5 * (
                psi_point_gamma(t, th, th_a, omega, psi_cfg) + psi_point_gamma(t, th, th_b, omega, psi_cfg)
            )

        return KernelPair(K, psi)
    if isinstance(null, OneSidedNull):
        th_b = _gamma_theta_of_mean(family, null.b, "b")

        def K(t, x):
            return (
                0.5
                - k_onesided_gamma(t, x, null, family, series, cfg)
                - 0.5 * k_point_gamma(t, x, th_b, family, omega, series, cfg)
            )

        def psi(t, th):
            return (
                0.5
                - dirichlet_halfline(t, gamma_mean(family, th), null.b, cfg)
                - 0.5 * psi_point_gamma(t, th, th_b, omega, psi_cfg)
            )

        return KernelPair(K, psi)
    raise ConfigurationError(f"unknown null specification {null!r}")


def compose_functional_kernel(
    spec: FunctionalSpec,
    family: Family,
    omega: WeightFunction = None,
    series: SeriesConfig = SeriesConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    psi_cfg: QuadratureConfig = PSI_QUADRATURE,
    corrected: bool = True,
) -> KernelPair:
    """Pair for the phi-induced null proportion.

    With ``corrected=True`` the endpoint contributions phi(a)/2 and phi(b)/2
    are removed with point-null kernels, so psi tends to phi(mu) inside (a, b)
    and to 0 elsewhere. With ``corrected=False`` only K_1 is used and the
    endpoints keep half weight.
    """
    omega = omega or triangular_weight()
    a, b = spec.a, spec.b
    pa, pb = float(spec(a)), float(spec(b))
    gamma = isinstance(family, GammaNEF)
    if not gamma and not isinstance(family, LocationShift):
        raise UnsupportedConstruction(f"unsupported family {family!r}")

    def mean_of(param):
        return gamma_mean(family, param) if gamma else param

    if gamma:
        th_a = _gamma_theta_of_mean(family, a, "a")
        th_b = _gamma_theta_of_mean(family, b, "b")

        def k_end(t, x):
            return pa * k_point_gamma(t, x, th_a, family, omega, series, cfg) + pb * k_point_gamma(
                t, x, th_b, family, omega, series, cfg
            )

        def psi_end(t, th):
            return pa * psi_point_gamma(t, th, th_a, omega, psi_cfg) + pb * psi_point_gamma(t, th, th_b, omega, psi_cfg)

    else:

        def k_end(t, x):
            return pa * k_point_ls(t, x, a, family, omega, cfg) + pb * k_point_ls(t, x, b, family, omega, cfg)

        def psi_end(t, mu):
            return pa * psi_point_ls(t, mu, a, omega, psi_cfg) + pb * psi_point_ls(t, mu, b, omega, psi_cfg)

    def K1(t, x):
        return k_weighted(t, x, spec, family, series, cfg)

    def psi1(t, param):
        return psi_weighted(t, mean_of(param), spec, psi_cfg)

    if not corrected:
        return KernelPair(K1, psi1)

    return KernelPair(
        lambda t, x: K1(t, x) - 0.5 * k_end(t, x),
        lambda t, p: psi1(t, p) - 0.5 * psi_end(t, p),
    )
