import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from nullprop.errors import ConfigurationError, DomainError, UnsupportedConstruction
from nullprop.families import (
    GammaNEF,
    LocationShift,
    ParameterVector,
    abs_variance,
    cdf,
    dominates,
    family_from_name,
    g_factor,
    gamma_mean,
    gamma_moment_data,
    gamma_theta,
    mean_abs,
    modulus_recip,
    modulus_recip_s_deriv,
    pdf,
    sample,
)

KINDS = ("gaussian", "laplace", "logistic", "cauchy", "hsecant")
ODD_DERIV_KINDS = ("gaussian", "laplace", "logistic", "hsecant")


def test_construction_guards():
    with pytest.raises(ConfigurationError):
        LocationShift("student")
    with pytest.raises(ConfigurationError):
        LocationShift("gaussian", 0.0)
    with pytest.raises(ConfigurationError):
        GammaNEF(-1.0)
    assert family_from_name("Gamma", 4.0) == GammaNEF(4.0)
    assert family_from_name("laplace", 2.0).sigma == 2.0


def test_parameter_vector():
    pv = ParameterVector([0.1, 0.2], GammaNEF(4.0))
    assert pv.m == 2
    np.testing.assert_allclose(pv.means(), [4 / 0.9, 4 / 0.8])
    with pytest.raises(DomainError):
        ParameterVector([0.1, 1.0], GammaNEF(4.0))
    with pytest.raises(ConfigurationError):
        ParameterVector([], LocationShift("gaussian"))


class TestModulus:
    def test_examples(self):
        assert modulus_recip(LocationShift("gaussian"), 0.0) == 1.0
        assert modulus_recip(LocationShift("laplace", 2.0), 3.0) == pytest.approx(37.0)
        assert modulus_recip(LocationShift("logistic"), 1.0) == pytest.approx(math.sinh(math.pi) / math.pi)
        assert modulus_recip(LocationShift("logistic"), 1.0) == pytest.approx(3.67608, abs=1e-5)
        assert modulus_recip(LocationShift("cauchy", 0.5), -2.0) == pytest.approx(math.e)
        assert modulus_recip(LocationShift("hsecant", 2.0), 1.0) == pytest.approx(2 * math.cosh(0.5))

    def test_gamma_unsupported(self):
        with pytest.raises(UnsupportedConstruction):
            modulus_recip(GammaNEF(4.0), 1.0)

    @pytest.mark.parametrize("kind", KINDS)
    def test_even_and_at_least_one(self, kind):
        fam = LocationShift(kind, 1.3)
        t = np.linspace(-4, 4, 81)
        v = modulus_recip(fam, t)
        np.testing.assert_allclose(v, modulus_recip(fam, -t))
        if kind != "hsecant":
            assert np.all(v >= 1.0 - 1e-15)

    @pytest.mark.parametrize("kind", ["gaussian", "laplace", "logistic", "cauchy"])
    def test_reciprocal_of_characteristic_function(self, kind):
        # independent route: numerically integrate the density against cos(tx)
        fam = LocationShift(kind, 0.8)
        for t in (0.5, 1.7):
            cf = 2 * integrate.quad(lambda x: pdf(fam, 0.0, x), 0, np.inf, weight="cos", wvar=t)[0]
            assert modulus_recip(fam, t) == pytest.approx(1 / cf, rel=1e-6)


class TestSDerivative:
    def test_examples(self):
        g = LocationShift("gaussian")
        assert modulus_recip_s_deriv(g, 2.0, 0.5, 0.0) == 0.0
        assert modulus_recip_s_deriv(LocationShift("laplace"), 1.0, 1.0, 0.5) == pytest.approx(1.0)
        assert modulus_recip_s_deriv(g, 2.0, 0.5, 0.5) == pytest.approx(math.exp(0.125))
        assert modulus_recip_s_deriv(g, 2.0, 0.5, 0.5) == pytest.approx(1.13315, abs=1e-5)

    def test_cauchy_rejected(self):
        with pytest.raises(UnsupportedConstruction, match="cannot be applied"):
            modulus_recip_s_deriv(LocationShift("cauchy"), 1.0, 0.5, 0.5)

    @pytest.mark.parametrize("kind", ODD_DERIV_KINDS)
    def test_matches_finite_difference(self, kind):
        fam = LocationShift(kind, 0.9)
        step = 1e-6
        for t in (0.5, 1.0, 2.0):
            for y in (0.2, 0.5, 1.0):
                for s in (-0.7, 0.3, 0.9):
                    fd = (modulus_recip(fam, t * y * (s + step)) - modulus_recip(fam, t * y * (s - step))) / (2 * step) / y
                    got = modulus_recip_s_deriv(fam, t, y, s)
                    assert got == pytest.approx(fd, rel=1e-4, abs=1e-8)

    @pytest.mark.parametrize("kind", ["gaussian", "laplace"])
    def test_odd_in_s(self, kind):
        fam = LocationShift(kind)
        s = np.linspace(0, 1, 11)
        np.testing.assert_allclose(modulus_recip_s_deriv(fam, 1.5, 0.7, s), -modulus_recip_s_deriv(fam, 1.5, 0.7, -s))


class TestGFactor:
    @pytest.mark.parametrize("kind", KINDS[:4])
    def test_zero_speed(self, kind):
        assert g_factor(LocationShift(kind), 0.0) == pytest.approx(2.0)

    def test_laplace_closed_form(self):
        assert g_factor(LocationShift("laplace"), 1.0) == pytest.approx(8 / 3, abs=1e-4)

    @pytest.mark.parametrize("t", [1.0, 3.0, 5.0])
    def test_gaussian_bound(self, t):
        x = 0.5 * t**2
        assert g_factor(LocationShift("gaussian"), t) <= 2 * math.expm1(x) / x

    def test_gamma_unsupported(self):
        with pytest.raises(UnsupportedConstruction):
            g_factor(GammaNEF(2.0), 1.0)


def test_dominates_at_points():
    gauss, lap = LocationShift("gaussian"), LocationShift("laplace")
    # e^{-t^2/2} >= 1/(1+t^2) only for small t
    assert dominates(gauss, lap, [0.5, 1.0])
    assert not dominates(gauss, lap, [3.0])


class TestSampling:
    def test_gaussian_mean(self):
        z = sample(LocationShift("gaussian"), 0.0, np.random.default_rng(1), 100_000)
        assert abs(z.mean()) <= 4 / math.sqrt(1e5)

    @pytest.mark.parametrize("theta", [-0.2, 0.0, 0.35])
    def test_gamma_mean_identity(self, theta):
        fam = GammaNEF(4.0)
        z = sample(fam, theta, np.random.default_rng(2), 100_000)
        se = z.std() / math.sqrt(z.size)
        assert abs(z.mean() - gamma_mean(fam, theta)) <= 5 * se

    def test_laplace_variance(self):
        z = sample(LocationShift("laplace", 2.0), 1.0, np.random.default_rng(3), 100_000)
        assert z.var() == pytest.approx(8.0, rel=0.03)

    def test_gamma_domain(self):
        with pytest.raises(DomainError):
            sample(GammaNEF(4.0), 1.0, np.random.default_rng(0))

    def test_vector_params(self):
        z = sample(LocationShift("gaussian"), np.array([0.0, 100.0]), np.random.default_rng(0))
        assert z.shape == (2,) and z[1] > 90

    @pytest.mark.parametrize("kind", ["logistic", "hsecant", "cauchy"])
    def test_samples_follow_cdf(self, kind):
        fam = LocationShift(kind, 1.4)
        z = sample(fam, 0.5, np.random.default_rng(4), 20_000)
        assert stats.kstest(z, lambda x: cdf(fam, 0.5, x)).pvalue > 1e-3


class TestCdf:
    @pytest.mark.parametrize("kind", KINDS)
    def test_symmetric_median(self, kind):
        assert cdf(LocationShift(kind, 1.7), 0.3, 0.3) == pytest.approx(0.5)

    def test_gaussian_quantile(self):
        assert cdf(LocationShift("gaussian"), 0.0, 1.959964) == pytest.approx(0.975, abs=1e-5)

    def test_gamma_limit_and_reference(self):
        fam = GammaNEF(4.0)
        assert cdf(fam, 0.0, 1e4) == pytest.approx(1.0)
        assert cdf(fam, 0.3, 5.0) == pytest.approx(stats.gamma(4.0, scale=1 / 0.7).cdf(5.0))

    @pytest.mark.parametrize("kind", KINDS)
    def test_cdf_integrates_pdf(self, kind):
        fam = LocationShift(kind, 0.8)
        val = integrate.quad(lambda x: pdf(fam, 0.2, x), -np.inf, 1.1)[0]
        assert cdf(fam, 0.2, 1.1) == pytest.approx(val, abs=1e-8)

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(KINDS), st.lists(st.floats(-20, 20), min_size=2, max_size=20))
    def test_monotone_in_unit_interval(self, kind, xs):
        xs = np.sort(np.array(xs))
        v = cdf(LocationShift(kind), 0.0, xs)
        assert np.all(np.diff(v) >= 0)
        assert np.all((v >= 0) & (v <= 1))


class TestGammaMoments:
    def test_a_tilde_examples(self):
        fam = GammaNEF(4.0)
        assert gamma_moment_data(fam, 0, 0.0)[1] == pytest.approx(1.0)
        assert gamma_moment_data(fam, 1, 0.0)[1] == pytest.approx(4.0)
        assert gamma_moment_data(fam, 3, 0.5) == pytest.approx((2.0, 120.0))

    def test_large_n_is_finite(self):
        _, a = gamma_moment_data(GammaNEF(4.0), 150, 0.0)
        assert math.isfinite(a)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_moment_data(GammaNEF(4.0), 2, 1.0)
        with pytest.raises(DomainError):
            gamma_theta(GammaNEF(4.0), 0.0)

    @given(st.floats(-5, 0.99), st.floats(-5, 0.99))
    def test_mean_increasing_and_invertible(self, a, b):
        fam = GammaNEF(2.5)
        if b - a > 1e-9:
            assert gamma_mean(fam, a) < gamma_mean(fam, b)
        assert gamma_theta(fam, gamma_mean(fam, a)) == pytest.approx(a, abs=1e-9)


class TestAbsoluteMoments:
    @pytest.mark.parametrize("kind,param", [("gaussian", 0.7), ("laplace", -1.2), ("logistic", 0.4), ("hsecant", 0.3)])
    def test_against_quadrature(self, kind, param):
        fam = LocationShift(kind, 1.1)
        m1 = integrate.quad(lambda x: abs(x) * pdf(fam, param, x), -np.inf, np.inf, limit=200)[0]
        m2 = integrate.quad(lambda x: x * x * pdf(fam, param, x), -np.inf, np.inf, limit=200)[0]
        assert mean_abs(fam, param) == pytest.approx(m1, rel=1e-6)
        assert abs_variance(fam, param) == pytest.approx(m2 - m1**2, rel=1e-6)

    def test_cauchy_infinite(self):
        assert math.isinf(mean_abs(LocationShift("cauchy"), 0.0))
        assert math.isinf(abs_variance(LocationShift("cauchy"), 0.0))
