import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from nullprop.errors import ConfigurationError, DomainError, QuadratureResourceError
from nullprop.numerics import (
    QuadratureConfig,
    dirichlet_halfline,
    dirichlet_window,
    fourier_decay_bound,
    get_weight,
    integrate_1d,
    midpoint_nodes,
    sine_integral,
    triangular_weight,
    uniform_weight,
    weighted_dirichlet,
)

H = QuadratureConfig(0.01)
FINE = QuadratureConfig(1e-4)


def _si_by_halving(t, tol=1e-8):
    """Midpoint rule, halving the step until two successive values agree."""
    h = 0.01
    prev = None
    while True:
        val = integrate_1d(lambda x: np.sinc(x / math.pi), 0.0, t, QuadratureConfig(h))
        if prev is not None and abs(val - prev) <= tol:
            return val
        prev, h = val, h / 2


class TestQuadratureConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ConfigurationError):
            QuadratureConfig(0.0)
        with pytest.raises(ConfigurationError):
            QuadratureConfig(0.01, max_panels=0)

    def test_panel_cap(self):
        with pytest.raises(QuadratureResourceError):
            midpoint_nodes(0.0, 1.0, QuadratureConfig(0.01, max_panels=50))

    def test_nodes_cover_interval(self):
        x, h = midpoint_nodes(-1.0, 2.0, H)
        assert x.size == 300 and h == pytest.approx(0.01)
        assert x[0] == pytest.approx(-1.0 + h / 2) and x[-1] == pytest.approx(2.0 - h / 2)

    def test_reversed_interval(self):
        with pytest.raises(ConfigurationError):
            midpoint_nodes(1.0, 0.0)


class TestIntegrate:
    def test_constant(self):
        assert integrate_1d(np.ones_like, 0.0, 1.0, H) == pytest.approx(1.0, abs=1e-14)

    def test_odd(self):
        assert integrate_1d(lambda x: x, -1.0, 1.0, H) == pytest.approx(0.0, abs=1e-14)

    def test_square(self):
        assert abs(integrate_1d(lambda x: x**2, 0.0, 1.0, H) - 1 / 3) <= 1e-4

    def test_empty_interval(self):
        assert integrate_1d(np.ones_like, 2.0, 2.0) == 0.0

    @given(st.floats(-3, 3), st.floats(-3, 3))
    def test_linear_in_integrand(self, alpha, beta):
        f = np.cos
        g = lambda x: x**3
        lhs = integrate_1d(lambda x: alpha * f(x) + beta * g(x), -1.0, 2.0, H)
        rhs = alpha * integrate_1d(f, -1.0, 2.0, H) + beta * integrate_1d(g, -1.0, 2.0, H)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    @given(st.integers(1, 99))
    def test_additive_on_shared_partition(self, k):
        mid = k / 100
        whole = integrate_1d(np.exp, 0.0, 1.0, H)
        parts = integrate_1d(np.exp, 0.0, mid, H) + integrate_1d(np.exp, mid, 1.0, H)
        assert whole == pytest.approx(parts, rel=1e-12)


class TestWeights:
    @pytest.mark.parametrize("w", [triangular_weight(), uniform_weight()], ids=lambda w: w.name)
    def test_density_properties(self, w):
        s = np.linspace(-1, 1, 201)
        assert np.array_equal(w(s), w(-s))
        assert np.all(w(s) >= 0) and np.all(w(s) <= w.sup_norm)
        assert integrate_1d(w, -1.0, 1.0, H) == pytest.approx(1.0, abs=1e-4)
        assert math.isfinite(w.total_variation)

    def test_constants(self):
        assert (triangular_weight().sup_norm, triangular_weight().total_variation) == (1.0, 2.0)
        assert (uniform_weight().sup_norm, uniform_weight().total_variation) == (0.5, 0.0)

    def test_lookup(self):
        assert get_weight("uniform").name == "uniform"
        with pytest.raises(ConfigurationError):
            get_weight("cosine")


class TestSineIntegral:
    def test_zero(self):
        assert sine_integral(0.0) == 0.0

    def test_value_at_two(self):
        # frozen value of the halving oracle; scipy agrees independently
        assert _si_by_halving(2.0) == pytest.approx(1.605413, abs=1e-6)
        # the production step of 0.01 carries an O(h^2) error of about 2e-6
        assert sine_integral(2.0) == pytest.approx(1.605413, abs=1e-5)
        assert sine_integral(2.0, FINE) == pytest.approx(special.sici(2.0)[0], abs=1e-9)

    @pytest.mark.parametrize("t", [2, 5, 10, 50, 100, 1000])
    def test_dirichlet_bound(self, t):
        assert abs(sine_integral(t) - math.pi / 2) <= 2 * math.pi / t

    def test_odd_and_vectorised(self):
        t = np.array([[-3.0, 0.5], [1.0, 7.0]])
        out = sine_integral(t)
        assert out.shape == t.shape
        np.testing.assert_allclose(out, special.sici(t)[0], atol=1e-5)
        assert sine_integral(-3.0) == -sine_integral(3.0)


class TestDirichlet:
    def test_window_degenerate(self):
        assert dirichlet_window(0.0, 0.7, -1, 2) == 0.0

    def test_window_limits(self):
        assert abs(dirichlet_window(200, 0.5, -1, 2) - 1) <= 0.05
        assert abs(dirichlet_window(200, -1.0, -1, 2) - 0.5) <= 0.05

    def test_window_errors(self):
        with pytest.raises(ConfigurationError):
            dirichlet_window(1.0, 0.0, 2, 2)
        with pytest.raises(DomainError):
            dirichlet_window(-1.0, 0.0, 0, 2)

    @pytest.mark.parametrize("t,mu", [(1.0, 0.3), (4.0, -1.5), (10.0, 2.5)])
    def test_window_matches_double_integral(self, t, mu):
        # (1/2pi) * int_a^b dy int_{-t}^{t} cos(s (mu - y)) ds, done by scipy
        a, b = -1.0, 2.0
        inner = lambda y: 2 * math.sin(t * (mu - y)) / (mu - y) if mu != y else 2 * t
        val = integrate.quad(inner, a, b, limit=200, points=[mu] if a < mu < b else None)[0] / (2 * math.pi)
        assert dirichlet_window(t, mu, a, b) == pytest.approx(val, abs=1e-4)

    def test_halfline(self):
        assert dirichlet_halfline(50, 1.0, 1.0) == 0.0
        assert abs(dirichlet_halfline(200, 1.0, 0.0) - 0.5) <= 0.02
        assert abs(dirichlet_halfline(200, -1.0, 0.0) + 0.5) <= 0.02

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.1, 20), st.floats(0.01, 3))
    def test_halfline_antisymmetric(self, t, delta):
        assert dirichlet_halfline(t, 1 + delta, 1) == pytest.approx(-dirichlet_halfline(t, 1 - delta, 1), abs=1e-12)


def _square2(y):
    return np.where(np.abs(y) <= 2, y**2, 0.0)


class TestWeightedDirichlet:
    @pytest.mark.parametrize("t", [0.5, 2.0, 5.0, 10.0, 20.0])
    @pytest.mark.parametrize("mu", [-3.0, -1.0, 0.0, 1.5, 2.5])
    def test_unit_weight_reduces_to_window(self, t, mu):
        a, b = -1.0, 2.0
        assert weighted_dirichlet(t, mu, a, b, np.ones_like, H) == pytest.approx(
            dirichlet_window(t, mu, a, b, FINE), abs=1e-4
        )

    def test_interior_and_exterior(self):
        assert abs(weighted_dirichlet(100, 1.0, -2, 2, _square2) - 1.0) <= 0.8
        assert abs(weighted_dirichlet(100, 3.0, -2, 2, _square2)) <= 0.8

    @settings(max_examples=40, deadline=None)
    @given(st.floats(2, 200), st.floats(-1.9, 1.9))
    def test_interior_rate(self, t, mu):
        assert abs(weighted_dirichlet(t, mu, -2, 2, _square2) - mu**2) <= 20 * 4 / t

    def test_removable_singularity(self):
        # mu sits exactly on a node: the node contributes t * phi(mu) / pi
        x, _ = midpoint_nodes(-2.0, 2.0, H)
        mu = float(x[250])
        val = weighted_dirichlet(5.0, mu, -2, 2, _square2, H)
        ref = integrate.quad(lambda y: math.sin((mu - y) * 5) / (mu - y) * y**2 / math.pi if y != mu else 5 * mu**2 / math.pi,
                             -2, 2, points=[mu], limit=200)[0]
        assert val == pytest.approx(ref, abs=1e-3)

    def test_vector_input(self):
        out = weighted_dirichlet(3.0, np.array([0.0, 1.0]), -2, 2, _square2)
        assert out.shape == (2,)


class TestFourierDecayBound:
    def test_values(self):
        assert fourier_decay_bound(0, 1, -1, 1, 4) == 1.0
        assert fourier_decay_bound(0, 0, -1, 1, 4) == 0.0
        assert fourier_decay_bound(2, 1, -1, 1, 10) == pytest.approx(1.2)

    def test_errors(self):
        with pytest.raises(DomainError):
            fourier_decay_bound(2, 1, -1, 1, 0)
        with pytest.raises(ConfigurationError):
            fourier_decay_bound(2, 1, 1, 1, 3)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.5, 200))
    def test_bounds_triangular_transform(self, t):
        exact = 2 * (1 - math.cos(t)) / t**2
        assert exact <= fourier_decay_bound(2, 1, -1, 1, t) + 1e-15
