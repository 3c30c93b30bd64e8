"""Tests for laminar solutions and the bifurcation wavenumber."""

import math

import numpy as np
import pytest

from stratawave.errors import NoBifurcationError
from stratawave.flow import (
    FlowParameters,
    bifurcation_tau,
    cubic_laminar_profile,
    dispersion_function,
    make_profiles,
    solve_laminar,
)
from tests.conftest import KAPPA_0


class TestFlowParameters:
    """Test cases for FlowParameters dataclass."""

    def test_defaults(self):
        """Test the default parameters and dual period."""
        params = FlowParameters()
        assert (params.d, params.g, params.p0) == (1.0, 2.0, -1.0)
        assert params.tau_star == pytest.approx(1.0)
        assert params.R is None

    @pytest.mark.parametrize(
        "kwargs,message",
        [
            ({"d": 0.0}, "d must be positive"),
            ({"g": -1.0}, "g must be positive"),
            ({"p0": 0.0}, "p0 must be negative"),
            ({"Lambda": -2.0}, "Lambda must be positive"),
        ],
    )
    def test_invalid(self, kwargs, message):
        """Test that invalid parameters are rejected."""
        with pytest.raises(ValueError, match=message):
            FlowParameters(**kwargs)

    def test_dict_round_trip(self):
        """Test to_dict and from_dict."""
        params = FlowParameters(d=2.0, g=9.81, p0=-3.0, Lambda=4.0, R=1.5)
        assert FlowParameters.from_dict(params.to_dict()) == params


class TestSolveLaminar:
    """Test cases for solve_laminar."""

    def test_benchmark_profile(self, bench_laminar):
        """Test Psi(y) = -y, Psi'(0) = -1 and R = 2.5 for the benchmark flow."""
        assert bench_laminar.slope == pytest.approx(-1.0, abs=1e-9)
        assert bench_laminar.R == pytest.approx(2.5, abs=1e-9)
        assert bench_laminar.monotone
        assert bench_laminar.residual <= 1e-10
        y = np.linspace(-1.0, 0.0, 11)
        assert np.allclose(bench_laminar.psi(y), -y, atol=1e-8)
        assert np.allclose(bench_laminar.psi_y(y), -1.0, atol=1e-8)

    def test_benchmark_surface_sigma(self, bench_laminar, bench_profiles):
        """Test sigma = g rho(0) / Psi'(0) = -2 on the flat surface."""
        assert bench_laminar.surface_sigma(bench_profiles) == pytest.approx(-2.0, abs=1e-8)

    def test_extension_above_surface(self, bench_laminar):
        """Test that the solution continues above the flat surface."""
        assert bench_laminar.y_top == pytest.approx(0.5)
        assert float(bench_laminar.psi(0.25)) == pytest.approx(-0.25, abs=1e-8)

    def test_cubic_closed_form(self):
        """Test linear density with constant beta against the cubic profile."""
        params = FlowParameters()
        prof = make_profiles(
            "linear-rho-constant-beta", {"rho0": 1.0, "slope": 0.1, "beta0": 0.5}
        )
        laminar = solve_laminar(prof, params)
        exact = cubic_laminar_profile(0.1, 0.5, params)
        y = np.linspace(-1.0, 0.0, 21)
        assert np.max(np.abs(laminar.psi(y) - exact(y))) < 1e-8
        assert float(laminar.psi(-1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_mode_missing(self, bench_laminar):
        """Test that gamma needs an attached mode."""
        with pytest.raises(ValueError, match="no transverse mode stored"):
            bench_laminar.gamma(0.0)


class TestBifurcation:
    """Test cases for the dispersion function and bifurcation_tau."""

    def test_benchmark_root(self, bench_bifurcation):
        """Test that the root solves k cosh k = 2 sinh k."""
        tau, laminar = bench_bifurcation
        assert tau == pytest.approx(KAPPA_0, abs=1e-6)
        assert tau * math.cosh(tau) == pytest.approx(2.0 * math.sinh(tau), rel=1e-8)
        assert laminar.tau == tau

    def test_mode_shape(self, bench_bifurcation):
        """Test gamma(y) = sinh(tau (y + 1)) / sinh(tau) and its derivative."""
        tau, laminar = bench_bifurcation
        y = np.linspace(-1.0, 0.0, 11)
        exact = np.sinh(tau * (y + 1.0)) / math.sinh(tau)
        assert np.allclose(laminar.gamma(y), exact, atol=1e-7)
        assert float(laminar.gamma(0.0)) == pytest.approx(1.0)
        slope = tau * np.cosh(tau * (y + 1.0)) / math.sinh(tau)
        assert np.allclose(laminar.gamma_y(y), slope, atol=1e-5)
        assert float(laminar.gamma_y(0.0)) == pytest.approx(2.0, abs=1e-5)

    def test_dispersion_sign_change(self, bench_laminar, bench_profiles):
        """Test that the dispersion function changes sign across the root."""
        below = dispersion_function(bench_laminar, bench_profiles, 1.5)
        above = dispersion_function(bench_laminar, bench_profiles, 2.5)
        assert below * above < 0

    def test_no_root_in_bracket(self, bench_laminar, bench_profiles):
        """Test that a bracket below the root raises NoBifurcationError."""
        with pytest.raises(NoBifurcationError, match="No bifurcation wavenumber"):
            bifurcation_tau(bench_laminar, bench_profiles, tau_max=1.0, n_scan=20)
