"""Tests for Stokes-wave fields and background residuals."""

import math

import numpy as np
import pytest

from stratawave.errors import MeshError
from stratawave.flow import pde_residual, stokes_field
from stratawave.flow.residual import ResidualReport


class TestStokesField:
    """Test cases for stokes_field."""

    def test_period_and_tags(self, stokes, bench_bifurcation):
        """Test the period 2 pi / tau and the amplitude tags."""
        tau, _ = bench_bifurcation
        assert stokes.params.Lambda == pytest.approx(2.0 * math.pi / tau)
        assert stokes.amplitude == 0.01
        assert stokes.tau == tau
        assert (stokes.Nx, stokes.Ny) == (48, 24)

    def test_surface_elevation(self, stokes):
        """Test xi = t cos(tau x) gamma(0) / |Psi'(0)| for the benchmark flow."""
        expected = 0.01 * np.cos(stokes.tau * stokes.x)
        assert np.allclose(stokes.xi, expected, atol=1e-8)

    def test_boundary_rows(self, stokes):
        """Test the exact bed and surface values."""
        assert np.all(stokes.psi[:, 0] == 1.0)
        assert np.all(stokes.psi[:, -1] == 0.0)

    def test_even(self, stokes):
        """Test that the field is even in x."""
        mirror = stokes.reflected()
        assert np.array_equal(mirror.psi, stokes.psi)
        assert np.array_equal(mirror.xi, stokes.xi)

    def test_mode_attached_on_demand(self, bench_laminar, bench_profiles, bench_bifurcation):
        """Test that profiles let stokes_field attach a missing mode."""
        tau, _ = bench_bifurcation
        field = stokes_field(bench_laminar, tau, 0.01, Nx=16, Ny=8, profiles=bench_profiles)
        assert field.Nx == 16

    def test_mode_missing(self, bench_laminar, bench_bifurcation):
        """Test that a missing mode without profiles is rejected."""
        tau, _ = bench_bifurcation
        with pytest.raises(ValueError, match="pass profiles"):
            stokes_field(bench_laminar, tau, 0.01)

    def test_amplitude_too_large(self, bench_bifurcation):
        """Test that a surface above the solution range is rejected."""
        tau, laminar = bench_bifurcation
        with pytest.raises(MeshError):
            stokes_field(laminar, tau, 0.8, Nx=16, Ny=8)


class TestPdeResidual:
    """Test cases for pde_residual."""

    def test_laminar_exact(self, laminar_field, bench_profiles):
        """Test that the laminar field satisfies the equations to roundoff."""
        report = pde_residual(laminar_field, bench_profiles)
        assert isinstance(report, ResidualReport)
        assert report.r_interior < 1e-7
        assert report.r_bernoulli < 1e-7
        assert report.r_kinematic == 0.0

    def test_stokes_small(self, stokes, bench_profiles):
        """Test that the first-order field has small residuals."""
        report = pde_residual(stokes, bench_profiles)
        assert report.r_kinematic == 0.0
        assert report.max() < 1e-2
        assert set(report.to_dict()) == {"r_interior", "r_bernoulli", "r_kinematic"}

    def test_missing_bernoulli_constant(self, bench_profiles, laminar_field):
        """Test that a field without R cannot be checked."""
        from dataclasses import replace

        field = replace(laminar_field, params=replace(laminar_field.params, R=None))
        with pytest.raises(ValueError, match="no Bernoulli constant"):
            pde_residual(field, bench_profiles)
