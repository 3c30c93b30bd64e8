"""Shared fixtures: the constant-density benchmark flow and its fields.

The benchmark has rho = 1, beta = 0, d = 1, g = 2 and p0 = -1, so that
Psi(y) = -y, R = 2.5, sigma = -2 and omega* = 0. Its bifurcation wavenumber
solves k cosh k = 2 sinh k.
"""

import math

import pytest

from stratawave.flow import (
    FlowParameters,
    WaveField,
    bifurcation_tau,
    make_profiles,
    solve_laminar,
    stokes_field,
)
from stratawave.spectra import SpectralAnalyzer

KAPPA_0 = 1.9150080105836
NU_0 = -(KAPPA_0**2)


@pytest.fixture(scope="session")
def bench_profiles():
    """Constant-density profiles."""
    return make_profiles("constant", {"rho0": 1.0}, p0=-1.0)


@pytest.fixture(scope="session")
def bench_params():
    """d = 1, g = 2, p0 = -1 on a 2 pi period."""
    return FlowParameters(d=1.0, g=2.0, p0=-1.0, Lambda=2.0 * math.pi)


@pytest.fixture(scope="session")
def bench_laminar(bench_profiles, bench_params):
    """Laminar solution Psi(y) = -y."""
    return solve_laminar(bench_profiles, bench_params)


@pytest.fixture(scope="session")
def bench_bifurcation(bench_laminar, bench_profiles):
    """(tau, laminar profile carrying the mode at tau)."""
    return bifurcation_tau(bench_laminar, bench_profiles)


@pytest.fixture(scope="session")
def laminar_field(bench_laminar):
    """Laminar field on the 2 pi period, 48 x 24 grid."""
    return WaveField.from_laminar(bench_laminar, 48, 24)


@pytest.fixture(scope="session")
def coarse_laminar_field(bench_laminar):
    """Laminar field on the 2 pi period, 24 x 12 grid."""
    return WaveField.from_laminar(bench_laminar, 24, 12)


@pytest.fixture(scope="session")
def subcritical_field(bench_laminar, bench_bifurcation):
    """Laminar field at 0.9 of the bifurcation period, where mu_1 < 0 < mu_2."""
    tau, _ = bench_bifurcation
    return WaveField.from_laminar(bench_laminar, 48, 24, Lambda=0.9 * 2.0 * math.pi / tau)


@pytest.fixture(scope="session")
def stokes(bench_bifurcation):
    """Stokes field with t = 0.01 at the bifurcation wavenumber."""
    tau, laminar = bench_bifurcation
    return stokes_field(laminar, tau, 0.01, Nx=48, Ny=24)


@pytest.fixture(scope="session")
def laminar_analyzer(laminar_field, bench_profiles):
    return SpectralAnalyzer(laminar_field, bench_profiles)


@pytest.fixture(scope="session")
def stokes_analyzer(stokes, bench_profiles):
    return SpectralAnalyzer(stokes, bench_profiles)


@pytest.fixture(scope="session")
def subcritical_mode(bench_laminar, bench_profiles, bench_bifurcation):
    """(tau, laminar profile with the mode at tau) for the period 0.9 of the bifurcation one."""
    tau = bench_bifurcation[0] / 0.9
    return tau, bench_laminar.with_mode(tau, bench_profiles)


@pytest.fixture(scope="session")
def subcritical_stokes(subcritical_mode):
    """Stokes field with t = 0.01 at the subcritical wavenumber, 48 x 24 grid."""
    tau, laminar = subcritical_mode
    return stokes_field(laminar, tau, 0.01, Nx=48, Ny=24)


@pytest.fixture(scope="session")
def coarse_subcritical_stokes(subcritical_mode):
    """Stokes field with t = 0.01 at the subcritical wavenumber, 24 x 12 grid."""
    tau, laminar = subcritical_mode
    return stokes_field(laminar, tau, 0.01, Nx=24, Ny=12)
