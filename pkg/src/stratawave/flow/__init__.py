"""Background flows: profiles, laminar solutions and Stokes-wave fields."""

from stratawave.flow.field import FlowParameters, WaveField
from stratawave.flow.laminar import (
    LaminarProfile,
    bifurcation_tau,
    cubic_laminar_profile,
    dispersion_function,
    solve_laminar,
    transverse_mode,
)
from stratawave.flow.profiles import FluidProfiles, ProfileKind, make_profiles
from stratawave.flow.residual import ResidualReport, pde_residual
from stratawave.flow.stokes import stokes_field

__all__ = [
    "FluidProfiles",
    "ProfileKind",
    "make_profiles",
    "FlowParameters",
    "WaveField",
    "LaminarProfile",
    "solve_laminar",
    "cubic_laminar_profile",
    "bifurcation_tau",
    "transverse_mode",
    "dispersion_function",
    "stokes_field",
    "ResidualReport",
    "pde_residual",
]
