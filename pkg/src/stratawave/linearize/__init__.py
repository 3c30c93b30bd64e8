"""Linearized operators in physical, hodograph and flattened coordinates."""

from stratawave.linearize.calculus import FlattenedCalculus
from stratawave.linearize.coefficients import LinearizedCoefficients, coefficients
from stratawave.linearize.flattening import FlatteningReport, flattening_frechet
from stratawave.linearize.hodograph import (
    HodographIdentityReport,
    HodographField,
    apply_hodograph_frechet,
    hodograph_build,
    identity_errors,
    verify_cormi,
)
from stratawave.linearize.operators import apply_AB, psi_x

__all__ = [
    "FlattenedCalculus",
    "LinearizedCoefficients",
    "coefficients",
    "apply_AB",
    "psi_x",
    "HodographField",
    "hodograph_build",
    "identity_errors",
    "apply_hodograph_frechet",
    "HodographIdentityReport",
    "verify_cormi",
    "FlatteningReport",
    "flattening_frechet",
]
