"""Stratawave: spectral analysis of stratified steady water waves.

This package linearizes the water-wave problem for a density-stratified
flow at a laminar or small-amplitude Stokes background, assembles the
resulting quadratic form on periodic, side-condition, half-period and
Bloch spaces, and checks the relations between their spectra.

QUICK START:
    >>> from stratawave import RunConfig, build_background, SpectralAnalyzer
    >>> field, profiles, laminar = build_background(RunConfig())
    >>> verdict = SpectralAnalyzer(field, profiles).uniqueness_verdict(3)
    >>> verdict.criterion_holds
    False

Modules:
    - flow: Profiles, laminar solutions and Stokes-wave fields
    - linearize: Frechet derivative in physical, hodograph and flattened coordinates
    - assembly: Meshes and finite-element assembly
    - eigensolve: Generalized Hermitian eigensolver
    - spectra: Spectral problems, orderings and verdicts
    - bloch: Finite Bloch transform
    - floquet: Jordan chain of the zero eigenvalue
    - config, formats, cli: Run configuration, artifacts and command line
"""

import logging

from stratawave.__version__ import __version__, __version_info__
from stratawave.bloch import BlochStack, bloch_forward, bloch_identities, bloch_inverse
from stratawave.config import RunConfig, build_background, validate_config
from stratawave.eigensolve import EigenResult, solve_gen
from stratawave.errors import StratawaveError, format_error
from stratawave.floquet import (
    ChainStudy,
    JordanChain,
    chain_report,
    chain_study,
    solve_u1,
    transversality_lhs,
)
from stratawave.flow import (
    FlowParameters,
    FluidProfiles,
    LaminarProfile,
    WaveField,
    bifurcation_tau,
    make_profiles,
    pde_residual,
    solve_laminar,
    stokes_field,
)
from stratawave.spectra import SpectralAnalyzer, Status

# Silence verbose logging by default
logging.getLogger("stratawave").setLevel(logging.WARNING)

__all__ = [
    "__version__",
    "__version_info__",
    "make_profiles",
    "FluidProfiles",
    "FlowParameters",
    "WaveField",
    "LaminarProfile",
    "solve_laminar",
    "bifurcation_tau",
    "stokes_field",
    "pde_residual",
    "solve_gen",
    "EigenResult",
    "SpectralAnalyzer",
    "Status",
    "BlochStack",
    "bloch_forward",
    "bloch_inverse",
    "bloch_identities",
    "JordanChain",
    "solve_u1",
    "transversality_lhs",
    "chain_report",
    "ChainStudy",
    "chain_study",
    "RunConfig",
    "validate_config",
    "build_background",
    "StratawaveError",
    "format_error",
]
