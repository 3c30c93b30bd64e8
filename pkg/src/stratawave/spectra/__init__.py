"""Spectral problems of a background field and their relations."""

from stratawave.spectra.analyzer import SpectralAnalyzer
from stratawave.spectra.oracle import (
    dispersion_oracle,
    mode_wavenumbers,
    steklov_oracle,
    transverse_eigenvalues,
)
from stratawave.spectra.report import (
    CountComparison,
    DecompositionReport,
    LemmaReport,
    PositivityReport,
    Relation,
    SpectrumReport,
    Status,
    SweepReport,
    VerdictReport,
    check_relation,
)

__all__ = [
    "SpectralAnalyzer",
    "Status",
    "Relation",
    "check_relation",
    "SpectrumReport",
    "LemmaReport",
    "CountComparison",
    "PositivityReport",
    "SweepReport",
    "DecompositionReport",
    "VerdictReport",
    "dispersion_oracle",
    "steklov_oracle",
    "transverse_eigenvalues",
    "mode_wavenumbers",
]
