"""Custom exceptions and error handling for stratawave.

Every exception carries an optional hint that tells the user what to change,
so that a failed solve on the command line is actionable.
"""

from typing import List, Optional


class StratawaveError(Exception):
    """Base exception for stratawave errors."""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.suggestion = suggestion

    def __str__(self) -> str:
        if self.suggestion:
            return f"{self.message}\n\n💡 Hint: {self.suggestion}"
        return self.message


class ConfigurationError(StratawaveError):
    """Raised when a run configuration is invalid."""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        self.errors = list(errors or [])
        suggestion = None
        if self.errors:
            suggestion = "Configuration errors:\n" + "\n".join(
                f"  - {e}" for e in self.errors
            )
        super().__init__(message, suggestion)


class ProfileError(StratawaveError, ValueError):
    """Raised when density or Bernoulli profiles are inconsistent."""

    def __init__(self, message: str):
        suggestion = (
            "Density must stay positive on [p0, 0]:\n"
            "  - check rho0 and slope against the pseudomass p0\n"
            "  - sampled profiles need strictly increasing s samples"
        )
        super().__init__(message, suggestion)


class ShootingDivergenceError(StratawaveError):
    """Raised when the laminar boundary-value shooting does not converge."""

    def __init__(self, residual: float, detail: str = ""):
        self.residual = residual
        suggestion = (
            "The laminar two-point problem has no solution near the initial slope:\n"
            "  - reduce the density slope or the Bernoulli constant beta0\n"
            "  - check that p0 < 0 and d > 0"
        )
        message = f"Laminar shooting diverged (final residual {residual:.3e})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message, suggestion)


class NoBifurcationError(StratawaveError):
    """Raised when no positive bifurcation wavenumber exists in the bracket."""

    def __init__(self, bracket: tuple):
        self.bracket = bracket
        suggestion = (
            "The dispersion function keeps one sign on the search bracket.\n"
            "  - for constant density a root needs g*d**3 > p0**2\n"
            "  - supply the wavenumber explicitly with flow.tau"
        )
        super().__init__(
            f"No bifurcation wavenumber in [{bracket[0]:.4g}, {bracket[1]:.4g}]",
            suggestion,
        )


class SurfaceStagnationError(StratawaveError):
    """Raised when psi_y is not negative on the surface row."""

    def __init__(self, max_psi_y: float):
        self.max_psi_y = max_psi_y
        suggestion = (
            "The flow is not unidirectional at the free surface.\n"
            "  - reduce the amplitude t\n"
            "  - check the sign of p0"
        )
        super().__init__(
            f"psi_y must be negative on the surface, found max {max_psi_y:.3e}",
            suggestion,
        )


class SingularSigmaError(StratawaveError):
    """Raised when sigma cannot be formed because psi_y vanishes on the surface."""

    def __init__(self, min_abs_psi_y: float):
        self.min_abs_psi_y = min_abs_psi_y
        super().__init__(
            f"|psi_y| on the surface drops to {min_abs_psi_y:.3e}; sigma is singular",
            "Stagnation points on the surface are outside the supported flows.",
        )


class HodographUnavailableError(StratawaveError):
    """Raised when a column of the field is not monotone in the stream function."""

    def __init__(self, column: int, reason: str = "psi_y >= 0"):
        self.column = column
        suggestion = (
            "The partial hodograph transform needs psi_y < 0 in the closed domain.\n"
            "  - flattened-coordinate operators remain available for this field"
        )
        super().__init__(
            f"Hodograph inversion failed in column {column} ({reason})", suggestion
        )


class MeshError(StratawaveError, ValueError):
    """Raised when a mesh cannot be built on the given field."""

    def __init__(self, message: str):
        super().__init__(
            message,
            "Use an even number of cells per period and keep xi + d > 0.",
        )


class NotPositiveDefiniteError(StratawaveError):
    """Raised when the right-hand matrix of a pencil is not positive definite."""

    def __init__(self, pivot: int):
        self.pivot = pivot
        suggestion = (
            "The mass form is singular on the active dofs.\n"
            "  - Steklov pencils need static condensation (steklov_spectrum)\n"
            "  - check that every active dof carries volume mass"
        )
        super().__init__(
            f"Matrix B is not positive definite (leading minor {pivot} fails)",
            suggestion,
        )


class IncommensurateGridError(StratawaveError, ValueError):
    """Raised when a grid does not tile an integer number of periods."""

    def __init__(self, n_points: int, window: int):
        self.n_points = n_points
        self.window = window
        super().__init__(
            f"{n_points} grid columns cannot be split into {window} equal periods",
            "The x-grid must have (2M+1) * n columns with n even.",
        )


class SingularOperatorError(StratawaveError):
    """Raised when a linear solve meets an eigenvalue within tolerance of zero."""

    def __init__(self, min_abs_mu: float, tol_zero: float):
        self.min_abs_mu = min_abs_mu
        self.tol_zero = tol_zero
        suggestion = (
            "The even-periodic operator is numerically singular (near bifurcation).\n"
            "  - pick a period where the second eigenvalue is away from zero\n"
            "  - or lower tol_zero if the eigenvalue is a discretization artifact"
        )
        super().__init__(
            f"Operator has an eigenvalue of size {min_abs_mu:.3e} <= tol_zero "
            f"{tol_zero:.1e}; condition estimate {1.0 / max(min_abs_mu, 1e-300):.3e}",
            suggestion,
        )


def format_error(e: Exception) -> str:
    """Format an exception into a user-friendly message.

    Args:
        e: The exception to format.

    Returns:
        A user-friendly error message with suggestions.
    """
    if isinstance(e, StratawaveError):
        return str(e)

    if isinstance(e, FileNotFoundError):
        return (
            f"File not found: {e.filename or e}\n\n"
            "💡 Hint: Check the --config path (use absolute paths if unsure)."
        )

    if isinstance(e, ValueError):
        return (
            f"Invalid value: {e}\n\n"
            "💡 Hint: Check your input parameters match the expected format."
        )

    if isinstance(e, MemoryError):
        return (
            "Out of memory while assembling dense matrices\n\n"
            "💡 Hint: Reduce --grid or --period-multiple."
        )

    return f"Unexpected error: {type(e).__name__}: {e}"
