"""The linearized interior and surface operators.

    A u = Delta u + omega* u                      in the fluid
    B u = psi_x u_x + psi_y u_y - sigma u         on the free surface
"""

from typing import Tuple

import numpy as np

from stratawave.flow.field import WaveField
from stratawave.linearize.coefficients import LinearizedCoefficients


def apply_AB(
    coeffs: LinearizedCoefficients,
    field: WaveField,
    u: np.ndarray,
    tau: float = 0.0,
    spectral: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """Apply A and B to a grid function.

    With ``tau`` nonzero, d/dx is replaced by d/dx + i tau, giving the
    operators acting on the Bloch component at quasimomentum tau.

    Args:
        coeffs: Coefficients at ``field``.
        field: Background field.
        u: Grid function of shape (Nx, Ny + 1), zero on the bed.
        tau: Bloch parameter.
        spectral: Use FFT x-derivatives.

    Returns:
        (Au on every node, Bu on the surface row).
    """
    calc = field.calculus(tau=tau, spectral=spectral)
    Au = calc.laplacian(u) + coeffs.omega_star * u
    u_x, u_y = calc.gradient(u)
    Bu = coeffs.psi_x_s * u_x[:, -1] + coeffs.psi_y_s * u_y[:, -1] - coeffs.sigma * u[:, -1]
    return Au, Bu


def psi_x(field: WaveField, spectral: bool = True) -> np.ndarray:
    """The kernel element psi_x of the field (odd in x)."""
    return field.calculus(spectral=spectral).gradient(field.psi)[0]
