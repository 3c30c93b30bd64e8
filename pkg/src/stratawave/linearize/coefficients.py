"""Coefficients of the Frechet derivative at a background field.

    omega*(x, y) = g y rho''(-psi) - beta'(psi)
    sigma(x)     = (psi_x psi_xy + psi_y psi_yy + g rho(0)) / psi_y   on y = xi(x)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from stratawave.errors import SingularSigmaError
from stratawave.flow.field import WaveField
from stratawave.flow.profiles import FluidProfiles

logger = logging.getLogger(__name__)

PSI_Y_FLOOR = 1e-8


@dataclass(frozen=True)
class LinearizedCoefficients:
    """Potential and surface coefficient of the linearized operators.

    Attributes:
        omega_star: omega* on every grid node, shape (Nx, Ny + 1).
        sigma: sigma on the surface row, shape (Nx,).
        psi_x_s: psi_x on the surface row.
        psi_y_s: psi_y on the surface row.
        sigma_hat: psi_x psi_xy + psi_y psi_yy + g rho(0) on the surface row.
        rho_surface: rho(0).
    """

    omega_star: np.ndarray = field(repr=False, compare=False)
    sigma: np.ndarray = field(repr=False, compare=False)
    psi_x_s: np.ndarray = field(repr=False, compare=False)
    psi_y_s: np.ndarray = field(repr=False, compare=False)
    sigma_hat: np.ndarray = field(repr=False, compare=False)
    rho_surface: float = 1.0

    @property
    def robin_weight(self) -> np.ndarray:
        """Surface weight -sigma / psi_y of the quadratic form."""
        return -self.sigma / self.psi_y_s

    def to_dict(self) -> Dict[str, Any]:
        return {
            "omega_star": self.omega_star.tolist(),
            "sigma": self.sigma.tolist(),
            "psi_x_s": self.psi_x_s.tolist(),
            "psi_y_s": self.psi_y_s.tolist(),
        }


def coefficients(
    field: WaveField, profiles: FluidProfiles, spectral: bool = False
) -> LinearizedCoefficients:
    """Compute omega* on the grid and sigma on the surface.

    Args:
        field: Background field.
        profiles: Density and Bernoulli profiles.
        spectral: Use FFT x-derivatives.

    Returns:
        Coefficients on the field's grid.

    Raises:
        SingularSigmaError: If |psi_y| on the surface drops below 1e-8.

    Example:
        >>> coeffs = coefficients(laminar_field, make_profiles("constant"))
        >>> float(coeffs.sigma[0])
        -2.0
    """
    calc = field.calculus(spectral=spectral)
    g = field.params.g
    omega_star = profiles.omega_psi(calc.y, field.psi, g)

    psi_x, psi_y = calc.gradient(field.psi)
    _, psi_xy, psi_yy = calc.hessian(field.psi)
    px, py = psi_x[:, -1], psi_y[:, -1]
    floor = float(np.min(np.abs(py)))
    if floor < PSI_Y_FLOOR:
        raise SingularSigmaError(floor)
    rho0 = profiles.rho_surface
    sigma_hat = px * psi_xy[:, -1] + py * psi_yy[:, -1] + g * rho0
    sigma = sigma_hat / py
    logger.debug(
        f"Coefficients: max|omega*|={np.max(np.abs(omega_star)):.3e}, "
        f"sigma in [{sigma.min():.6g}, {sigma.max():.6g}]"
    )
    return LinearizedCoefficients(
        omega_star=omega_star,
        sigma=sigma,
        psi_x_s=px,
        psi_y_s=py,
        sigma_hat=sigma_hat,
        rho_surface=rho0,
    )
