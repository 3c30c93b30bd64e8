"""Residuals of the stream-function formulation on a sampled field."""

import logging
from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np

from stratawave.flow.field import WaveField
from stratawave.flow.profiles import FluidProfiles

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidualReport:
    """Sup-norm residuals of a background field.

    Attributes:
        r_interior: max |Delta psi + omega(y, psi)| over interior rows.
        r_bernoulli: max |grad psi|^2 / 2 + g rho(0) (xi + d) - R| on the surface.
        r_kinematic: max boundary-value error on the surface and bed rows.
    """

    r_interior: float
    r_bernoulli: float
    r_kinematic: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    def max(self) -> float:
        return max(self.r_interior, self.r_bernoulli, self.r_kinematic)


def interior_residual(
    field: WaveField, profiles: FluidProfiles, spectral: bool = False
) -> np.ndarray:
    """Grid function Delta psi + omega(y, psi) on every node."""
    calc = field.calculus(spectral=spectral)
    return calc.laplacian(field.psi) + profiles.omega(calc.y, field.psi, field.params.g)


def bernoulli_residual(field: WaveField, profiles: FluidProfiles) -> np.ndarray:
    """Surface function |grad psi|^2 / 2 + g rho(0) (xi + d) - R."""
    if field.params.R is None:
        raise ValueError("field parameters carry no Bernoulli constant R")
    psi_x, psi_y = field.calculus().gradient(field.psi)
    speed2 = psi_x[:, -1] ** 2 + psi_y[:, -1] ** 2
    params = field.params
    return 0.5 * speed2 + params.g * profiles.rho_surface * (field.xi + params.d) - params.R


def pde_residual(field: WaveField, profiles: FluidProfiles) -> ResidualReport:
    """Residuals of the interior equation, the Bernoulli condition and boundary values.

    Args:
        field: Background field.
        profiles: Density and Bernoulli profiles.

    Returns:
        Sup-norms of the three residuals; exact boundary rows give zero.
    """
    r = interior_residual(field, profiles)
    r_interior = float(np.max(np.abs(r[:, 1:-1])))
    r_bernoulli = float(np.max(np.abs(bernoulli_residual(field, profiles))))
    r_kinematic = float(
        max(
            np.max(np.abs(field.psi[:, -1])),
            np.max(np.abs(field.psi[:, 0] + field.params.p0)),
        )
    )
    report = ResidualReport(r_interior, r_bernoulli, r_kinematic)
    logger.debug(f"Residuals for {field.Nx}x{field.Ny} field: {report}")
    return report
