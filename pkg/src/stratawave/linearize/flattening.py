"""Frechet derivative of the flattened water-wave problem.

On the flattened rectangle the interior equation reads
``D^2 psi + b^2 psi_etaeta + omega(y(eta), psi) = 0`` with ``D = d/dX + a d/deta``,
and the Bernoulli condition ``((D psi)^2 + b^2 psi_eta^2) / 2 + g rho(0) (xi + d) = R``.
Perturbing (psi, xi) by (u, zeta) gives

    F(u, zeta) = Delta u + da d_eta(D psi) + D(da psi_eta)
                 - 2 d^2 zeta / (xi + d)^3 psi_etaeta
                 + omega_psi u + omega_y eta zeta / d,
    G(u, zeta) = (D psi)(D u) + b^2 psi_eta u_eta + g rho(0) zeta
                 + (D psi)(da psi_eta) - d^2 zeta psi_eta^2 / (xi + d)^3,

with ``da = -eta (zeta / (xi + d))'``. The physical function
``v = u - psi_y eta zeta / d`` then satisfies

    (Delta + omega*) v = F(u, zeta) - (eta zeta / d) r_y,
    psi_x v_x + psi_y v_y + sigma_hat zeta = G(u, zeta)   on the surface,

where r = Delta psi + omega vanishes for an exact background.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from stratawave.flow.field import WaveField
from stratawave.flow.profiles import FluidProfiles
from stratawave.flow.residual import interior_residual
from stratawave.linearize.coefficients import LinearizedCoefficients
from stratawave.utils import spectral_derivative

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlatteningReport:
    """Operator values and substitution residuals of the flattening lemma.

    Attributes:
        F: Interior operator F(u, zeta) on the grid.
        G: Surface operator G(u, zeta).
        interior: max |(Delta + omega*) v - F| over interior rows.
        surface: max |psi_x v_x + psi_y v_y + sigma_hat zeta - G|.
        interior_consistent: interior residual with the background residual
            term added back.
    """

    F: np.ndarray = field(repr=False, compare=False)
    G: np.ndarray = field(repr=False, compare=False)
    interior: float = 0.0
    surface: float = 0.0
    interior_consistent: float = 0.0

    def to_dict(self) -> Dict[str, float]:
        return {
            "interior": self.interior,
            "surface": self.surface,
            "interior_consistent": self.interior_consistent,
        }


def flattening_frechet(
    field: WaveField,
    coeffs: LinearizedCoefficients,
    profiles: FluidProfiles,
    u: np.ndarray,
    zeta: np.ndarray,
    margin: int = 1,
) -> FlatteningReport:
    """Evaluate F(u, zeta), G(u, zeta) and check the substitution identity.

    Args:
        field: Background field.
        coeffs: Coefficients at ``field``.
        profiles: Density and Bernoulli profiles.
        u: Flattened perturbation, zero on the bed and surface rows.
        zeta: Even periodic surface perturbation on the x-grid.
        margin: Rows excluded next to the bed and surface.

    Returns:
        Operator values and residual norms.
    """
    calc = field.calculus()
    params = field.params
    d, g = params.d, params.g
    eta = calc.eta[None, :]
    zeta = np.asarray(zeta, dtype=float)
    u = np.asarray(u, dtype=float)
    psi = field.psi
    stretch = (field.xi + d)[:, None]
    zeta_col = zeta[:, None]

    ratio_x = spectral_derivative(zeta / (field.xi + d), params.Lambda)[:, None]
    da = -eta * ratio_x

    psi_eta = calc.deta(psi)
    psi_etaeta = calc.detaeta(psi)
    D_psi = calc.dX(psi) + calc.a * psi_eta
    D_u = calc.dX(u) + calc.a * calc.deta(u)
    y = calc.y
    dy = eta * zeta_col / d

    F = (
        calc.laplacian(u)
        + da * calc.deta(D_psi)
        + calc.dX(da * psi_eta)
        + calc.a * calc.deta(da * psi_eta)
        - 2.0 * d**2 * zeta_col / stretch**3 * psi_etaeta
        + profiles.omega_psi(y, psi, g) * u
        + profiles.omega_y(y, psi, g) * dy
    )
    rho0 = profiles.rho_surface
    top = np.s_[:, -1]
    G = (
        D_psi[top] * D_u[top]
        + calc.b[top] ** 2 * psi_eta[top] * calc.deta(u)[top]
        + g * rho0 * zeta
        + D_psi[top] * (da * psi_eta)[top]
        - d**2 * zeta * psi_eta[top] ** 2 / (field.xi + d) ** 3
    )

    psi_x, psi_y = calc.gradient(psi)
    v = u - psi_y * dy
    Av = calc.laplacian(v) + coeffs.omega_star * v
    r_y = calc.b * calc.deta(interior_residual(field, profiles))
    inner = slice(margin, -margin) if margin else slice(None)
    raw = Av - F
    v_x, v_y = calc.gradient(v)
    lhs_surface = psi_x[top] * v_x[top] + psi_y[top] * v_y[top] + coeffs.sigma_hat * zeta

    report = FlatteningReport(
        F=F,
        G=G,
        interior=float(np.max(np.abs(raw[:, inner]))),
        surface=float(np.max(np.abs(lhs_surface - G))),
        interior_consistent=float(np.max(np.abs((raw + dy * r_y)[:, inner]))),
    )
    logger.debug(
        f"Flattening residuals on {field.Nx}x{field.Ny}: interior={report.interior:.3e}, "
        f"surface={report.surface:.3e}"
    )
    return report
