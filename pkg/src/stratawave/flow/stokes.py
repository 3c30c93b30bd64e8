"""First-order Stokes-wave fields bifurcating from a laminar flow.

Near a bifurcation the branch is

    psi = Psi(y) + t cos(tau x) gamma(y) + O(t^2),
    xi  = -t cos(tau x) gamma(0) / Psi'(0) + O(t^2),

where the surface term follows from linearizing psi(x, xi(x)) = 0.
"""

import logging
import math
from dataclasses import replace
from typing import Optional

import numpy as np

from stratawave.errors import MeshError, SurfaceStagnationError
from stratawave.flow.field import WaveField
from stratawave.flow.laminar import LaminarProfile
from stratawave.flow.profiles import FluidProfiles
from stratawave.utils import period_grid, symmetrize_even

logger = logging.getLogger(__name__)


def stokes_field(
    laminar: LaminarProfile,
    tau: float,
    t: float,
    Nx: int = 48,
    Ny: int = 24,
    profiles: Optional[FluidProfiles] = None,
) -> WaveField:
    """Build the first-order expansion field on a Lambda = 2*pi/tau period.

    The O(t^2) mismatch of the surface condition is removed by subtracting
    ``psi(x, xi(x)) * eta / d``, so the boundary rows hold exactly.

    Args:
        laminar: Laminar profile; must carry the mode at ``tau`` unless
            ``profiles`` is given.
        tau: Wavenumber of the expansion.
        t: Amplitude.
        Nx: Number of x-nodes per period (even).
        Ny: Number of eta cells.
        profiles: Profiles used to attach the mode when it is missing.

    Returns:
        Even field with amplitude tag ``t``.

    Raises:
        MeshError: If the surface dips below the bed or leaves the dense range.
        SurfaceStagnationError: If psi_y >= 0 somewhere on the surface row.
    """
    if laminar.tau is None or not math.isclose(laminar.tau, tau, rel_tol=1e-13):
        if profiles is None:
            raise ValueError(
                f"laminar profile carries the mode at tau={laminar.tau}, not {tau}; "
                "pass profiles to attach it"
            )
        laminar = laminar.with_mode(tau, profiles)

    params = replace(laminar.params, Lambda=2.0 * math.pi / tau)
    d, p0 = params.d, params.p0
    x = period_grid(params.Lambda, Nx)
    cos = np.cos(tau * x)
    xi = symmetrize_even(-t * cos * float(laminar.gamma(0.0)) / laminar.slope)
    if np.min(xi) + d <= 0:
        raise MeshError(f"amplitude {t} pushes the surface below the bed")
    if np.max(xi) > laminar.y_top:
        raise MeshError(
            f"surface reaches {np.max(xi):.3g}, "
            f"above the laminar solution range {laminar.y_top:.3g}"
        )

    eta = np.linspace(0.0, d, Ny + 1)
    Y = eta[None, :] * ((xi + d) / d)[:, None] - d
    psi = laminar.psi(Y) + t * cos[:, None] * laminar.gamma(Y)
    psi = psi - psi[:, -1:] * (eta / d)[None, :]
    psi[:, 0] = -p0
    psi[:, -1] = 0.0
    psi = symmetrize_even(psi)

    field = WaveField(params, psi, xi, amplitude=float(t), tau=float(tau))
    _, psi_y = field.calculus().gradient(field.psi)
    surface_max = float(np.max(psi_y[:, -1]))
    if surface_max >= 0.0:
        raise SurfaceStagnationError(surface_max)
    logger.debug(
        f"Stokes field t={t:g}, tau={tau:.10g}, grid {Nx}x{Ny}, max|xi|={np.max(np.abs(xi)):.3e}"
    )
    return field
