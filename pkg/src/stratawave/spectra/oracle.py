"""Mode-by-mode eigenvalues of laminar flows.

On a laminar flow the coefficients depend on y only, so every spectral
problem separates into Fourier modes ``cos(k x)`` / ``sin(k x)`` times a
transverse function. The transverse problem

    -gamma'' - omega*(y) gamma = nu gamma,   gamma(-d) = 0,
    gamma'(0) + w gamma(0) = 0,              w = -sigma / Psi'(0),

is solved by shooting, and the eigenvalues are ``mu = k^2 + nu``. These
values are the independent reference for the two-dimensional solver.
"""

import logging
import math
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from stratawave.assembly.problem import BoundaryCondition
from stratawave.flow.laminar import LaminarProfile
from stratawave.flow.profiles import FluidProfiles

logger = logging.getLogger(__name__)

SCAN_RTOL = 1e-8
ROOT_RTOL = 1e-11


def _shoot(
    laminar: LaminarProfile, profiles: FluidProfiles, shift: float, rtol: float
) -> Tuple[float, float]:
    """(gamma(0), gamma'(0)) of gamma'' = (shift - omega*) gamma from the bed."""
    g = laminar.params.g

    def rhs(y, state):
        omega_star = float(profiles.omega_psi(y, laminar.psi(y), g))
        return [state[1], (shift - omega_star) * state[0]]

    sol = solve_ivp(
        rhs, (-laminar.params.d, 0.0), [0.0, 1.0], method="RK45", rtol=rtol, atol=rtol * 1e-2
    )
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def robin_weight(laminar: LaminarProfile, profiles: FluidProfiles) -> float:
    """Surface weight -sigma / Psi'(0) of the laminar quadratic form."""
    return -laminar.surface_sigma(profiles) / laminar.slope


def transverse_eigenvalues(
    laminar: LaminarProfile, profiles: FluidProfiles, count: int = 3
) -> np.ndarray:
    """Lowest ``count`` eigenvalues nu of the transverse problem.

    Args:
        laminar: Laminar profile.
        profiles: Profiles it was solved with.
        count: Number of eigenvalues.

    Returns:
        Increasing eigenvalues.

    Example:
        >>> nu = transverse_eigenvalues(bench_laminar, make_profiles("constant"), 2)
        >>> nu.round(3).tolist()
        [-3.667, 18.264]
    """
    d = laminar.params.d
    w = robin_weight(laminar, profiles)
    y = np.linspace(-d, 0.0, 65)
    omega_max = float(np.max(profiles.omega_psi(y, laminar.psi(y), laminar.params.g)))
    lower = -omega_max - (w * w if w < 0 else 0.0) - 1.0 / d**2
    step = 0.5 / d**2

    def condition(nu: float, rtol: float) -> float:
        gamma0, gamma1 = _shoot(laminar, profiles, -nu, rtol)
        return (gamma1 + w * gamma0) / math.hypot(gamma0, gamma1)

    roots: List[float] = []
    left = lower
    f_left = condition(left, SCAN_RTOL)
    while len(roots) < count:
        right = left + step
        f_right = condition(right, SCAN_RTOL)
        if f_left == 0.0:
            roots.append(left)
        elif f_left * f_right < 0:
            roots.append(
                brentq(lambda nu: condition(nu, ROOT_RTOL), left, right, xtol=1e-13, maxiter=200)
            )
        left, f_left = right, f_right
        # gaps grow like (pi/d)^2 j
        step = 0.5 / d**2 * (1 + len(roots))
    logger.debug(f"Transverse eigenvalues {roots}")
    return np.asarray(roots[:count])


def mode_wavenumbers(
    bc: Union[BoundaryCondition, str], period: float, m: int, n_modes: int, tau: float = 0.0
) -> np.ndarray:
    """Horizontal wavenumbers of a boundary-condition family, with multiplicity.

    Args:
        bc: Boundary-condition family.
        period: Period Lambda.
        m: Number of periods.
        n_modes: Number of mode indices per family.
        tau: Bloch parameter (``bloch`` only).

    Returns:
        Wavenumbers |k|, one entry per independent mode.
    """
    bc = BoundaryCondition(bc)
    length = m * period
    n = np.arange(n_modes)
    if bc is BoundaryCondition.PERIODIC_EVEN:
        return 2.0 * math.pi * n / length
    if bc is BoundaryCondition.PERIODIC_FULL:
        k = 2.0 * math.pi * n / length
        return np.concatenate([k, k[1:]])
    if bc is BoundaryCondition.BLOCH:
        signed = np.arange(-n_modes, n_modes + 1)
        return np.abs(tau + 2.0 * math.pi * signed / length)
    if bc is BoundaryCondition.DIRICHLET_SIDES:
        return math.pi * (n + 1) / length
    if bc is BoundaryCondition.NEUMANN_SIDES:
        return math.pi * n / length
    half = 0.5 * length
    if bc is BoundaryCondition.HALF_DD:
        return math.pi * (n + 1) / half
    if bc is BoundaryCondition.HALF_NN:
        return math.pi * n / half
    return math.pi * (n + 0.5) / half


def dispersion_oracle(
    laminar: LaminarProfile,
    profiles: FluidProfiles,
    count: int,
    bc: Union[BoundaryCondition, str] = BoundaryCondition.PERIODIC_EVEN,
    m: int = 1,
    tau: float = 0.0,
    period: Optional[float] = None,
    n_transverse: int = 3,
) -> np.ndarray:
    """Lowest ``count`` values k^2 + nu_j of a laminar spectral problem.

    Args:
        laminar: Laminar profile.
        profiles: Profiles it was solved with.
        count: Number of eigenvalues.
        bc: Boundary-condition family.
        m: Number of periods.
        tau: Bloch parameter.
        period: Period, defaults to the laminar parameters' Lambda.
        n_transverse: Number of transverse eigenvalues combined with each k.

    Returns:
        Sorted eigenvalues.
    """
    period = laminar.params.Lambda if period is None else period
    nu = transverse_eigenvalues(laminar, profiles, n_transverse)
    k = mode_wavenumbers(bc, period, m, count + 1, tau=tau)
    values = np.sort((k[:, None] ** 2 + nu[None, :]).ravel())
    return values[:count]


def steklov_oracle(
    laminar: LaminarProfile,
    profiles: FluidProfiles,
    count: int,
    b: float = 1.0,
    bc: Union[BoundaryCondition, str] = BoundaryCondition.PERIODIC_EVEN,
    m: int = 1,
    period: Optional[float] = None,
) -> np.ndarray:
    """Lowest Steklov values theta(k) of a laminar flow.

    For each mode the harmonic-type extension u'' = (k^2 - omega*) u from the
    bed gives ``theta = (u'(0)/u(0) + w) / s`` with surface weight
    ``s = -b / Psi'(0)``. Where omega* vanishes this is
    ``theta(k) = (k coth(k d) + w) / s``, e.g. ``k coth k - 2`` on the
    constant-density flow with g = 2, d = 1, p0 = -1.

    Args:
        laminar: Laminar profile.
        profiles: Profiles it was solved with.
        count: Number of eigenvalues.
        b: Constant surface weight.
        bc: Boundary-condition family.
        m: Number of periods.
        period: Period, defaults to the laminar parameters' Lambda.

    Returns:
        Sorted eigenvalues.
    """
    period = laminar.params.Lambda if period is None else period
    w = robin_weight(laminar, profiles)
    s = -b / laminar.slope
    k = mode_wavenumbers(bc, period, m, count)
    theta = []
    for wavenumber in k:
        u0, u1 = _shoot(laminar, profiles, float(wavenumber) ** 2, ROOT_RTOL)
        theta.append((u1 / u0 + w) / s)
    return np.sort(np.asarray(theta))[:count]
