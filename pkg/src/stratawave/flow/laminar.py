"""Laminar background flows and the bifurcation wavenumber.

A laminar flow psi = Psi(y) solves the two-point problem

    Psi'' + omega(y, Psi) = 0,    Psi(-d) = -p0,    Psi(0) = 0,

which is shot from the surface on the unknown slope Psi'(0). Small waves
bifurcate from it at wavenumbers tau where the transverse problem

    gamma'' + (omega*(y) - tau^2) gamma = 0,   gamma(-d) = 0,
    Psi'(0) gamma'(0) - sigma gamma(0) = 0

has a nontrivial solution.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from stratawave.errors import NoBifurcationError, ShootingDivergenceError
from stratawave.flow.field import FlowParameters
from stratawave.flow.profiles import FluidProfiles

logger = logging.getLogger(__name__)

RTOL = 1e-12
ATOL = 1e-14


@dataclass(frozen=True)
class LaminarProfile:
    """Laminar stream function Psi(y) with its transverse mode.

    Attributes:
        params: Flow parameters with the Bernoulli constant R filled in.
        slope: Psi'(0).
        monotone: Whether Psi' < 0 on [-d, 0].
        residual: Terminal shooting residual |Psi(-d) + p0|.
        y_top: Upper end of the dense solution (above the flat surface).
        tau: Wavenumber of the stored transverse mode, None if absent.
        xi0: Surface height of the laminar flow.
    """

    params: FlowParameters
    slope: float
    monotone: bool
    residual: float
    y_top: float
    _below: Callable = field(repr=False, compare=False)
    _above: Callable = field(repr=False, compare=False)
    _omega: Callable = field(repr=False, compare=False)
    tau: Optional[float] = None
    _gamma: Optional[Callable] = field(default=None, repr=False, compare=False)
    _gamma_scale: float = 1.0
    xi0: float = 0.0

    @property
    def R(self) -> float:
        return float(self.params.R)

    def _state(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        flat = np.ravel(y)
        out = np.empty((2, flat.size))
        low = flat <= 0.0
        if np.any(low):
            out[:, low] = self._below(flat[low])
        if np.any(~low):
            out[:, ~low] = self._above(flat[~low])
        return out.reshape((2,) + y.shape)

    def psi(self, y) -> np.ndarray:
        """Psi(y)."""
        return self._state(y)[0]

    def psi_y(self, y) -> np.ndarray:
        """Psi'(y)."""
        return self._state(y)[1]

    def psi_yy(self, y) -> np.ndarray:
        """Psi''(y) = -omega(y, Psi(y))."""
        return -self._omega(np.asarray(y, dtype=float), self.psi(y))

    def gamma(self, y) -> np.ndarray:
        """Transverse mode normalized by gamma(0) = 1."""
        return self._mode(y)[0]

    def gamma_y(self, y) -> np.ndarray:
        """Derivative of the transverse mode."""
        return self._mode(y)[1]

    def _mode(self, y) -> np.ndarray:
        if self._gamma is None:
            raise ValueError("no transverse mode stored; call with_mode(tau, profiles) first")
        y = np.asarray(y, dtype=float)
        values = self._gamma(np.ravel(y)) / self._gamma_scale
        return values.reshape((2,) + y.shape)

    def surface_sigma(self, profiles: FluidProfiles) -> float:
        """sigma = (Psi' Psi'' + g rho(0)) / Psi' at the flat surface."""
        psi_yy0 = float(self.psi_yy(0.0))
        return (self.slope * psi_yy0 + self.params.g * profiles.rho_surface) / self.slope

    def with_mode(self, tau: float, profiles: FluidProfiles) -> "LaminarProfile":
        """Copy of this profile carrying the transverse mode at ``tau``."""
        solution, scale = _shoot_mode(self, profiles, tau, self.y_top)
        if scale == 0.0:
            raise ValueError(f"transverse mode vanishes at the surface for tau={tau}")
        return replace(self, tau=float(tau), _gamma=solution, _gamma_scale=scale)


def solve_laminar(
    profiles: FluidProfiles,
    params: FlowParameters,
    extension: float = 0.5,
    tol: float = 1e-10,
) -> LaminarProfile:
    """Solve the laminar two-point problem by shooting on Psi'(0).

    Args:
        profiles: Density and Bernoulli profiles.
        params: Flow parameters; ``R`` is ignored and recomputed.
        extension: The dense solution covers [-d, d * extension].
        tol: Admissible terminal residual.

    Returns:
        Laminar profile with R = Psi'(0)^2 / 2 + g rho(0) d.

    Raises:
        ShootingDivergenceError: If no slope brings Psi(-d) to -p0.

    Example:
        >>> from stratawave.flow.profiles import make_profiles
        >>> lam = solve_laminar(make_profiles("constant"), FlowParameters())
        >>> round(lam.R, 12)
        2.5
    """
    d, g, p0 = params.d, params.g, params.p0

    def rhs(y, state):
        return [state[1], -profiles.omega(y, state[0], g)]

    def terminal(slope: float) -> float:
        sol = solve_ivp(rhs, (0.0, -d), [0.0, slope], method="RK45", rtol=RTOL, atol=ATOL)
        if sol.status != 0 or not np.all(np.isfinite(sol.y[:, -1])):
            return math.nan
        return float(sol.y[0, -1] + p0)

    s0 = p0 / d
    delta = 0.5 * max(abs(s0), 1.0)
    best = math.inf
    root = None
    for _ in range(10):
        a, b = s0 - delta, s0 + delta
        fa, fb = terminal(a), terminal(b)
        for value in (fa, fb):
            if math.isfinite(value):
                best = min(best, abs(value))
        if math.isfinite(fa) and math.isfinite(fb) and fa * fb <= 0:
            root = brentq(terminal, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            break
        delta *= 2.0
    if root is None:
        raise ShootingDivergenceError(
            best, "no sign change of Psi(-d) + p0 around the initial slope"
        )

    residual = abs(terminal(root))
    if not residual <= tol:
        raise ShootingDivergenceError(residual)

    y_top = d * extension
    below = solve_ivp(
        rhs, (0.0, -d), [0.0, root], method="RK45", rtol=RTOL, atol=ATOL, dense_output=True
    ).sol
    above = solve_ivp(
        rhs, (0.0, y_top), [0.0, root], method="RK45", rtol=RTOL, atol=ATOL, dense_output=True
    ).sol

    samples = np.linspace(-d, 0.0, 201)
    monotone = bool(np.all(below(samples)[1] < 0.0))
    R = 0.5 * root**2 + g * profiles.rho_surface * d
    logger.debug(
        f"Laminar shooting: slope={root:.12g}, residual={residual:.2e}, R={R:.12g}, "
        f"monotone={monotone}"
    )

    def omega(y, psi):
        return profiles.omega(y, psi, g)

    return LaminarProfile(
        params=replace(params, R=R),
        slope=float(root),
        monotone=monotone,
        residual=residual,
        y_top=y_top,
        _below=below,
        _above=above,
        _omega=omega,
    )


def cubic_laminar_profile(
    slope: float, beta0: float, params: FlowParameters
) -> Callable[[np.ndarray], np.ndarray]:
    """Closed-form laminar profile for linear density and constant beta.

    With rho' = slope and beta = beta0 the laminar equation is
    Psi'' = g slope y + beta0, whose solution with the boundary values is
    Psi = g slope y^3 / 6 + beta0 y^2 / 2 + A y.
    """
    d, g, p0 = params.d, params.g, params.p0
    A = (p0 - g * slope * d**3 / 6.0 + beta0 * d**2 / 2.0) / d

    def profile(y):
        y = np.asarray(y, dtype=float)
        return g * slope * y**3 / 6.0 + beta0 * y**2 / 2.0 + A * y

    return profile


def _shoot_mode(
    laminar: LaminarProfile, profiles: FluidProfiles, tau: float, y_end: float
) -> Tuple[Callable, float]:
    g = laminar.params.g
    d = laminar.params.d

    def rhs(y, state):
        omega_star = profiles.omega_psi(y, laminar.psi(y), g)
        return [state[1], (tau**2 - omega_star) * state[0]]

    sol = solve_ivp(
        rhs, (-d, y_end), [0.0, 1.0], method="RK45", rtol=RTOL, atol=ATOL, dense_output=True
    ).sol
    return sol, float(sol(0.0)[0])


def transverse_mode(
    laminar: LaminarProfile, profiles: FluidProfiles, tau: float
) -> LaminarProfile:
    """Attach the transverse mode at an arbitrary wavenumber."""
    return laminar.with_mode(tau, profiles)


def dispersion_function(
    laminar: LaminarProfile, profiles: FluidProfiles, tau: float, rtol: float = RTOL
) -> float:
    """Normalized surface condition Psi'(0) gamma'(0) - sigma gamma(0).

    gamma is shot from the bed with gamma(-d) = 0, gamma'(-d) = 1; a zero of
    this function in tau is a bifurcation wavenumber.
    """
    sigma = laminar.surface_sigma(profiles)
    g = laminar.params.g

    def rhs(y, state):
        omega_star = profiles.omega_psi(y, laminar.psi(y), g)
        return [state[1], (tau**2 - omega_star) * state[0]]

    sol = solve_ivp(
        rhs, (-laminar.params.d, 0.0), [0.0, 1.0], method="RK45", rtol=rtol, atol=rtol * 1e-2
    )
    gamma0, gamma1 = sol.y[:, -1]
    value = laminar.slope * gamma1 - sigma * gamma0
    return float(value / (abs(laminar.slope * gamma1) + abs(sigma * gamma0)))


def bifurcation_tau(
    laminar: LaminarProfile,
    profiles: FluidProfiles,
    params: Optional[FlowParameters] = None,
    tau_max: Optional[float] = None,
    n_scan: int = 160,
) -> Tuple[float, LaminarProfile]:
    """Smallest positive wavenumber at which waves bifurcate from ``laminar``.

    The scan runs at a loose tolerance and stops at the first sign change;
    the root is then refined at full accuracy.

    Args:
        laminar: Laminar profile.
        profiles: Profiles used to build it.
        params: Optional override of the flow parameters (depth sets the scan).
        tau_max: Upper end of the scan, default 20 / d.
        n_scan: Number of scan points.

    Returns:
        The wavenumber and a copy of ``laminar`` carrying gamma normalized by
        gamma(0) = 1.

    Raises:
        NoBifurcationError: If the dispersion function keeps one sign.
    """
    d = (params or laminar.params).d
    tau_min = 1e-3 / d
    tau_max = tau_max if tau_max is not None else 20.0 / d
    taus = np.linspace(tau_min, tau_max, n_scan)

    bracket = None
    previous = dispersion_function(laminar, profiles, taus[0], rtol=1e-8)
    for left, right in zip(taus[:-1], taus[1:]):
        current = dispersion_function(laminar, profiles, right, rtol=1e-8)
        if np.sign(previous) != np.sign(current):
            bracket = (float(left), float(right))
            break
        previous = current
    if bracket is None:
        raise NoBifurcationError((tau_min, tau_max))

    def refined(t: float) -> float:
        return dispersion_function(laminar, profiles, t)

    a, b = bracket
    if refined(a) * refined(b) > 0:
        # loose-tolerance bracket missed the accurate root
        a, b = max(tau_min, a - (b - a)), b + (b - a)
    tau = brentq(refined, a, b, xtol=1e-14, maxiter=200)
    logger.debug(f"Bifurcation wavenumber {tau:.12g} in scan [{tau_min:.3g}, {tau_max:.3g}]")
    return float(tau), laminar.with_mode(tau, profiles)
