"""Density and Bernoulli profiles of a stratified flow.

The density is a function of ``s = -psi`` on ``[p0, 0]`` and the Bernoulli
function a function of the stream function itself, so that the interior
equation reads ``Delta psi + omega(y, psi) = 0`` with

    omega(y, psi) = -g * y * rho'(-psi) - beta(psi).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from stratawave.errors import ProfileError

logger = logging.getLogger(__name__)

Profile = Callable[[Any], np.ndarray]


class ProfileKind(Enum):
    """Supported profile families."""

    CONSTANT = "constant"
    LINEAR_RHO_CONSTANT_BETA = "linear-rho-constant-beta"
    CUSTOM_SAMPLED = "custom-sampled"


def _constant(value: float) -> Profile:
    def profile(arg):
        return np.full(np.shape(arg), float(value))

    return profile


def _affine(intercept: float, slope: float) -> Profile:
    def profile(arg):
        return intercept + slope * np.asarray(arg, dtype=float)

    return profile


@dataclass(frozen=True)
class FluidProfiles:
    """Density rho(s) and Bernoulli function beta(psi) with derivatives.

    Attributes:
        kind: Profile family.
        p0: Relative pseudomass; rho is validated on [p0, 0].
        parameters: Constructor parameters, kept for serialization.
        rho: Density as a function of s = -psi.
        rho1: First derivative of rho.
        rho2: Second derivative of rho.
        beta: Bernoulli function of psi.
        beta1: Derivative of beta.
    """

    kind: ProfileKind
    p0: float
    parameters: Dict[str, Any]
    rho: Profile = field(repr=False, compare=False)
    rho1: Profile = field(repr=False, compare=False)
    rho2: Profile = field(repr=False, compare=False)
    beta: Profile = field(repr=False, compare=False)
    beta1: Profile = field(repr=False, compare=False)

    def __post_init__(self):
        if self.p0 >= 0:
            raise ProfileError(f"p0 must be negative, got {self.p0}")
        s = np.linspace(self.p0, 0.0, 257)
        rho_min = float(np.min(self.rho(s)))
        if rho_min <= 0:
            raise ProfileError(
                f"density must be positive on [p0, 0], found min {rho_min:.4g}"
            )

    @property
    def rho_surface(self) -> float:
        """Density on the free surface, rho(0)."""
        return float(self.rho(0.0))

    def omega(self, y, psi, g: float) -> np.ndarray:
        """Vorticity function omega(y, psi)."""
        psi = np.asarray(psi)
        return -g * np.asarray(y) * self.rho1(-psi) - self.beta(psi)

    def omega_psi(self, y, psi, g: float) -> np.ndarray:
        """Partial derivative of omega in psi (the potential omega*)."""
        psi = np.asarray(psi)
        return g * np.asarray(y) * self.rho2(-psi) - self.beta1(psi)

    def omega_y(self, y, psi, g: float) -> np.ndarray:
        """Partial derivative of omega in y at fixed psi."""
        psi = np.asarray(psi)
        return -g * self.rho1(-psi) * np.ones(np.broadcast(np.asarray(y), psi).shape)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to a JSON-compatible dictionary."""
        return {"kind": self.kind.value, "p0": self.p0, **self.parameters}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FluidProfiles":
        """Rebuild profiles from :meth:`to_dict` output."""
        data = dict(data)
        kind = data.pop("kind")
        p0 = data.pop("p0")
        return make_profiles(kind, data, p0)


def make_profiles(
    kind: str, parameters: Optional[Dict[str, Any]] = None, p0: float = -1.0
) -> FluidProfiles:
    """Build fluid profiles of the requested family.

    Args:
        kind: ``constant``, ``linear-rho-constant-beta`` or ``custom-sampled``.
        parameters: Family parameters:
            constant: ``rho0`` (default 1).
            linear-rho-constant-beta: ``rho0``, ``slope``, ``beta0``.
            custom-sampled: ``s`` (increasing samples covering [p0, 0]),
            ``rho`` (density at s) and ``beta`` (Bernoulli function at
            psi = -s).
        p0: Relative pseudomass.

    Returns:
        Validated profiles.

    Raises:
        ProfileError: If the parameters do not define a positive density.

    Example:
        >>> prof = make_profiles("linear-rho-constant-beta",
        ...                      {"rho0": 1.0, "slope": 0.1, "beta0": 0.5})
        >>> float(prof.rho(-0.5))
        0.95
    """
    params = dict(parameters or {})
    try:
        kind_enum = ProfileKind(kind)
    except ValueError:
        valid = ", ".join(k.value for k in ProfileKind)
        raise ProfileError(f"unknown profile kind '{kind}' (valid: {valid})") from None

    if kind_enum is ProfileKind.CONSTANT:
        rho0 = float(params.get("rho0", 1.0))
        if rho0 <= 0:
            raise ProfileError(f"constant density must be positive, got {rho0}")
        stored = {"rho0": rho0}
        zero = _constant(0.0)
        profiles = FluidProfiles(
            kind_enum, p0, stored, _constant(rho0), zero, zero, zero, zero
        )

    elif kind_enum is ProfileKind.LINEAR_RHO_CONSTANT_BETA:
        rho0 = float(params.get("rho0", 1.0))
        slope = float(params.get("slope", 0.0))
        beta0 = float(params.get("beta0", 0.0))
        stored = {"rho0": rho0, "slope": slope, "beta0": beta0}
        profiles = FluidProfiles(
            kind_enum,
            p0,
            stored,
            _affine(rho0, slope),
            _constant(slope),
            _constant(0.0),
            _constant(beta0),
            _constant(0.0),
        )

    else:
        profiles = _sampled_profiles(params, p0)

    logger.debug(f"Built {kind_enum.value} profiles with p0={p0}: {profiles.parameters}")
    return profiles


def _sampled_profiles(params: Dict[str, Any], p0: float) -> FluidProfiles:
    try:
        s = np.asarray(params["s"], dtype=float)
        rho = np.asarray(params["rho"], dtype=float)
    except KeyError as missing:
        raise ProfileError(f"custom-sampled profiles need key {missing}") from None
    beta = np.asarray(params.get("beta", np.zeros_like(s)), dtype=float)

    if s.ndim != 1 or s.size < 4:
        raise ProfileError("custom-sampled profiles need at least 4 samples")
    if rho.shape != s.shape or beta.shape != s.shape:
        raise ProfileError("s, rho and beta samples must have the same length")
    if np.any(np.diff(s) <= 0):
        raise ProfileError("s samples must be strictly increasing")
    span = max(abs(p0), 1.0) * 1e-12
    if s[0] > p0 + span or s[-1] < -span:
        raise ProfileError(f"samples must cover [p0, 0] = [{p0}, 0]")
    if np.any(rho <= 0):
        raise ProfileError("sampled density must be positive")

    rho_spline = CubicSpline(s, rho)
    # beta is sampled at psi = -s; reverse to get increasing psi
    beta_spline = CubicSpline(-s[::-1], beta[::-1])
    stored = {"s": s.tolist(), "rho": rho.tolist(), "beta": beta.tolist()}
    return FluidProfiles(
        ProfileKind.CUSTOM_SAMPLED,
        p0,
        stored,
        rho_spline,
        rho_spline.derivative(1),
        rho_spline.derivative(2),
        beta_spline,
        beta_spline.derivative(1),
    )
