"""Flow parameters and background fields on the flattened rectangle.

A :class:`WaveField` stores the stream function psi on the tensor grid
``x_i = (i - Nx/2) * Lambda / Nx``, ``eta_j = j * d / Ny`` of the flattened
rectangle, together with the surface profile xi(x). Row ``j = 0`` is the bed
and row ``j = Ny`` the free surface.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Callable, Dict, Optional

import numpy as np

from stratawave.errors import MeshError
from stratawave.utils import period_grid, reflect_index

if TYPE_CHECKING:
    from stratawave.linearize.calculus import FlattenedCalculus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowParameters:
    """Physical parameters of a periodic stratified flow.

    Attributes:
        d: Channel depth.
        g: Gravitational constant.
        p0: Relative pseudomass (negative).
        Lambda: Period.
        R: Bernoulli constant; derived by the laminar solve, None until then.
    """

    d: float = 1.0
    g: float = 2.0
    p0: float = -1.0
    Lambda: float = 2.0 * math.pi
    R: Optional[float] = None

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError(f"d must be positive, got {self.d}")
        if self.g <= 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if self.p0 >= 0:
            raise ValueError(f"p0 must be negative, got {self.p0}")
        if self.Lambda <= 0:
            raise ValueError(f"Lambda must be positive, got {self.Lambda}")

    @property
    def tau_star(self) -> float:
        """Dual period 2*pi/Lambda."""
        return 2.0 * math.pi / self.Lambda

    def to_dict(self) -> Dict[str, Any]:
        return {"d": self.d, "g": self.g, "p0": self.p0, "Lambda": self.Lambda, "R": self.R}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlowParameters":
        return cls(
            d=float(data["d"]),
            g=float(data["g"]),
            p0=float(data["p0"]),
            Lambda=float(data["Lambda"]),
            R=None if data.get("R") is None else float(data["R"]),
        )


@dataclass(frozen=True)
class WaveField:
    """Background solution (psi, xi) sampled on the flattened grid.

    Attributes:
        params: Flow parameters, with the Bernoulli constant resolved.
        psi: Stream function, shape (Nx, Ny + 1).
        xi: Surface elevation, shape (Nx,).
        amplitude: Expansion amplitude t, zero for laminar fields.
        tau: Wavenumber used by the expansion, None for laminar fields.
    """

    params: FlowParameters
    psi: np.ndarray = field(repr=False, compare=False)
    xi: np.ndarray = field(repr=False, compare=False)
    amplitude: float = 0.0
    tau: Optional[float] = None

    def __post_init__(self):
        psi = np.array(self.psi, dtype=float)
        xi = np.array(self.xi, dtype=float)
        if psi.ndim != 2 or xi.ndim != 1 or psi.shape[0] != xi.shape[0]:
            raise MeshError(
                f"psi must have shape (Nx, Ny+1) matching xi, got {psi.shape} and {xi.shape}"
            )
        nx, rows = psi.shape
        if nx % 2 or nx < 4:
            raise MeshError(f"Nx must be even and at least 4, got {nx}")
        if rows < 4:
            raise MeshError(f"Ny must be at least 3, got {rows - 1}")
        if np.min(xi) + self.params.d <= 0:
            raise MeshError(
                f"xi + d must stay positive, found min {np.min(xi) + self.params.d:.3e}"
            )
        psi.setflags(write=False)
        xi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "xi", xi)

    @property
    def Nx(self) -> int:
        return self.psi.shape[0]

    @property
    def Ny(self) -> int:
        return self.psi.shape[1] - 1

    @property
    def hx(self) -> float:
        return self.params.Lambda / self.Nx

    @property
    def hy(self) -> float:
        return self.params.d / self.Ny

    @property
    def x(self) -> np.ndarray:
        return period_grid(self.params.Lambda, self.Nx)

    @property
    def eta(self) -> np.ndarray:
        return np.linspace(0.0, self.params.d, self.Ny + 1)

    @property
    def H(self) -> np.ndarray:
        """Vertical stretch (xi + d) / d of every column."""
        return (self.xi + self.params.d) / self.params.d

    @property
    def y(self) -> np.ndarray:
        """Physical y of every grid node."""
        return self.eta[None, :] * self.H[:, None] - self.params.d

    @property
    def is_laminar(self) -> bool:
        return bool(np.ptp(self.xi) == 0.0 and np.ptp(self.psi, axis=0).max() == 0.0)

    def calculus(self, tau: float = 0.0, spectral: bool = False) -> "FlattenedCalculus":
        """Derivative operators on this field's grid."""
        from stratawave.linearize.calculus import FlattenedCalculus

        return FlattenedCalculus(
            self.xi, self.params.Lambda, self.params.d, self.Ny, tau=tau, spectral=spectral
        )

    def reflected(self) -> "WaveField":
        """The mirror image x -> -x of this field."""
        idx = reflect_index(self.Nx)
        return replace(self, psi=self.psi[idx], xi=self.xi[idx])

    def surface_speed(self) -> np.ndarray:
        """Fluid speed |grad psi| along the free surface."""
        psi_x, psi_y = self.calculus().gradient(self.psi)
        return np.hypot(psi_x[:, -1], psi_y[:, -1])

    @classmethod
    def from_physical(
        cls,
        params: FlowParameters,
        xi: Any,
        func: Callable[[np.ndarray, np.ndarray], np.ndarray],
        Nx: int,
        Ny: int,
        amplitude: float = 0.0,
        tau: Optional[float] = None,
    ) -> "WaveField":
        """Sample a physical stream function psi(x, y) on the flattened grid.

        Args:
            params: Flow parameters.
            xi: Surface elevation, a scalar, an (Nx,) array or a callable of x.
            func: Stream function of physical coordinates.
            Nx: Number of x-nodes per period (even).
            Ny: Number of eta cells.
            amplitude: Amplitude tag stored on the field.
            tau: Wavenumber tag stored on the field.

        Returns:
            Field whose boundary rows are whatever ``func`` gives there.
        """
        x = period_grid(params.Lambda, Nx)
        if callable(xi):
            xi_values = np.asarray(xi(x), dtype=float)
        else:
            xi_values = np.broadcast_to(np.asarray(xi, dtype=float), x.shape).copy()
        eta = np.linspace(0.0, params.d, Ny + 1)
        H = (xi_values + params.d) / params.d
        Y = eta[None, :] * H[:, None] - params.d
        X = np.broadcast_to(x[:, None], Y.shape)
        psi = np.asarray(func(X, Y), dtype=float)
        return cls(params, psi, xi_values, amplitude=amplitude, tau=tau)

    @classmethod
    def from_laminar(
        cls, laminar: Any, Nx: int, Ny: int, Lambda: Optional[float] = None
    ) -> "WaveField":
        """Laminar field psi(x, y) = Psi(y) with a flat surface.

        Args:
            laminar: A :class:`~stratawave.flow.laminar.LaminarProfile`.
            Nx: Number of x-nodes per period (even).
            Ny: Number of eta cells.
            Lambda: Period; defaults to the laminar profile's parameters.
        """
        params = laminar.params
        if Lambda is not None:
            params = replace(params, Lambda=float(Lambda))
        eta = np.linspace(0.0, params.d, Ny + 1)
        column = laminar.psi(eta - params.d)
        column[0] = -params.p0
        column[-1] = 0.0
        psi = np.tile(column, (Nx, 1))
        logger.debug(f"Laminar field on {Nx}x{Ny} grid, Lambda={params.Lambda:.6g}")
        return cls(params, psi, np.zeros(Nx))

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to a JSON-compatible dictionary (psi row-major)."""
        return {
            "params": self.params.to_dict(),
            "grid": {"Nx": self.Nx, "Ny": self.Ny},
            "psi": self.psi.tolist(),
            "xi": self.xi.tolist(),
            "amplitude": self.amplitude,
            "tau": self.tau,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WaveField":
        """Rebuild a field from :meth:`to_dict` output."""
        psi = np.asarray(data["psi"], dtype=float)
        grid = data.get("grid", {})
        expected = (grid.get("Nx", psi.shape[0]), grid.get("Ny", psi.shape[1] - 1) + 1)
        if psi.shape != tuple(expected):
            raise MeshError(f"psi has shape {psi.shape}, grid declares {expected}")
        return cls(
            FlowParameters.from_dict(data["params"]),
            psi,
            np.asarray(data["xi"], dtype=float),
            amplitude=float(data.get("amplitude", 0.0)),
            tau=data.get("tau"),
        )
