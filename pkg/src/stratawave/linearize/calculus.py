"""Differential calculus on the flattened strip.

The flattening map ``eta = d (y + d) / (xi(x) + d)`` sends the fluid domain to
the rectangle ``[-L/2, L/2) x [0, d]``. With ``H = (xi + d) / d`` the physical
derivatives of a grid function u(X, eta) are

    u_x  = u_X + a u_eta,            a = -eta H' / H
    u_y  = b u_eta,                  b = 1 / H
    u_xx = u_XX + 2 a u_Xeta + a^2 u_etaeta + c u_eta,
                                     c = eta (2 H'^2 / H^2 - H'' / H)
    u_xy = b u_Xeta - (H' / H^2) u_eta + a b u_etaeta
    u_yy = b^2 u_etaeta

x-derivatives are periodic (centered differences or FFT), eta-derivatives
are centered in the interior and one-sided second order on the boundary rows.
A Bloch parameter ``tau`` replaces d/dx by d/dx + i tau; the finite-difference
version multiplies neighbours by exp(+-i tau h), which commutes exactly with
multiplication by exp(i tau x) on the grid.
"""

from typing import Tuple

import numpy as np

from stratawave.utils import spectral_derivative


class FlattenedCalculus:
    """Derivative operators for grid functions of shape (Nx, Ny + 1).

    Attributes:
        xi: Surface elevation samples on the periodic x-grid.
        period: Length of the periodic x-interval covered by ``xi``.
        d: Channel depth.
        tau: Bloch parameter of the x-derivative.
        spectral: Whether x-derivatives use the FFT.
    """

    def __init__(
        self,
        xi: np.ndarray,
        period: float,
        d: float,
        ny: int,
        tau: float = 0.0,
        spectral: bool = False,
    ):
        """Initialize the calculus.

        Args:
            xi: Surface elevation on the x-grid.
            period: Length of the periodic x-interval.
            d: Channel depth.
            ny: Number of eta cells (grid has ny + 1 rows).
            tau: Bloch parameter.
            spectral: Use FFT x-derivatives instead of centered differences.
        """
        self.xi = np.asarray(xi, dtype=float)
        self.period = float(period)
        self.d = float(d)
        self.tau = float(tau)
        self.spectral = spectral
        self.nx = self.xi.shape[0]
        self.ny = int(ny)
        self.hx = self.period / self.nx
        self.hy = self.d / self.ny
        self.eta = np.linspace(0.0, self.d, self.ny + 1)

        xi1 = spectral_derivative(self.xi, self.period, 1)
        xi2 = spectral_derivative(self.xi, self.period, 2)
        self.H = (self.xi + self.d) / self.d
        self.H1 = xi1 / self.d
        self.H2 = xi2 / self.d

        eta = self.eta[None, :]
        H = self.H[:, None]
        H1 = self.H1[:, None]
        H2 = self.H2[:, None]
        self.a = -eta * H1 / H
        self.b = 1.0 / H
        self.c = eta * (2.0 * H1**2 / H**2 - H2 / H)
        self.bx = -H1 / H**2

    @property
    def y(self) -> np.ndarray:
        """Physical y of every grid node."""
        return self.eta[None, :] * self.H[:, None] - self.d

    def dX(self, u: np.ndarray) -> np.ndarray:
        """First x-derivative along the flattened coordinate."""
        if self.spectral:
            return self._spectral(u, 1)
        h = self.hx
        if self.tau == 0.0:
            return (np.roll(u, -1, axis=0) - np.roll(u, 1, axis=0)) / (2.0 * h)
        phase = np.exp(1j * self.tau * h)
        return (phase * np.roll(u, -1, axis=0) - np.roll(u, 1, axis=0) / phase) / (
            2.0 * h
        )

    def dXX(self, u: np.ndarray) -> np.ndarray:
        """Second x-derivative along the flattened coordinate."""
        if self.spectral:
            return self._spectral(u, 2)
        h2 = self.hx**2
        if self.tau == 0.0:
            return (np.roll(u, -1, axis=0) - 2.0 * u + np.roll(u, 1, axis=0)) / h2
        phase = np.exp(1j * self.tau * self.hx)
        return (phase * np.roll(u, -1, axis=0) - 2.0 * u + np.roll(u, 1, axis=0) / phase) / h2

    def _spectral(self, u: np.ndarray, order: int) -> np.ndarray:
        if self.tau == 0.0:
            return spectral_derivative(u, self.period, order, axis=0)
        k = 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.hx) + self.tau
        mult = (1j * k) ** order
        return np.fft.ifft(np.fft.fft(u, axis=0) * mult[:, None], axis=0)

    def deta(self, u: np.ndarray) -> np.ndarray:
        """First eta-derivative, one-sided second order on the boundary rows."""
        return np.gradient(u, self.hy, axis=1, edge_order=2)

    def detaeta(self, u: np.ndarray) -> np.ndarray:
        """Second eta-derivative with four-point one-sided boundary stencils."""
        h2 = self.hy**2
        out = np.empty_like(u)
        out[:, 1:-1] = (u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]) / h2
        out[:, 0] = (2.0 * u[:, 0] - 5.0 * u[:, 1] + 4.0 * u[:, 2] - u[:, 3]) / h2
        out[:, -1] = (
            2.0 * u[:, -1] - 5.0 * u[:, -2] + 4.0 * u[:, -3] - u[:, -4]
        ) / h2
        return out

    def gradient(self, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Physical gradient (u_x, u_y)."""
        ue = self.deta(u)
        return self.dX(u) + self.a * ue, self.b * ue

    def hessian(self, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Physical second derivatives (u_xx, u_xy, u_yy)."""
        ue = self.deta(u)
        uee = self.detaeta(u)
        uXe = self.dX(ue)
        uxx = self.dXX(u) + 2.0 * self.a * uXe + self.a**2 * uee + self.c * ue
        uxy = self.bx * ue + self.b * uXe + self.a * self.b * uee
        uyy = self.b**2 * uee
        return uxx, uxy, uyy

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        """Physical Laplacian u_xx + u_yy."""
        uxx, _, uyy = self.hessian(u)
        return uxx + uyy

    def with_tau(self, tau: float) -> "FlattenedCalculus":
        """Copy of this calculus with a different Bloch parameter."""
        return FlattenedCalculus(
            self.xi, self.period, self.d, self.ny, tau=tau, spectral=self.spectral
        )
