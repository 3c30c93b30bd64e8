"""Discrete Bloch transform over a window of 2M + 1 periods.

A function v on the window ``[-(2M+1)L/2, (2M+1)L/2)`` is split into
L-periodic components

    V(tau_m, x) = sum_{k=-M}^{M} exp(-i tau_m (x + k L)) v(x + k L),
    tau_m = m tau_1,  tau_1 = 2 pi / ((2M + 1) L),  m = -M..M,

stored on the central period ``[-L/2, L/2)``. The synthesis

    (N V)(x) = sum_m exp(i tau_m x) V(tau_m, x)

returns ``(2M + 1) v``. The linearized operators commute with the transform
once d/dx is replaced by d/dx + i tau_m on each component.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np

from stratawave.errors import IncommensurateGridError
from stratawave.flow.field import WaveField
from stratawave.flow.profiles import FluidProfiles
from stratawave.linearize.calculus import FlattenedCalculus
from stratawave.linearize.coefficients import LinearizedCoefficients, coefficients
from stratawave.linearize.operators import apply_AB
from stratawave.utils import period_grid, reflect_index

logger = logging.getLogger(__name__)

ROUNDTRIP_TOL = 1e-12
NORM_TOL = 1e-12
COMMUTATION_TOL = 1e-10


@dataclass(frozen=True)
class BlochStack:
    """Bloch components of a window function.

    Attributes:
        M: Window half-width; the window covers 2M + 1 periods.
        period: Period L.
        components: Complex array (2M + 1, n, rows); index ``M + m`` holds
            V(tau_m, ., .) on the central period.
    """

    M: int
    period: float
    components: np.ndarray = field(repr=False, compare=False)

    @property
    def window(self) -> int:
        return 2 * self.M + 1

    @property
    def tau_1(self) -> float:
        return 2.0 * math.pi / (self.window * self.period)

    @property
    def taus(self) -> np.ndarray:
        return self.tau_1 * np.arange(-self.M, self.M + 1)

    @property
    def n(self) -> int:
        return self.components.shape[1]

    @property
    def x(self) -> np.ndarray:
        """Central-period grid."""
        return period_grid(self.period, self.n)

    def component(self, m: int) -> np.ndarray:
        """V(tau_m, ., .)."""
        if abs(m) > self.M:
            raise IndexError(f"component {m} outside -{self.M}..{self.M}")
        return self.components[self.M + m]

    def conjugation_defect(self) -> float:
        """max |V(-tau_m) - conj V(tau_m)|, zero for real input."""
        return float(np.max(np.abs(self.components[::-1] - np.conj(self.components))))

    def evenness_defect(self) -> float:
        """max |V(tau_m, -x) - V(-tau_m, x)|, zero for even input."""
        mirrored = self.components[:, reflect_index(self.n)]
        return float(np.max(np.abs(mirrored - self.components[::-1])))

    def to_dict(self) -> Dict[str, Any]:
        """JSON form; complex values become [re, im] pairs."""
        return {
            "M": self.M,
            "period": self.period,
            "components": np.stack([self.components.real, self.components.imag], axis=-1).tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BlochStack":
        pairs = np.asarray(data["components"], dtype=float)
        return cls(
            M=int(data["M"]),
            period=float(data["period"]),
            components=pairs[..., 0] + 1j * pairs[..., 1],
        )


def window_grid(period: float, n: int, M: int) -> np.ndarray:
    """x-grid of a (2M + 1)-period window with n points per period."""
    return period_grid((2 * M + 1) * period, (2 * M + 1) * n)


def _period_points(n_points: int, M: int) -> int:
    window = 2 * M + 1
    if M < 0 or n_points % window:
        raise IncommensurateGridError(n_points, window)
    n = n_points // window
    if n % 2:
        raise IncommensurateGridError(n_points, window)
    return n


def _window_index(n: int, M: int) -> np.ndarray:
    """Index (k, i) -> window column of x_i + k L, shape (2M + 1, n)."""
    k = np.arange(-M, M + 1)[:, None]
    return (M + k) * n + np.arange(n)[None, :]


def bloch_forward(v: np.ndarray, M: int, period: float) -> BlochStack:
    """Bloch components of a window grid function.

    Args:
        v: Samples on :func:`window_grid`, shape ((2M + 1) n, ...).
        M: Window half-width.
        period: Period L.

    Returns:
        The stack of 2M + 1 components.

    Raises:
        IncommensurateGridError: If the columns do not split into 2M + 1
            periods of even length.

    Example:
        >>> stack = bloch_forward(np.ones((12, 3)), 1, 2 * np.pi)
        >>> np.allclose(stack.component(0), 3.0)
        True
    """
    v = np.asarray(v)
    n = _period_points(v.shape[0], M)
    x = period_grid(period, n)
    idx = _window_index(n, M)
    shifts = x[None, :] + period * np.arange(-M, M + 1)[:, None]
    taus = 2.0 * math.pi / ((2 * M + 1) * period) * np.arange(-M, M + 1)
    # phase[m, k, i] = exp(-i tau_m (x_i + k L))
    phase = np.exp(-1j * taus[:, None, None] * shifts[None, :, :])
    extra = (1,) * (v.ndim - 1)
    samples = v[idx]
    components = np.sum(phase.reshape(phase.shape + extra) * samples[None], axis=1)
    logger.debug(f"Bloch forward: M={M}, {n} points per period")
    return BlochStack(M=M, period=float(period), components=components)


def bloch_inverse(stack: BlochStack, normalize: bool = False) -> np.ndarray:
    """Synthesis sum_m exp(i tau_m x) V(tau_m, x) on the window.

    Args:
        stack: Bloch components.
        normalize: Divide by 2M + 1, inverting :func:`bloch_forward`.

    Returns:
        Complex window samples.
    """
    n, M = stack.n, stack.M
    x = window_grid(stack.period, n, M)
    central = (np.arange(x.size) - M * n) % n
    phase = np.exp(1j * stack.taus[:, None] * x[None, :])
    extra = (1,) * (stack.components.ndim - 2)
    values = np.sum(phase.reshape(phase.shape + extra) * stack.components[:, central], axis=0)
    if normalize:
        values = values / stack.window
    return values


def tile_field(field: WaveField, reps: int) -> WaveField:
    """The field repeated over ``reps`` periods on the centered window grid."""
    n = field.Nx
    N = reps * n
    central = (np.arange(N) - N // 2 + n // 2) % n
    params = replace(field.params, Lambda=reps * field.params.Lambda)
    return WaveField(params, field.psi[central], field.xi[central], field.amplitude, field.tau)


def shifted_apply_AB(
    coeffs: LinearizedCoefficients, field: WaveField, V: np.ndarray, tau: float
) -> Tuple[np.ndarray, np.ndarray]:
    """A(x, y, d/dx + i tau, d/dy) V and the matching B on one period.

    Centered differences with neighbour phases exp(+-i tau h) make this the
    exact conjugate exp(-i tau x) A exp(i tau x) of the grid operator.
    """
    return apply_AB(coeffs, field, V, tau=tau, spectral=False)


def l2_weights(
    n: int, rows: int, hx: float, hy: float, H: Optional[np.ndarray] = None
) -> np.ndarray:
    """Trapezoid weights of the physical L2 product on a period grid."""
    trap = np.full(rows, hy)
    trap[[0, -1]] *= 0.5
    stretch = np.ones(n) if H is None else np.asarray(H, dtype=float)
    return hx * stretch[:, None] * trap[None, :]


def _h2_norm_sq(u: np.ndarray, calc: FlattenedCalculus, weights: np.ndarray) -> float:
    terms = [u, calc.dX(u), calc.deta(u), calc.dXX(u), calc.detaeta(u), calc.dX(calc.deta(u))]
    return float(sum(np.sum(weights * np.abs(t) ** 2) for t in terms))


@dataclass(frozen=True)
class BlochIdentityReport:
    """Roundtrip, Parseval and commutation checks of the transform.

    Attributes:
        M: Window half-width.
        roundtrip_error: max |N M v / (2M + 1) - v|.
        norm_error: Relative error of sum_m ||V_m||^2 = (2M + 1) ||v||^2.
        h2_ratio: sum_m ||V_m||_H2^2 / ||v||_H2^2 with unshifted derivatives.
        commutation_A: Relative max |A N V - sum_m e^{i tau_m x} A_m V_m|.
        commutation_B: Same for the surface operator.
    """

    M: int
    roundtrip_error: float
    norm_error: float
    h2_ratio: float
    commutation_A: Optional[float] = None
    commutation_B: Optional[float] = None

    @property
    def passed(self) -> bool:
        ok = self.roundtrip_error <= ROUNDTRIP_TOL and self.norm_error <= NORM_TOL
        for value in (self.commutation_A, self.commutation_B):
            if value is not None:
                ok = ok and value <= COMMUTATION_TOL
        return ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M": self.M,
            "roundtrip_error": self.roundtrip_error,
            "norm_error": self.norm_error,
            "h2_ratio": self.h2_ratio,
            "commutation_A": self.commutation_A,
            "commutation_B": self.commutation_B,
            "passed": self.passed,
        }


def bloch_identities(
    v: np.ndarray,
    M: int,
    field: WaveField,
    profiles: Optional[FluidProfiles] = None,
) -> BlochIdentityReport:
    """Check the transform identities on a window function.

    Args:
        v: Window samples, shape ((2M + 1) field.Nx, field.Ny + 1), zero on the bed.
        M: Window half-width.
        field: Single-period background supplying the grid and the metric.
        profiles: When given, the commutation of A and B with the synthesis is
            also checked.

    Returns:
        Identity report.
    """
    v = np.asarray(v)
    period, n, rows = field.params.Lambda, field.Nx, field.Ny + 1
    if v.shape != ((2 * M + 1) * n, rows):
        raise IncommensurateGridError(v.shape[0], 2 * M + 1)
    stack = bloch_forward(v, M, period)
    window = 2 * M + 1
    scale = max(1.0, float(np.max(np.abs(v))))
    roundtrip = float(np.max(np.abs(bloch_inverse(stack, normalize=True) - v))) / scale

    wide = tile_field(field, window)
    w_one = l2_weights(n, rows, field.hx, field.hy, field.H)
    w_win = l2_weights(window * n, rows, wide.hx, wide.hy, wide.H)
    lhs = float(sum(np.sum(w_one * np.abs(c) ** 2) for c in stack.components))
    rhs = window * float(np.sum(w_win * np.abs(v) ** 2))
    norm_error = abs(lhs - rhs) / max(1.0, rhs)

    calc_one = field.calculus()
    h2_ratio = sum(_h2_norm_sq(c, calc_one, w_one) for c in stack.components) / max(
        _h2_norm_sq(v, wide.calculus(), w_win), 1e-300
    )

    comm_A = comm_B = None
    if profiles is not None:
        coeffs_one = coefficients(field, profiles)
        coeffs_win = coefficients(wide, profiles)
        synthesized = bloch_inverse(stack)
        A_direct, B_direct = apply_AB(coeffs_win, wide, synthesized)
        x = wide.x
        central = (np.arange(x.size) - M * n) % n
        A_sum = np.zeros_like(A_direct, dtype=complex)
        B_sum = np.zeros_like(B_direct, dtype=complex)
        for tau, comp in zip(stack.taus, stack.components):
            A_m, B_m = shifted_apply_AB(coeffs_one, field, comp, tau)
            phase = np.exp(1j * tau * x)
            A_sum += phase[:, None] * A_m[central]
            B_sum += phase * B_m[central]
        a_scale = max(1.0, float(np.max(np.abs(A_direct))))
        b_scale = max(1.0, float(np.max(np.abs(B_direct))))
        comm_A = float(np.max(np.abs(A_direct - A_sum))) / a_scale
        comm_B = float(np.max(np.abs(B_direct - B_sum))) / b_scale

    report = BlochIdentityReport(
        M=M,
        roundtrip_error=roundtrip,
        norm_error=norm_error,
        h2_ratio=float(h2_ratio),
        commutation_A=comm_A,
        commutation_B=comm_B,
    )
    logger.debug(f"Bloch identities M={M}: {report.to_dict()}")
    return report
