"""Partial hodograph transform and its Frechet derivative.

For a flow with psi_y < 0 the coordinates (q, p) = (x, -psi) straighten the
streamlines, and the height ``h(q, p) = d + y`` above the bed solves a
quasilinear problem on Q = [-L/2, L/2) x [p0, 0] with

    psi_y = -1 / h_p,      psi_x = h_q / h_p.

Its linearization acts on w(q, p) by

    F w = I1_p - I2_q + g w rho'(p),        G w = I1 + g rho(0) w  on p = 0,
    I1  = h_q w_q / h_p^2 - (1 + h_q^2) w_p / h_p^3,
    I2  = w_q / h_p - h_q w_p / h_p^2,

and ``w = u(q, h) h_p`` carries solutions of (A u, B u) = (f, g) into
solutions of F w = -f, G w = g.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from stratawave.errors import HodographUnavailableError
from stratawave.flow.field import WaveField
from stratawave.flow.profiles import FluidProfiles
from stratawave.flow.residual import interior_residual
from stratawave.linearize.coefficients import LinearizedCoefficients

logger = logging.getLogger(__name__)


def _dq(values: np.ndarray, hq: float) -> np.ndarray:
    return (np.roll(values, -1, axis=0) - np.roll(values, 1, axis=0)) / (2.0 * hq)


def _dqq(values: np.ndarray, hq: float) -> np.ndarray:
    return (np.roll(values, -1, axis=0) - 2.0 * values + np.roll(values, 1, axis=0)) / hq**2


def _dp(values: np.ndarray, hp: float) -> np.ndarray:
    return np.gradient(values, hp, axis=1, edge_order=2)


def _dpp(values: np.ndarray, hp: float) -> np.ndarray:
    out = np.empty_like(values)
    out[:, 1:-1] = (values[:, 2:] - 2.0 * values[:, 1:-1] + values[:, :-2]) / hp**2
    out[:, 0] = (2 * values[:, 0] - 5 * values[:, 1] + 4 * values[:, 2] - values[:, 3]) / hp**2
    out[:, -1] = (
        2 * values[:, -1] - 5 * values[:, -2] + 4 * values[:, -3] - values[:, -4]
    ) / hp**2
    return out


@dataclass(frozen=True)
class HodographField:
    """Height function h(q, p) of a unidirectional field.

    Attributes:
        h: Heights on the (q, p) grid, shape (Nx, Ny + 1).
        h_q: Periodic centered q-derivative.
        h_p: p-derivative, one-sided second order on the boundary rows.
        p: p-grid from p0 to 0.
        period: Period in q.
        d: Channel depth.
        fallback_columns: Columns inverted with PCHIP instead of a cubic spline.
    """

    h: np.ndarray = field(repr=False, compare=False)
    h_q: np.ndarray = field(repr=False, compare=False)
    h_p: np.ndarray = field(repr=False, compare=False)
    p: np.ndarray = field(repr=False, compare=False)
    period: float
    d: float
    _p_nodes: np.ndarray = field(repr=False, compare=False)
    fallback_columns: Tuple[int, ...] = ()

    @property
    def delta(self) -> float:
        """Monotonicity margin min h_p."""
        return float(np.min(self.h_p))

    @property
    def hq(self) -> float:
        return self.period / self.h.shape[0]

    @property
    def hp(self) -> float:
        return float(self.p[1] - self.p[0])

    def resample(self, values: np.ndarray) -> np.ndarray:
        """Interpolate a grid function of the flattened field onto the (q, p) grid.

        Column i of ``values`` sits at the streamline values p = -psi of that
        column; a cubic spline in p evaluates it on the uniform p-grid.
        """
        values = np.asarray(values)
        out = np.empty(self.h.shape, dtype=values.dtype)
        for i in range(self.h.shape[0]):
            out[i] = CubicSpline(self._p_nodes[i], values[i])(self.p)
        return out


def hodograph_build(field: WaveField) -> HodographField:
    """Invert y -> -psi(x, y) column by column.

    Args:
        field: Background field with psi_y < 0 on every node.

    Returns:
        Height function with h(q, p0) = 0 and h(q, 0) = d + xi(q).

    Raises:
        HodographUnavailableError: If psi_y >= 0 somewhere or a column of
            -psi is not strictly increasing.
    """
    calc = field.calculus()
    _, psi_y = calc.gradient(field.psi)
    bad = np.argwhere(psi_y >= 0.0)
    if bad.size:
        raise HodographUnavailableError(int(bad[0, 0]), f"psi_y >= 0 at row {int(bad[0, 1])}")

    d, p0 = field.params.d, field.params.p0
    p_nodes = -np.asarray(field.psi)
    Y = calc.y
    p = np.linspace(p0, 0.0, field.Ny + 1)
    h = np.empty_like(Y)
    fallback = []
    for i in range(field.Nx):
        column = p_nodes[i]
        if np.any(np.diff(column) <= 0.0):
            raise HodographUnavailableError(i, "-psi not strictly increasing")
        spline = CubicSpline(column, Y[i])
        if np.any(spline(p, 1) <= 0.0):
            spline = PchipInterpolator(column, Y[i])
            fallback.append(i)
        h[i] = spline(p) + d
    if fallback:
        logger.warning(f"Hodograph columns {fallback} lost monotonicity; used PCHIP")
    h[:, 0] = 0.0
    h[:, -1] = d + field.xi

    hq = field.params.Lambda / field.Nx
    hp = float(p[1] - p[0])
    h_p = _dp(h, hp)
    if np.min(h_p) <= 0.0:
        raise HodographUnavailableError(int(np.argmin(np.min(h_p, axis=1))), "h_p <= 0")
    return HodographField(
        h=h,
        h_q=_dq(h, hq),
        h_p=h_p,
        p=p,
        period=field.params.Lambda,
        d=d,
        _p_nodes=p_nodes,
        fallback_columns=tuple(fallback),
    )


def identity_errors(hodo: HodographField, field: WaveField, margin: int = 2) -> Dict[str, float]:
    """Errors of psi_x = h_q / h_p and psi_y = -1 / h_p on the (q, p) grid.

    Rows within ``margin`` cells of the bed or surface are excluded.
    """
    psi_x, psi_y = field.calculus().gradient(field.psi)
    inner = slice(margin, -margin)
    ex = hodo.resample(psi_x) - hodo.h_q / hodo.h_p
    ey = hodo.resample(psi_y) + 1.0 / hodo.h_p
    return {
        "psi_x": float(np.max(np.abs(ex[:, inner]))),
        "psi_y": float(np.max(np.abs(ey[:, inner]))),
        "bed": float(np.max(np.abs(hodo.h[:, 0]))),
    }


def apply_hodograph_frechet(
    hodo: HodographField,
    profiles: FluidProfiles,
    w: np.ndarray,
    g: float,
    variant: str = "flux",
) -> Tuple[np.ndarray, np.ndarray]:
    """Apply the linearized hodograph operators to w(q, p).

    Args:
        hodo: Height function.
        profiles: Density profile (rho is evaluated at s = p).
        w: Grid function on the (q, p) grid, zero on p = p0.
        g: Gravitational constant.
        variant: ``"flux"`` differences I1 and I2 on half nodes;
            ``"node"`` expands the divergence by the product rule with
            compact second differences.

    Returns:
        (F w with boundary rows set to 0, G w on p = 0).
    """
    h, hq, hp = hodo.h, hodo.hq, hodo.hp
    w = np.asarray(w, dtype=float)
    if variant == "flux":
        F = _flux_interior(h, w, hq, hp)
    elif variant == "node":
        F = _node_interior(h, w, hq, hp)
    else:
        raise ValueError(f"unknown variant '{variant}' (valid: flux, node)")
    F = F + g * w * profiles.rho1(hodo.p)[None, :]
    F[:, 0] = 0.0
    F[:, -1] = 0.0

    h_q, h_p, w_q, w_p = hodo.h_q, hodo.h_p, _dq(w, hq), _dp(w, hp)
    I1_top = (h_q * w_q / h_p**2 - (1.0 + h_q**2) * w_p / h_p**3)[:, -1]
    G = I1_top + g * profiles.rho_surface * w[:, -1]
    return F, G


def _flux_interior(h: np.ndarray, w: np.ndarray, hq: float, hp: float) -> np.ndarray:
    # I1 on p half nodes j + 1/2
    hp_half = (h[:, 1:] - h[:, :-1]) / hp
    wp_half = (w[:, 1:] - w[:, :-1]) / hp
    hq_half = 0.5 * (_dq(h, hq)[:, 1:] + _dq(h, hq)[:, :-1])
    wq_half = 0.5 * (_dq(w, hq)[:, 1:] + _dq(w, hq)[:, :-1])
    I1 = hq_half * wq_half / hp_half**2 - (1.0 + hq_half**2) * wp_half / hp_half**3

    # I2 on q half nodes i + 1/2
    h_next = np.roll(h, -1, axis=0)
    w_next = np.roll(w, -1, axis=0)
    hq_mid = (h_next - h) / hq
    wq_mid = (w_next - w) / hq
    hp_mid = 0.5 * (_dp(h, hp) + _dp(h_next, hp))
    wp_mid = 0.5 * (_dp(w, hp) + _dp(w_next, hp))
    I2 = wq_mid / hp_mid - hq_mid * wp_mid / hp_mid**2

    F = np.zeros_like(w)
    F[:, 1:-1] = (I1[:, 1:] - I1[:, :-1]) / hp
    F -= (I2 - np.roll(I2, 1, axis=0)) / hq
    return F


def _node_interior(h: np.ndarray, w: np.ndarray, hq: float, hp: float) -> np.ndarray:
    h_q, h_p = _dq(h, hq), _dp(h, hp)
    h_qq, h_pp, h_qp = _dqq(h, hq), _dpp(h, hp), _dq(_dp(h, hp), hq)
    w_q, w_p = _dq(w, hq), _dp(w, hp)
    w_qq, w_pp, w_qp = _dqq(w, hq), _dpp(w, hp), _dq(_dp(w, hp), hq)
    s = 1.0 + h_q**2
    I1_p = (
        (h_qp * w_q + h_q * w_qp) / h_p**2
        - 2.0 * h_q * w_q * h_pp / h_p**3
        - (2.0 * h_q * h_qp * w_p + s * w_pp) / h_p**3
        + 3.0 * s * w_p * h_pp / h_p**4
    )
    I2_q = (
        w_qq / h_p
        - w_q * h_qp / h_p**2
        - (h_qq * w_p + h_q * w_qp) / h_p**2
        + 2.0 * h_q * w_p * h_qp / h_p**3
    )
    return I1_p - I2_q


@dataclass(frozen=True)
class HodographIdentityReport:
    """Residuals of the hodograph substitution identity.

    Attributes:
        interior: max |F w + f(q, h)| on rows away from bed and surface.
        surface: max |G w - g|.
        interior_consistent: interior residual after removing the term the
            background residual r = Delta psi + omega contributes.
    """

    interior: float
    surface: float
    interior_consistent: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "interior": self.interior,
            "surface": self.surface,
            "interior_consistent": self.interior_consistent,
        }


def verify_cormi(
    field: WaveField,
    coeffs: LinearizedCoefficients,
    profiles: FluidProfiles,
    u: np.ndarray,
    f: Optional[np.ndarray] = None,
    g_surface: Optional[np.ndarray] = None,
    margin: int = 2,
    variant: str = "flux",
) -> HodographIdentityReport:
    """Check that w = u(q, h) h_p maps (A u, B u) = (f, g) to F w = -f, G w = g.

    The exact identity is ``F w = (u / psi_y) r_y - A u`` with r the interior
    residual of the background; the consistent residual subtracts that term.

    Args:
        field: Background field (unidirectional).
        coeffs: Coefficients at ``field``.
        profiles: Density and Bernoulli profiles.
        u: Grid function on the flattened grid, zero on the bed.
        f: A u; computed by :func:`apply_AB` when omitted.
        g_surface: B u; computed when omitted.
        margin: Rows excluded next to the bed and surface.
        variant: Differencing variant of the hodograph operator.

    Raises:
        HodographUnavailableError: If the field is not unidirectional.
    """
    from stratawave.linearize.operators import apply_AB

    if f is None or g_surface is None:
        Au, Bu = apply_AB(coeffs, field, u)
        f = Au if f is None else f
        g_surface = Bu if g_surface is None else g_surface

    hodo = hodograph_build(field)
    g = field.params.g
    w = hodo.resample(u) * hodo.h_p
    w[:, 0] = 0.0
    Fw, Gw = apply_hodograph_frechet(hodo, profiles, w, g, variant=variant)

    calc = field.calculus()
    _, psi_y = calc.gradient(field.psi)
    r = interior_residual(field, profiles)
    correction = hodo.resample(u / psi_y * (calc.b * calc.deta(r)))

    inner = slice(margin, -margin)
    raw = Fw + hodo.resample(f)
    report = HodographIdentityReport(
        interior=float(np.max(np.abs(raw[:, inner]))),
        surface=float(np.max(np.abs(Gw - g_surface))),
        interior_consistent=float(np.max(np.abs((raw - correction)[:, inner]))),
    )
    logger.debug(f"Hodograph identity residuals on {field.Nx}x{field.Ny}: {report}")
    return report
