"""Jordan chain of the zero eigenvalue in the Floquet problem.

For the ansatz ``u = x u0 + u1`` with the odd kernel element ``u0 = psi_x``
the even function u1 solves

    (Delta + omega*) u1 + 2 u0_x = 0                       in the fluid,
    psi_x u1_x + psi_y u1_y - sigma u1 + psi_x u0 = 0      on the surface,
    u1 = 0                                                 on the bed,

whose weak form on the even periodic space is

    a(u1, v) = int 2 u0_x v dx dy - int_S (psi_x u0 / psi_y) v dx.

The chain continues to ``(x^2 / 2) u0 + x u1 + u2`` only if

    LHS = int (u0 + 2 u1_x) u0 dx dy - int_S psi_x u1 u0 / psi_y dx

vanishes; a nonzero LHS ends the chain at length two. On a field of amplitude t
the kernel element is O(t), so LHS is compared after division by t^2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.linalg import solve

from stratawave.assembly.forms import surface_matrix, volume_matrices
from stratawave.assembly.mesh import Mesh, build_mesh
from stratawave.assembly.problem import BoundaryCondition, SpectralProblem, assemble
from stratawave.eigensolve import solve_gen
from stratawave.errors import SingularOperatorError
from stratawave.flow.field import WaveField
from stratawave.flow.laminar import LaminarProfile
from stratawave.flow.profiles import FluidProfiles
from stratawave.flow.stokes import stokes_field
from stratawave.linearize.coefficients import LinearizedCoefficients, coefficients
from stratawave.linearize.operators import apply_AB, psi_x
from stratawave.spectra.report import Status

logger = logging.getLogger(__name__)

N_NEAR = 8
# absolute threshold on |mu| for the u1 solve
DEFAULT_ZERO_TOL = 1e-6


@dataclass(frozen=True)
class U1Solution:
    """First generalized eigenfunction with its diagnostics.

    Attributes:
        u1: Solution on the field grid, shape (Nx, Ny + 1).
        linear_residual: ||A x - f|| / ||f|| of the discrete solve.
        interior_residual: max |(Delta + omega*) u1 + 2 u0_x| on interior rows.
        surface_residual: max |B u1 + psi_x u0| on the surface row.
        mu_near_zero: Even-space eigenvalue closest to zero.
        tol_zero: Absolute zero threshold used for the refusal.
    """

    u1: np.ndarray = field(repr=False, compare=False)
    linear_residual: float = 0.0
    interior_residual: float = 0.0
    surface_residual: float = 0.0
    mu_near_zero: float = math.inf
    tol_zero: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "u1_max": float(np.max(np.abs(self.u1))),
            "linear_residual": self.linear_residual,
            "interior_residual": self.interior_residual,
            "surface_residual": self.surface_residual,
            "mu_near_zero": self.mu_near_zero,
            "tol_zero": self.tol_zero,
        }


def _even_problem(field: WaveField, coeffs: LinearizedCoefficients) -> SpectralProblem:
    return assemble(build_mesh(field), coeffs, BoundaryCondition.PERIODIC_EVEN)


def _to_field(mesh: Mesh, nodal: np.ndarray) -> np.ndarray:
    """Mesh nodal values (Nx + 1, Ny + 1) back on the field grid (Nx, Ny + 1)."""
    out = np.empty((mesh.background.Nx, mesh.Ny + 1), dtype=nodal.dtype)
    out[mesh.field_index[:-1]] = nodal[:-1]
    return out


def _load(
    problem: SpectralProblem,
    coeffs: LinearizedCoefficients,
    volume: np.ndarray,
    surface: np.ndarray,
) -> np.ndarray:
    """Dof load of int volume v dx dy - int_S (surface / psi_y) v dx."""
    mesh = problem.mesh
    _, M = volume_matrices(mesh)
    S = surface_matrix(mesh, -1.0 / coeffs.psi_y_s)
    nodal = M @ mesh.nodal(volume).ravel() + S @ mesh.nodal(surface).ravel()
    return problem.prolongation.conj().T @ nodal


def solve_u1(
    field: WaveField,
    coeffs: LinearizedCoefficients,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> U1Solution:
    """Solve for the first generalized eigenfunction u1.

    Args:
        field: Even background field.
        coeffs: Coefficients at ``field``.
        zero_tol: Absolute threshold on the even-space eigenvalue nearest zero.

    Returns:
        The even solution u1 and its residuals.

    Raises:
        SingularOperatorError: If an even-space eigenvalue lies within
            ``zero_tol`` of zero, so the system is not uniquely solvable.
    """
    problem = _even_problem(field, coeffs)
    near = solve_gen(problem.A, problem.M_vol, k=min(N_NEAR, problem.n_dofs), tol_zero=zero_tol)
    closest = int(np.argmin(np.abs(near.eigenvalues)))
    mu_near = float(near.eigenvalues[closest])
    if abs(mu_near) <= zero_tol:
        raise SingularOperatorError(abs(mu_near), zero_tol)

    calc = field.calculus(spectral=True)
    u0 = psi_x(field)
    u0_x = calc.gradient(u0)[0]
    surface = np.zeros_like(u0)
    surface[:, -1] = coeffs.psi_x_s * u0[:, -1]
    f = _load(problem, coeffs, 2.0 * u0_x, surface)

    x = solve(problem.A, f, assume_a="sym")
    f_norm = float(np.linalg.norm(f))
    linear = float(np.linalg.norm(problem.A @ x - f)) / f_norm if f_norm > 0 else 0.0
    u1 = _to_field(problem.mesh, problem.lift(x))

    Au, Bu = apply_AB(coeffs, field, u1)
    interior = float(np.max(np.abs((Au + 2.0 * u0_x)[:, 1:-1])))
    surface_res = float(np.max(np.abs(Bu + coeffs.psi_x_s * u0[:, -1])))
    logger.debug(
        f"u1 solve: mu_near={mu_near:.4e}, |u1|max={np.max(np.abs(u1)):.3e}, "
        f"interior residual {interior:.2e}"
    )
    return U1Solution(
        u1=u1,
        linear_residual=linear,
        interior_residual=interior,
        surface_residual=surface_res,
        mu_near_zero=mu_near,
        tol_zero=zero_tol,
    )


def transversality_lhs(
    field: WaveField,
    coeffs: LinearizedCoefficients,
    u0: np.ndarray,
    u1: np.ndarray,
    rule: str = "gauss",
) -> float:
    """Solvability integral for u2.

    Args:
        field: Background field.
        coeffs: Coefficients at ``field``.
        u0: Kernel element psi_x on the field grid.
        u1: First generalized eigenfunction on the field grid.
        rule: ``"gauss"`` (finite-element mass matrices) or ``"midpoint"``.

    Returns:
        int (u0 + 2 u1_x) u0 dx dy - int_S psi_x u1 u0 / psi_y dx.
    """
    u1_x = field.calculus(spectral=True).gradient(u1)[0]
    volume = (u0 + 2.0 * u1_x) * u0
    edge = coeffs.psi_x_s * u1[:, -1] * u0[:, -1] / coeffs.psi_y_s

    if rule == "gauss":
        mesh = build_mesh(field)
        _, M = volume_matrices(mesh)
        S = surface_matrix(mesh, 1.0 / coeffs.psi_y_s)
        v_int = mesh.nodal(u0 + 2.0 * u1_x).ravel() @ (M @ mesh.nodal(u0).ravel())
        s_int = mesh.nodal(coeffs.psi_x_s[:, None] * u1).ravel() @ (S @ mesh.nodal(u0).ravel())
        return float(v_int - s_int)
    if rule == "midpoint":
        nxt = np.roll(volume, -1, axis=0)
        cell = 0.25 * (volume[:, :-1] + volume[:, 1:] + nxt[:, :-1] + nxt[:, 1:])
        H_mid = 0.5 * (field.H + np.roll(field.H, -1))
        v_int = np.sum(cell * H_mid[:, None]) * field.hx * field.hy
        s_int = np.sum(0.5 * (edge + np.roll(edge, -1))) * field.hx
        return float(v_int - s_int)
    raise ValueError(f"rule must be 'gauss' or 'midpoint', got '{rule}'")


def leading_order_lhs(laminar: LaminarProfile, c: float) -> float:
    """Small-amplitude value -(tau*/2c) int sin^2(tau* x) gamma^2 dx dy.

    Args:
        laminar: Laminar profile carrying the mode at the bifurcation wavenumber.
        c: Curvature of the branch, lambda = 1 - c t^2 + O(t^4).
    """
    if laminar.tau is None:
        raise ValueError("laminar profile carries no transverse mode")
    if c == 0.0:
        raise ValueError("branch curvature c must be nonzero")
    tau = laminar.tau
    period = 2.0 * math.pi / tau
    gamma_sq, _ = quad(lambda y: float(laminar.gamma(y)) ** 2, -laminar.params.d, 0.0)
    # int over one period of sin^2 is period / 2
    return -(tau / (2.0 * c)) * 0.5 * period * gamma_sq


@dataclass(frozen=True)
class JordanChain:
    """Kernel element, first generalized eigenfunction and chain verdict.

    ``u0 = psi_x`` is O(t) on a field of amplitude t, so the verdict uses
    ``LHS / t^2``.

    Attributes:
        u0: psi_x on the field grid.
        u1: Even solution of the u1 problem.
        lhs: Solvability integral (Gauss rule).
        lhs_midpoint: Same integral by the midpoint rule.
        tol: Threshold on |LHS / t^2| for the verdict.
        mu_near_zero: Even-space eigenvalue closest to zero.
        amplitude: Amplitude t of the field, 0 for a laminar field.
        solution: Diagnostics of the u1 solve.
        predicted: Leading-order LHS when the branch curvature was supplied.
    """

    u0: np.ndarray = field(repr=False, compare=False)
    u1: np.ndarray = field(repr=False, compare=False)
    lhs: float = 0.0
    lhs_midpoint: float = 0.0
    tol: float = 1e-8
    mu_near_zero: float = math.inf
    amplitude: float = 0.0
    solution: Optional[U1Solution] = None
    predicted: Optional[float] = None

    def _normalize(self, value: float) -> float:
        return value if self.amplitude == 0.0 else value / self.amplitude**2

    @property
    def normalized_lhs(self) -> float:
        return self._normalize(self.lhs)

    @property
    def normalized_midpoint(self) -> float:
        return self._normalize(self.lhs_midpoint)

    @property
    def chain_length(self) -> Optional[int]:
        return 2 if abs(self.normalized_lhs) > self.tol else None

    @property
    def verdict(self) -> str:
        return "chain_length=2" if self.chain_length == 2 else "undetermined"

    @property
    def matches_prediction(self) -> Optional[bool]:
        """Whether LHS has the sign of the leading-order value.

        None when no curvature was supplied or the chain is undetermined.
        """
        if self.predicted is None or self.chain_length is None:
            return None
        return bool(np.sign(self.lhs) == np.sign(self.predicted))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lhs": self.lhs,
            "lhs_midpoint": self.lhs_midpoint,
            "normalized_lhs": self.normalized_lhs,
            "amplitude": self.amplitude,
            "tol": self.tol,
            "chain_length": self.chain_length,
            "verdict": self.verdict,
            "mu_near_zero": self.mu_near_zero,
            "predicted": self.predicted,
            "matches_prediction": self.matches_prediction,
            "u0_max": float(np.max(np.abs(self.u0))),
            "u1_max": float(np.max(np.abs(self.u1))),
            "solution": None if self.solution is None else self.solution.to_dict(),
        }


def chain_report(
    field: WaveField,
    profiles: FluidProfiles,
    tol: float = 1e-8,
    zero_tol: float = DEFAULT_ZERO_TOL,
    curvature: Optional[Tuple[LaminarProfile, float]] = None,
) -> JordanChain:
    """Build the Jordan chain of the zero eigenvalue and decide its length.

    Args:
        field: Even background field.
        profiles: Profiles of the flow.
        tol: |LHS / t^2| above which the chain is declared to end at length two.
        zero_tol: Absolute threshold of the singularity check in :func:`solve_u1`.
        curvature: Optional (laminar profile, c) for the leading-order LHS.

    Raises:
        SingularOperatorError: If the u1 problem is not uniquely solvable.
    """
    coeffs = coefficients(field, profiles)
    u0 = psi_x(field)
    solution = solve_u1(field, coeffs, zero_tol=zero_tol)
    lhs = transversality_lhs(field, coeffs, u0, solution.u1, rule="gauss")
    lhs_mid = transversality_lhs(field, coeffs, u0, solution.u1, rule="midpoint")
    predicted = None
    if curvature is not None:
        predicted = leading_order_lhs(*curvature)
    chain = JordanChain(
        u0=u0,
        u1=solution.u1,
        lhs=lhs,
        lhs_midpoint=lhs_mid,
        tol=tol,
        mu_near_zero=solution.mu_near_zero,
        amplitude=float(field.amplitude),
        solution=solution,
        predicted=predicted,
    )
    logger.info(f"Jordan chain: LHS={lhs:.6e} ({chain.verdict})")
    return chain


@dataclass(frozen=True)
class ChainStudy:
    """Jordan chains of Stokes fields at several amplitudes.

    Attributes:
        amplitudes: Amplitudes t in the order solved.
        chains: One chain per amplitude.
        tau: Expansion wavenumber of the fields.
    """

    amplitudes: Tuple[float, ...]
    chains: Tuple[JordanChain, ...] = field(repr=False, compare=False)
    tau: float = 0.0

    @property
    def signs(self) -> Tuple[float, ...]:
        return tuple(float(np.sign(c.lhs)) for c in self.chains)

    @property
    def sign_stable(self) -> bool:
        """Every chain ends at length two with one common sign of LHS."""
        return all(c.chain_length == 2 for c in self.chains) and len(set(self.signs)) == 1

    @property
    def scaling_defect(self) -> float:
        """Largest relative change of LHS / t^2 between consecutive amplitudes."""
        values = [c.normalized_lhs for c in self.chains]
        changes = [abs(b - a) / abs(a) for a, b in zip(values, values[1:]) if a != 0.0]
        return max(changes, default=0.0)

    @property
    def status(self) -> Status:
        if any(c.chain_length is None for c in self.chains):
            return Status.INCONCLUSIVE
        if not self.sign_stable or any(c.matches_prediction is False for c in self.chains):
            return Status.VIOLATION
        return Status.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau": self.tau,
            "amplitudes": list(self.amplitudes),
            "chains": [c.to_dict() for c in self.chains],
            "sign_stable": self.sign_stable,
            "scaling_defect": self.scaling_defect,
            "status": self.status.value,
        }


def chain_study(
    laminar: LaminarProfile,
    profiles: FluidProfiles,
    tau: float,
    amplitudes: Sequence[float] = (0.01, 0.005),
    Nx: int = 48,
    Ny: int = 24,
    tol: float = 1e-8,
    zero_tol: float = DEFAULT_ZERO_TOL,
    c: Optional[float] = None,
) -> ChainStudy:
    """Jordan chains of ``stokes_field(laminar, tau, t)`` for every amplitude.

    With the branch curvature ``c`` every LHS must also have the sign of
    :func:`leading_order_lhs`; without it only the stability of the sign in t
    is checked.

    Args:
        laminar: Laminar profile; the mode at ``tau`` is attached when missing.
        profiles: Profiles of the flow.
        tau: Expansion wavenumber.
        amplitudes: Amplitudes t, typically t and t/2.
        Nx: Number of x-nodes per period.
        Ny: Number of eta cells.
        tol: Threshold on |LHS / t^2|.
        zero_tol: Absolute threshold of the singularity check.
        c: Optional branch curvature.

    Raises:
        ValueError: If no amplitude is given.
        SingularOperatorError: If a u1 problem is not uniquely solvable.
    """
    if len(amplitudes) == 0:
        raise ValueError("amplitudes must not be empty")
    if laminar.tau is None or not math.isclose(laminar.tau, tau, rel_tol=1e-13):
        laminar = laminar.with_mode(tau, profiles)
    curvature = None if c is None else (laminar, c)

    chains = []
    for t in amplitudes:
        background = stokes_field(laminar, tau, t, Nx=Nx, Ny=Ny)
        chains.append(
            chain_report(background, profiles, tol=tol, zero_tol=zero_tol, curvature=curvature)
        )
    study = ChainStudy(
        amplitudes=tuple(float(t) for t in amplitudes), chains=tuple(chains), tau=float(tau)
    )
    logger.info(
        f"Chain study at tau={tau:.6g}: signs {study.signs}, "
        f"scaling defect {study.scaling_defect:.2e}"
    )
    return study
