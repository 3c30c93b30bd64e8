"""Spectral problems: the quadratic form restricted to one function space.

Every space drops the bed row (u = 0 at y = -d). The side conditions are

    PERIODIC_FULL   u(x + mL) = u(x)
    PERIODIC_EVEN   mL-periodic and even in x
    BLOCH           u(x + mL) = exp(i tau m L) u(x)
    DIRICHLET_SIDES u = 0 at x = -mL/2, mL/2
    NEUMANN_SIDES   natural conditions at x = -mL/2, mL/2
    HALF_XY         on x in [0, mL/2], X at x = 0 and Y at x = mL/2 (D or N)

The form is a(u, v) = int (grad u . grad v - omega* u v) + int w_s u v dx with
surface weight ``w_s = -sigma / psi_y``.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from stratawave.assembly.forms import Weight, cell_mask, surface_matrix, volume_matrices
from stratawave.assembly.mesh import Mesh
from stratawave.linearize.coefficients import LinearizedCoefficients

logger = logging.getLogger(__name__)


class BoundaryCondition(Enum):
    """Side-condition families of the spectral problems."""

    PERIODIC_EVEN = "periodic-even"
    PERIODIC_FULL = "periodic-full"
    DIRICHLET_SIDES = "dirichlet-sides"
    NEUMANN_SIDES = "neumann-sides"
    HALF_DD = "half-dd"
    HALF_DN = "half-dn"
    HALF_ND = "half-nd"
    HALF_NN = "half-nn"
    BLOCH = "bloch"

    @property
    def is_half(self) -> bool:
        return self.value.startswith("half-")


def relative_defect(matrix: np.ndarray) -> float:
    """||X - X^H|| / ||X|| in the Frobenius norm, 0 for a zero matrix."""
    norm = np.linalg.norm(matrix)
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(matrix - matrix.conj().T) / norm)


@dataclass(frozen=True)
class SpectralProblem:
    """Stiffness and mass matrices of one boundary-condition family.

    Attributes:
        bc: Boundary-condition family.
        tau: Bloch parameter (reduced to [0, tau*)), 0 for real families.
        period_multiple: Number of periods covered.
        A: Stiffness form on the active dofs (dense, symmetric or Hermitian).
        M_vol: Volume mass with weight a.
        M_surf: Surface mass with weight -b / psi_y (negated for ``surface_sign="raw"``).
        columns: Mesh column of each dof's representative node.
        rows: Mesh row of each dof's representative node.
        surface_sign: ``"form"`` or ``"raw"``.
    """

    bc: BoundaryCondition
    tau: float
    period_multiple: int
    A: np.ndarray = field(repr=False, compare=False)
    M_vol: np.ndarray = field(repr=False, compare=False)
    M_surf: np.ndarray = field(repr=False, compare=False)
    columns: np.ndarray = field(repr=False, compare=False)
    rows: np.ndarray = field(repr=False, compare=False)
    mesh: Mesh = field(repr=False, compare=False)
    prolongation: csr_matrix = field(repr=False, compare=False)
    surface_sign: str = "form"

    @property
    def n_dofs(self) -> int:
        return self.A.shape[0]

    @property
    def surface_dofs(self) -> np.ndarray:
        """Boolean mask of dofs on the free surface."""
        return self.rows == self.mesh.Ny

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.A)

    def hermitian_defect(self) -> float:
        """Largest relative Hermitian defect of A, M_vol and M_surf as assembled."""
        return max(relative_defect(X) for X in (self.A, self.M_vol, self.M_surf))

    def lift(self, vector: np.ndarray) -> np.ndarray:
        """Nodal values (Nx + 1, Ny + 1) of a dof vector, zero on the bed."""
        nodal = self.prolongation @ np.asarray(vector)
        return nodal.reshape(self.mesh.Nx + 1, self.mesh.Ny + 1)

    def restrict(self, nodal: np.ndarray) -> np.ndarray:
        """Dof vector sampling a nodal function at each dof's representative node."""
        nodal = np.asarray(nodal)
        return nodal[self.columns, self.rows]

    def export_coo(self, path: Union[str, Path]) -> Dict[str, Path]:
        """Write A, M_vol and M_surf as (row, col, value) text files.

        Args:
            path: Output directory.

        Returns:
            Mapping of matrix name to written file.
        """
        from stratawave.formats import COOMatrixHandler

        out = Path(path)
        out.mkdir(parents=True, exist_ok=True)
        handler = COOMatrixHandler()
        written = {}
        stem = self.bc.value if self.bc is not BoundaryCondition.BLOCH else f"bloch-{self.tau:.6g}"
        for name, matrix in (("A", self.A), ("M_vol", self.M_vol), ("M_surf", self.M_surf)):
            target = out / f"{stem}_m{self.period_multiple}_{name}.coo"
            handler.write(matrix, target)
            written[name] = target
        return written

    def summary(self) -> Dict[str, Any]:
        return {
            "bc": self.bc.value,
            "tau": self.tau,
            "period_multiple": self.period_multiple,
            "n_dofs": self.n_dofs,
            "hermitian_defect": self.hermitian_defect(),
        }


def dof_map(
    mesh: Mesh,
    bc: BoundaryCondition,
    phase: complex = 1.0,
    clamp_surface: bool = False,
) -> Tuple[csr_matrix, np.ndarray, np.ndarray]:
    """Prolongation from dofs to mesh nodes for a boundary-condition family.

    Args:
        mesh: Mesh.
        bc: Boundary-condition family.
        phase: Factor linking column Nx to column 0 for periodic families.
        clamp_surface: Also drop the surface row.

    Returns:
        (P, columns, rows) with P of shape (n_nodes, n_dofs).
    """
    Nx, Ny, c = mesh.Nx, mesh.Ny, mesh.center
    top = Ny if clamp_surface else Ny + 1
    row_range = np.arange(1, top)

    if bc in (BoundaryCondition.PERIODIC_FULL, BoundaryCondition.BLOCH):
        dof_cols = np.arange(Nx)
        node_cols = np.arange(Nx + 1)
        target = np.where(node_cols == Nx, 0, node_cols)
        factor = np.where(node_cols == Nx, phase, 1.0)
    elif bc is BoundaryCondition.PERIODIC_EVEN:
        node_cols = np.arange(Nx + 1)
        dof_cols = np.arange(c, Nx + 1)
        target = np.abs(node_cols - c)
        factor = np.ones(Nx + 1)
    else:
        if bc is BoundaryCondition.DIRICHLET_SIDES:
            node_cols = np.arange(1, Nx)
        elif bc is BoundaryCondition.NEUMANN_SIDES:
            node_cols = np.arange(Nx + 1)
        else:
            left, right = bc.value[-2], bc.value[-1]
            start = c + 1 if left == "d" else c
            stop = Nx if right == "d" else Nx + 1
            node_cols = np.arange(start, stop)
        dof_cols = node_cols
        target = np.arange(node_cols.size)
        factor = np.ones(node_cols.size)

    n_cols = dof_cols.size
    n_rows = row_range.size

    node_i = np.repeat(node_cols, n_rows)
    node_j = np.tile(row_range, node_cols.size)
    dof = np.repeat(target, n_rows) * n_rows + np.tile(np.arange(n_rows), node_cols.size)
    values = np.repeat(factor, n_rows).astype(complex if np.iscomplexobj(phase) else float)
    P = coo_matrix(
        (values, (mesh.node(node_i, node_j), dof)), shape=(mesh.n_nodes, n_cols * n_rows)
    ).tocsr()
    columns = np.repeat(dof_cols, n_rows)
    rows = np.tile(row_range, n_cols)
    return P, columns, rows


def reduce_tau(tau: float, tau_star: float) -> float:
    """Reduce a Bloch parameter to [0, tau*)."""
    reduced = math.fmod(tau, tau_star)
    if reduced < 0:
        reduced += tau_star
    if math.isclose(reduced, tau_star, rel_tol=0.0, abs_tol=1e-14 * tau_star):
        reduced = 0.0
    return reduced


def assemble(
    mesh: Mesh,
    coeffs: LinearizedCoefficients,
    bc: Union[BoundaryCondition, str],
    vol_weight: Weight = 1.0,
    surf_weight: Weight = 1.0,
    tau: float = 0.0,
    surface_sign: str = "form",
    bloch_form: str = "quasiperiodic",
    clamp_surface: bool = False,
    robin: Optional[np.ndarray] = None,
) -> SpectralProblem:
    """Assemble the quadratic form and mass forms on one function space.

    Args:
        mesh: Mesh built on the coefficients' field.
        coeffs: Linearized coefficients.
        bc: Boundary-condition family (enum or its string value).
        vol_weight: Volume weight a > 0 of the mass form.
        surf_weight: Surface weight b > 0; the surface mass uses -b / psi_y.
        tau: Bloch parameter, reduced modulo tau* = 2 pi / L.
        surface_sign: ``"form"`` keeps the surface mass positive; ``"raw"``
            negates it so that Steklov values follow the printed boundary
            condition.
        bloch_form: ``"quasiperiodic"`` (phase-linked nodal space) or
            ``"shifted"`` (periodic space with d/dx + i tau).
        clamp_surface: Drop the surface row (the space with u = 0 on both
            horizontal boundaries).
        robin: Override of the surface weight of the form, nodal on the
            field grid.

    Returns:
        Assembled problem with dense matrices.
    """
    bc = BoundaryCondition(bc)
    if surface_sign not in ("form", "raw"):
        raise ValueError(f"surface_sign must be 'form' or 'raw', got '{surface_sign}'")
    if bloch_form not in ("quasiperiodic", "shifted"):
        raise ValueError(f"bloch_form must be 'quasiperiodic' or 'shifted', got '{bloch_form}'")

    params = mesh.background.params
    m = mesh.period_multiple
    tau_star = params.tau_star
    tau = reduce_tau(float(tau), tau_star) if bc is BoundaryCondition.BLOCH else 0.0

    phase: complex = 1.0
    shift = 0.0
    if bc is BoundaryCondition.BLOCH and tau != 0.0:
        if bloch_form == "shifted":
            shift = tau
        else:
            phase = complex(np.exp(1j * tau * m * params.Lambda))

    half = bc.is_half
    mask = cell_mask(mesh, half=half)
    K, M = volume_matrices(
        mesh, potential=mesh.nodal(coeffs.omega_star), weight=vol_weight, tau_shift=shift, mask=mask
    )
    surface_form = coeffs.robin_weight if robin is None else np.asarray(robin, dtype=float)
    K = K + surface_matrix(mesh, surface_form, half=half)

    surf_values = _surface_weight(surf_weight, mesh)
    sign = 1.0 if surface_sign == "form" else -1.0
    S = surface_matrix(mesh, sign * surf_values / mesh.nodal(-coeffs.psi_y_s), half=half)

    P, columns, rows = dof_map(mesh, bc, phase=phase, clamp_surface=clamp_surface)
    PH = P.conj().T
    A = (PH @ K @ P).toarray()
    M_vol = (PH @ M @ P).toarray()
    M_surf = (PH @ S @ P).toarray()
    logger.debug(f"Assembled {bc.value} (m={m}, tau={tau:.6g}) with {A.shape[0]} dofs")
    return SpectralProblem(
        bc=bc,
        tau=tau,
        period_multiple=m,
        A=A,
        M_vol=M_vol,
        M_surf=M_surf,
        columns=columns,
        rows=rows,
        mesh=mesh,
        prolongation=P,
        surface_sign=surface_sign,
    )


def _surface_weight(weight: Weight, mesh: Mesh) -> np.ndarray:
    """Surface weight b at the mesh columns."""
    if callable(weight):
        return np.asarray(weight(mesh.X), dtype=float)
    values = np.asarray(weight, dtype=float)
    if values.ndim == 0:
        return np.full(mesh.Nx + 1, float(values))
    if values.shape[0] == mesh.background.Nx:
        return mesh.nodal(values)
    return values
