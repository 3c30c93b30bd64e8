"""Meshes and finite-element assembly of the spectral problems."""

from stratawave.assembly.forms import surface_matrix, volume_matrices
from stratawave.assembly.mesh import Mesh, build_mesh
from stratawave.assembly.problem import (
    BoundaryCondition,
    SpectralProblem,
    assemble,
    dof_map,
    reduce_tau,
    relative_defect,
)

__all__ = [
    "Mesh",
    "build_mesh",
    "BoundaryCondition",
    "SpectralProblem",
    "assemble",
    "dof_map",
    "reduce_tau",
    "relative_defect",
    "volume_matrices",
    "surface_matrix",
]
