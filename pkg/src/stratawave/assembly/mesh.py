"""Tensor meshes on the flattened strip.

A mesh covers ``m`` periods ``[-m L/2, m L/2] x [0, d]`` with the nodes of the
field's grid repeated periodically, so x = 0 and x = +-L/2 are always nodes.
Node (i, j) has global number ``i * (Ny + 1) + j``.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from stratawave.errors import MeshError
from stratawave.flow.field import WaveField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mesh:
    """Bilinear tensor mesh over ``period_multiple`` periods of a field.

    Attributes:
        background: Background field the mesh is built on.
        period_multiple: Number of periods m covered.
        Nx: Number of cells in x (m times the cells per period).
        Ny: Number of cells in eta.
        X: Node x-coordinates, shape (Nx + 1,).
        eta: Node eta-coordinates, shape (Ny + 1,).
        field_index: Column of the field grid carrying each mesh column.
    """

    background: WaveField = field(repr=False, compare=False)
    period_multiple: int
    Nx: int
    Ny: int
    X: np.ndarray = field(repr=False, compare=False)
    eta: np.ndarray = field(repr=False, compare=False)
    field_index: np.ndarray = field(repr=False, compare=False)

    @property
    def period(self) -> float:
        return self.background.params.Lambda

    @property
    def cells_per_period(self) -> int:
        return self.Nx // self.period_multiple

    @property
    def hx(self) -> float:
        return float(self.X[1] - self.X[0])

    @property
    def hy(self) -> float:
        return float(self.eta[1] - self.eta[0])

    @property
    def center(self) -> int:
        """Column index of x = 0."""
        return self.Nx // 2

    @property
    def n_nodes(self) -> int:
        return (self.Nx + 1) * (self.Ny + 1)

    @property
    def xi(self) -> np.ndarray:
        """Surface elevation at the mesh columns."""
        return self.background.xi[self.field_index]

    @property
    def jacobian(self) -> np.ndarray:
        """Determinant (xi + d) / d of the flattening map at the mesh columns."""
        return (self.xi + self.background.params.d) / self.background.params.d

    @property
    def jacobian_deviation(self) -> float:
        return float(np.max(np.abs(self.jacobian - 1.0)))

    def node(self, i, j):
        """Global node number of column i, row j."""
        return np.asarray(i) * (self.Ny + 1) + np.asarray(j)

    def nodal(self, values: np.ndarray) -> np.ndarray:
        """Extend a field-grid function (rows of shape (Nx_field, ...)) to the mesh columns."""
        return np.asarray(values)[self.field_index]


def build_mesh(
    field: WaveField,
    Nx: Optional[int] = None,
    Ny: Optional[int] = None,
    m: int = 1,
) -> Mesh:
    """Build the mesh over m periods on the field's own grid.

    Args:
        field: Background field.
        Nx: Total number of x-cells; defaults to m * field.Nx.
        Ny: Number of eta cells; defaults to field.Ny.
        m: Number of periods.

    Returns:
        Mesh whose columns reuse the field's grid columns.

    Raises:
        MeshError: If the cell counts do not match the field grid or xi + d <= 0.
    """
    if m < 1:
        raise MeshError(f"period multiple must be at least 1, got {m}")
    Nx = m * field.Nx if Nx is None else int(Nx)
    Ny = field.Ny if Ny is None else int(Ny)
    if Nx % (2 * m):
        raise MeshError(f"Nx={Nx} must be divisible by 2m={2 * m}")
    n = Nx // m
    if n != field.Nx or Ny != field.Ny:
        raise MeshError(
            f"mesh {n}x{Ny} per period does not match the field grid {field.Nx}x{field.Ny}"
        )
    d = field.params.d
    if np.min(field.xi) + d <= 0:
        raise MeshError("xi + d must stay positive")

    hx = field.params.Lambda / n
    i = np.arange(Nx + 1)
    X = (i - Nx // 2) * hx
    field_index = (i - Nx // 2 + n // 2) % n
    mesh = Mesh(
        background=field,
        period_multiple=m,
        Nx=Nx,
        Ny=Ny,
        X=X,
        eta=np.linspace(0.0, d, Ny + 1),
        field_index=field_index,
    )
    logger.debug(f"Mesh {Nx}x{Ny} over {m} period(s), hx={hx:.4g}")
    return mesh
