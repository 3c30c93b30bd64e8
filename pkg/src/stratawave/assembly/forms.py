"""Element integration of the quadratic form and the mass forms.

Bilinear elements on the flattened rectangle, 2x2 Gauss quadrature in the
cell interiors and 2-point Gauss on surface edges. Physical gradients follow
the flattening map: ``u_x = u_X + a u_eta``, ``u_y = b u_eta`` and the area
element is ``H dX deta``. Element matrices are built for all cells at once and
scattered through a COO matrix.
"""

import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from stratawave.assembly.mesh import Mesh
from stratawave.utils import trig_interpolate

logger = logging.getLogger(__name__)

Weight = Union[float, np.ndarray, Callable[..., np.ndarray]]

GAUSS = 1.0 / np.sqrt(3.0)
# local node order (i, j), (i+1, j), (i+1, j+1), (i, j+1)
LOCAL_DI = np.array([0, 1, 1, 0])
LOCAL_DJ = np.array([0, 0, 1, 1])
_S_NODE = 2 * LOCAL_DI - 1
_T_NODE = 2 * LOCAL_DJ - 1
# Gauss points (s, t): index g = 2 * gs + gt
_S_GAUSS = np.repeat([-GAUSS, GAUSS], 2)
_T_GAUSS = np.tile([-GAUSS, GAUSS], 2)
_S_INDEX = np.repeat([0, 1], 2)

SHAPE = (1 + np.outer(_S_GAUSS, _S_NODE)) * (1 + np.outer(_T_GAUSS, _T_NODE)) / 4.0
SHAPE_S = _S_NODE[None, :] * (1 + np.outer(_T_GAUSS, _T_NODE)) / 4.0
SHAPE_T = _T_NODE[None, :] * (1 + np.outer(_S_GAUSS, _S_NODE)) / 4.0


def cell_mask(mesh: Mesh, half: bool = False) -> np.ndarray:
    """Cells of the full mesh, or only those with x >= 0."""
    ci = np.repeat(np.arange(mesh.Nx), mesh.Ny)
    if half:
        return ci >= mesh.center
    return np.ones(mesh.Nx * mesh.Ny, dtype=bool)


def _cells(mesh: Mesh, mask: Optional[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    ci = np.repeat(np.arange(mesh.Nx), mesh.Ny)
    cj = np.tile(np.arange(mesh.Ny), mesh.Nx)
    if mask is not None:
        ci, cj = ci[mask], cj[mask]
    return ci, cj


def _stretch_at_gauss(mesh: Mesh) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """x, H and H' at the two Gauss abscissae of every cell column."""
    field = mesh.background
    d = field.params.d
    xq = mesh.X[:-1, None] + 0.5 * (1.0 + np.array([-GAUSS, GAUSS]))[None, :] * mesh.hx
    flat = xq.ravel()
    xi = trig_interpolate(field.xi, field.params.Lambda, flat, x0=field.x[0])
    xi1 = trig_interpolate(field.xi, field.params.Lambda, flat, x0=field.x[0], derivative=1)
    shape = xq.shape
    return xq, ((xi + d) / d).reshape(shape), (xi1 / d).reshape(shape)


def _at_gauss(values: np.ndarray, mesh: Mesh, ci: np.ndarray, cj: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of nodal values (Nx + 1, Ny + 1) to the Gauss points."""
    local = values[ci[:, None] + LOCAL_DI[None, :], cj[:, None] + LOCAL_DJ[None, :]]
    return local @ SHAPE.T


def _weight_at_gauss(
    weight: Weight, mesh: Mesh, ci: np.ndarray, cj: np.ndarray, x: np.ndarray, y: np.ndarray
) -> np.ndarray:
    if callable(weight):
        return np.broadcast_to(np.asarray(weight(x, y), dtype=float), x.shape)
    weight = np.asarray(weight, dtype=float)
    if weight.ndim == 0:
        return np.full(x.shape, float(weight))
    if weight.shape[0] == mesh.background.Nx:
        weight = mesh.nodal(weight)
    return _at_gauss(weight, mesh, ci, cj)


def volume_matrices(
    mesh: Mesh,
    potential: Optional[np.ndarray] = None,
    weight: Weight = 1.0,
    tau_shift: float = 0.0,
    mask: Optional[np.ndarray] = None,
) -> Tuple[csr_matrix, csr_matrix]:
    """Stiffness and weighted mass matrices over the mesh nodes.

    Args:
        mesh: Mesh.
        potential: Nodal omega* on the mesh, shape (Nx + 1, Ny + 1).
        weight: Volume weight a: constant, nodal array or callable of (x, y).
        tau_shift: Bloch shift; the x-derivative becomes d/dx + i tau.
        mask: Cells to integrate over.

    Returns:
        (K, M) with K[a, b] = int grad phi_b . conj(grad phi_a) - omega* phi_a phi_b
        and M[a, b] = int a phi_a phi_b, both over the physical domain.
    """
    ci, cj = _cells(mesh, mask)
    xq, Hq, H1q = _stretch_at_gauss(mesh)
    H = Hq[ci][:, _S_INDEX]
    H1 = H1q[ci][:, _S_INDEX]
    x = xq[ci][:, _S_INDEX]
    eta = mesh.eta[cj][:, None] + 0.5 * (1.0 + _T_GAUSS)[None, :] * mesh.hy
    y = eta * H - mesh.background.params.d

    a = -eta * H1 / H
    b = 1.0 / H
    dN_X = SHAPE_S * (2.0 / mesh.hx)
    dN_eta = SHAPE_T * (2.0 / mesh.hy)
    gx = dN_X[None, :, :] + a[:, :, None] * dN_eta[None, :, :]
    if tau_shift:
        gx = gx + 1j * tau_shift * SHAPE[None, :, :]
    gy = b[:, :, None] * dN_eta[None, :, :]
    wdet = 0.25 * mesh.hx * mesh.hy * H

    K_local = np.einsum("cg,cga,cgb->cab", wdet, np.conj(gx), gx) + np.einsum(
        "cg,cga,cgb->cab", wdet, gy, gy
    )
    if potential is not None:
        omega = _at_gauss(np.asarray(potential, dtype=float), mesh, ci, cj)
        K_local = K_local - np.einsum("cg,ga,gb->cab", wdet * omega, SHAPE, SHAPE)
    vol = _weight_at_gauss(weight, mesh, ci, cj, x, y)
    M_local = np.einsum("cg,ga,gb->cab", wdet * vol, SHAPE, SHAPE)

    nodes = mesh.node(ci[:, None] + LOCAL_DI[None, :], cj[:, None] + LOCAL_DJ[None, :])
    rows = np.broadcast_to(nodes[:, :, None], K_local.shape).ravel()
    cols = np.broadcast_to(nodes[:, None, :], K_local.shape).ravel()
    size = (mesh.n_nodes, mesh.n_nodes)
    K = coo_matrix((K_local.ravel(), (rows, cols)), shape=size).tocsr()
    M = coo_matrix((M_local.ravel(), (rows, cols)), shape=size).tocsr()
    logger.debug(f"Assembled volume forms on {ci.size} cells, shift={tau_shift:g}")
    return K, M


def surface_matrix(
    mesh: Mesh, weight: Weight, half: bool = False
) -> csr_matrix:
    """Surface mass ``int w phi_a phi_b dx`` over the top edge.

    Args:
        mesh: Mesh.
        weight: Constant, nodal array on the mesh columns (Nx + 1,) or on the
            field grid, or a callable of x.
        half: Integrate over x >= 0 only.

    Returns:
        Sparse matrix over the mesh nodes, nonzero on the surface row only.
    """
    ci = np.arange(mesh.Nx)
    if half:
        ci = ci[ci >= mesh.center]
    s = np.array([-GAUSS, GAUSS])
    edge_shape = np.stack([(1.0 - s) / 2.0, (1.0 + s) / 2.0], axis=1)  # (gauss, local)
    xg = mesh.X[ci][:, None] + 0.5 * (1.0 + s)[None, :] * mesh.hx
    if callable(weight):
        w = np.broadcast_to(np.asarray(weight(xg), dtype=float), xg.shape)
    else:
        values = np.asarray(weight, dtype=float)
        if values.ndim == 0:
            w = np.full(xg.shape, float(values))
        else:
            if values.shape[0] == mesh.background.Nx:
                values = mesh.nodal(values)
            w = np.stack([values[ci], values[ci + 1]], axis=1) @ edge_shape.T
    local = np.einsum("cg,ga,gb->cab", 0.5 * mesh.hx * w, edge_shape, edge_shape)
    nodes = mesh.node(np.stack([ci, ci + 1], axis=1), mesh.Ny)
    rows = np.broadcast_to(nodes[:, :, None], local.shape).ravel()
    cols = np.broadcast_to(nodes[:, None, :], local.shape).ravel()
    size = (mesh.n_nodes, mesh.n_nodes)
    return coo_matrix((local.ravel(), (rows, cols)), shape=size).tocsr()
