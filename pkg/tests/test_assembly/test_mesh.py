"""Tests for meshes over one or several periods."""

import math

import numpy as np
import pytest

from stratawave.assembly import build_mesh
from stratawave.errors import MeshError


class TestBuildMesh:
    """Test cases for build_mesh."""

    def test_single_period(self, laminar_field):
        """Test the mesh on the field's own grid."""
        mesh = build_mesh(laminar_field)
        assert (mesh.Nx, mesh.Ny) == (48, 24)
        assert mesh.center == 24
        assert mesh.X[mesh.center] == 0.0
        assert mesh.X[0] == pytest.approx(-math.pi)
        assert mesh.X[-1] == pytest.approx(math.pi)
        assert mesh.n_nodes == 49 * 25
        assert mesh.cells_per_period == 48
        assert mesh.jacobian_deviation == 0.0

    def test_three_periods(self, laminar_field):
        """Test that m periods repeat the field columns."""
        mesh = build_mesh(laminar_field, m=3)
        assert mesh.Nx == 144
        assert mesh.period_multiple == 3
        assert mesh.X[0] == pytest.approx(-3.0 * math.pi)
        assert mesh.field_index[mesh.center] == 24
        assert mesh.field_index[mesh.center + 48] == 24

    def test_nodal_extension(self, stokes):
        """Test that nodal values repeat the field periodically."""
        mesh = build_mesh(stokes)
        nodal = mesh.nodal(stokes.xi)
        assert nodal.shape == (49,)
        assert nodal[0] == nodal[-1]
        assert np.allclose(mesh.xi, nodal)
        assert mesh.jacobian_deviation == pytest.approx(0.01, rel=1e-6)

    def test_node_numbering(self, laminar_field):
        """Test the global numbering i * (Ny + 1) + j."""
        mesh = build_mesh(laminar_field)
        assert mesh.node(2, 3) == 2 * 25 + 3

    def test_invalid_multiple(self, laminar_field):
        """Test that m must be at least 1."""
        with pytest.raises(MeshError, match="period multiple must be at least 1"):
            build_mesh(laminar_field, m=0)

    def test_indivisible_cells(self, laminar_field):
        """Test that Nx must split into m even periods."""
        with pytest.raises(MeshError, match="must be divisible"):
            build_mesh(laminar_field, Nx=100, m=3)

    def test_grid_mismatch(self, laminar_field):
        """Test that the mesh must reuse the field grid."""
        with pytest.raises(MeshError, match="does not match the field grid"):
            build_mesh(laminar_field, Nx=24, Ny=24)
