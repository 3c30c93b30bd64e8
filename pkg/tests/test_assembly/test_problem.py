"""Tests for the assembled spectral problems."""

import math

import numpy as np
import pytest

from stratawave.assembly import (
    BoundaryCondition,
    assemble,
    build_mesh,
    reduce_tau,
    relative_defect,
)
from stratawave.formats import COOMatrixHandler
from stratawave.linearize import coefficients


@pytest.fixture(scope="module")
def bench_mesh(laminar_field):
    return build_mesh(laminar_field)


@pytest.fixture(scope="module")
def bench_coeffs(laminar_field, bench_profiles):
    return coefficients(laminar_field, bench_profiles)


class TestDofCounts:
    """Test cases for the dof spaces of each family."""

    @pytest.mark.parametrize(
        "bc,n_dofs",
        [
            ("periodic-full", 48 * 24),
            ("periodic-even", 25 * 24),
            ("dirichlet-sides", 47 * 24),
            ("neumann-sides", 49 * 24),
            ("half-dd", 23 * 24),
            ("half-dn", 24 * 24),
            ("half-nd", 24 * 24),
            ("half-nn", 25 * 24),
            ("bloch", 48 * 24),
        ],
    )
    def test_family_sizes(self, bench_mesh, bench_coeffs, bc, n_dofs):
        """Test the number of active dofs (the bed row is always dropped)."""
        problem = assemble(bench_mesh, bench_coeffs, bc, tau=0.3)
        assert problem.n_dofs == n_dofs
        assert np.all(problem.rows >= 1)

    def test_clamped_surface(self, bench_mesh, bench_coeffs):
        """Test that clamp_surface drops the surface row."""
        problem = assemble(bench_mesh, bench_coeffs, "periodic-full", clamp_surface=True)
        assert problem.n_dofs == 48 * 23
        assert not np.any(problem.surface_dofs)

    def test_three_period_even(self, laminar_field, bench_coeffs):
        """Test the even space over three periods."""
        problem = assemble(build_mesh(laminar_field, m=3), bench_coeffs, "periodic-even")
        assert problem.n_dofs == 73 * 24
        assert problem.period_multiple == 3


class TestAssemble:
    """Test cases for assemble."""

    def test_real_families_symmetric(self, bench_mesh, bench_coeffs):
        """Test that real families give symmetric matrices."""
        problem = assemble(bench_mesh, bench_coeffs, BoundaryCondition.HALF_DN)
        assert not problem.is_complex
        assert problem.hermitian_defect() <= 1e-13
        assert np.allclose(problem.M_vol, problem.M_vol.T)

    def test_bloch_hermitian(self, bench_mesh, bench_coeffs):
        """Test that a Bloch problem is complex Hermitian."""
        problem = assemble(bench_mesh, bench_coeffs, "bloch", tau=0.3)
        assert problem.is_complex
        assert problem.tau == pytest.approx(0.3)
        assert problem.hermitian_defect() <= 1e-13

    @pytest.mark.parametrize(
        "bc,bloch_form",
        [
            ("periodic-even", "quasiperiodic"),
            ("dirichlet-sides", "quasiperiodic"),
            ("half-nd", "quasiperiodic"),
            ("bloch", "quasiperiodic"),
            ("bloch", "shifted"),
        ],
    )
    def test_stokes_assembly_hermitian(self, stokes, bench_profiles, bc, bloch_form):
        """Test the Hermitian defect of the unsymmetrized matrices on a curved surface."""
        coeffs = coefficients(stokes, bench_profiles)
        problem = assemble(build_mesh(stokes), coeffs, bc, tau=0.4, bloch_form=bloch_form)
        assert problem.hermitian_defect() <= 1e-13

    def test_bloch_zero_is_periodic(self, bench_mesh, bench_coeffs):
        """Test that tau = tau* reduces to the periodic problem."""
        bloch = assemble(bench_mesh, bench_coeffs, "bloch", tau=1.0)
        periodic = assemble(bench_mesh, bench_coeffs, "periodic-full")
        assert bloch.tau == 0.0
        assert np.allclose(bloch.A, periodic.A)

    def test_surface_mass_sign(self, bench_mesh, bench_coeffs):
        """Test that the raw sign negates the surface mass."""
        form = assemble(bench_mesh, bench_coeffs, "periodic-even")
        raw = assemble(bench_mesh, bench_coeffs, "periodic-even", surface_sign="raw")
        assert np.allclose(raw.M_surf, -form.M_surf)
        assert np.all(np.diag(form.M_surf)[form.surface_dofs] > 0)

    def test_mass_integrates_area(self, bench_mesh, bench_coeffs):
        """Test that the volume mass of the constant nodal function is the area."""
        problem = assemble(bench_mesh, bench_coeffs, "periodic-full")
        nodal = np.ones((49, 25))
        nodal[:, 0] = 0.0
        u = problem.restrict(nodal)
        # the bed row is dropped, so the cells next to the bed lose part of their mass
        full = u @ problem.M_vol @ u
        assert 0.9 * 2.0 * math.pi < full < 2.0 * math.pi

    def test_lift_restrict(self, bench_mesh, bench_coeffs):
        """Test that lifting a dof vector and restricting it back is the identity."""
        problem = assemble(bench_mesh, bench_coeffs, "periodic-even")
        rng = np.random.default_rng(3)
        x = rng.standard_normal(problem.n_dofs)
        nodal = problem.lift(x)
        assert nodal.shape == (49, 25)
        assert np.all(nodal[:, 0] == 0.0)
        assert np.allclose(nodal, nodal[::-1])
        assert np.allclose(problem.restrict(nodal), x)

    def test_invalid_surface_sign(self, bench_mesh, bench_coeffs):
        """Test that an unknown surface sign is rejected."""
        with pytest.raises(ValueError, match="surface_sign must be"):
            assemble(bench_mesh, bench_coeffs, "periodic-even", surface_sign="other")

    def test_invalid_bloch_form(self, bench_mesh, bench_coeffs):
        """Test that an unknown Bloch form is rejected."""
        with pytest.raises(ValueError, match="bloch_form must be"):
            assemble(bench_mesh, bench_coeffs, "bloch", bloch_form="other")

    def test_unknown_family(self, bench_mesh, bench_coeffs):
        """Test that an unknown family name is rejected."""
        with pytest.raises(ValueError):
            assemble(bench_mesh, bench_coeffs, "robin-sides")

    def test_summary(self, bench_mesh, bench_coeffs):
        """Test the summary fields."""
        summary = assemble(bench_mesh, bench_coeffs, "half-nn").summary()
        assert summary["bc"] == "half-nn"
        assert summary["n_dofs"] == 25 * 24
        assert summary["period_multiple"] == 1

    def test_export_coo(self, bench_mesh, bench_coeffs, tmp_path):
        """Test that exported matrices read back unchanged."""
        problem = assemble(bench_mesh, bench_coeffs, "half-dd")
        written = problem.export_coo(tmp_path)
        assert set(written) == {"A", "M_vol", "M_surf"}
        assert written["A"].name == "half-dd_m1_A.coo"
        A = COOMatrixHandler().read(written["A"]).toarray()
        assert np.allclose(A, problem.A, rtol=0.0, atol=1e-14 * np.max(np.abs(problem.A)))


class TestReduceTau:
    """Test cases for reduce_tau."""

    def test_inside(self):
        """Test that values in [0, tau*) are kept."""
        assert reduce_tau(0.25, 1.0) == 0.25

    def test_negative(self):
        """Test that negative values wrap around."""
        assert reduce_tau(-0.25, 1.0) == pytest.approx(0.75)

    def test_multiple(self):
        """Test that tau* and its multiples reduce to zero."""
        assert reduce_tau(1.0, 1.0) == 0.0
        assert reduce_tau(3.0, 1.0) == 0.0
        assert reduce_tau(2.5, 1.0) == pytest.approx(0.5)


class TestRelativeDefect:
    """Test cases for relative_defect."""

    def test_symmetric(self):
        """Test that a Hermitian matrix has no defect."""
        assert relative_defect(np.array([[2.0, 1j], [-1j, 3.0]])) == 0.0

    def test_triangular(self):
        """Test ||X - X^H|| / ||X|| = sqrt(2 / 3) for an upper unit triangle."""
        defect = relative_defect(np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert defect == pytest.approx(math.sqrt(2.0 / 3.0))

    def test_zero_matrix(self):
        """Test that an empty surface mass has zero defect."""
        assert relative_defect(np.zeros((3, 3))) == 0.0
