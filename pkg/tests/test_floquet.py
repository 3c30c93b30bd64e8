"""Tests for the Jordan chain of the Floquet problem."""

import math

import numpy as np
import pytest

from stratawave.errors import SingularOperatorError
from stratawave.floquet import (
    ChainStudy,
    JordanChain,
    chain_report,
    chain_study,
    leading_order_lhs,
    solve_u1,
    transversality_lhs,
)
from stratawave.flow import stokes_field
from stratawave.linearize import coefficients, psi_x
from stratawave.spectra import Status
from stratawave.utils import correlation
from tests.conftest import KAPPA_0


@pytest.fixture(scope="module")
def subcritical_chain(subcritical_stokes, bench_profiles):
    return chain_report(subcritical_stokes, bench_profiles)


@pytest.fixture(scope="module")
def coarse_subcritical_chain(coarse_subcritical_stokes, bench_profiles):
    return chain_report(coarse_subcritical_stokes, bench_profiles)


def _chain(lhs, amplitude=0.01, predicted=None):
    return JordanChain(
        u0=np.ones((2, 2)),
        u1=np.zeros((2, 2)),
        lhs=lhs,
        mu_near_zero=0.5,
        amplitude=amplitude,
        predicted=predicted,
    )


@pytest.mark.slow
class TestChainReport:
    """Test cases for chain_report on the subcritical Stokes field."""

    def test_chain_length(self, subcritical_chain):
        """Test that the solvability integral ends the chain at length two."""
        assert subcritical_chain.chain_length == 2
        assert subcritical_chain.verdict == "chain_length=2"
        assert subcritical_chain.amplitude == 0.01
        assert subcritical_chain.matches_prediction is None

    def test_quadrature_rules_agree(self, subcritical_chain):
        """Test that the Gauss and midpoint rules give the same sign."""
        assert np.sign(subcritical_chain.lhs) == np.sign(subcritical_chain.lhs_midpoint)

    def test_u1_is_even(self, subcritical_chain, subcritical_stokes):
        """Test that u1 is even in x and vanishes on the bed."""
        u1 = subcritical_chain.u1
        Nx = subcritical_stokes.Nx
        assert u1.shape == (Nx, subcritical_stokes.Ny + 1)
        assert np.allclose(u1[:, 0], 0.0)
        mirrored = u1[(Nx - np.arange(Nx)) % Nx]
        assert np.allclose(u1, mirrored, atol=1e-10 * np.max(np.abs(u1)))

    def test_u1_follows_transverse_mode(
        self, subcritical_chain, subcritical_stokes, subcritical_mode
    ):
        """Test that u1 is close to a multiple of cos(tau x) gamma(y)."""
        tau, laminar = subcritical_mode
        field = subcritical_stokes
        mode = np.cos(tau * field.x)[:, None] * laminar.gamma(field.y)
        assert correlation(subcritical_chain.u1, mode) > 0.99

    def test_solution_diagnostics(self, subcritical_chain):
        """Test the linear residual and the near-zero eigenvalue."""
        solution = subcritical_chain.solution
        assert solution.linear_residual < 1e-8
        assert abs(solution.mu_near_zero) > 0.5
        assert solution.tol_zero == 1e-6
        data = subcritical_chain.to_dict()
        assert set(data) >= {"lhs", "normalized_lhs", "chain_length", "solution", "predicted"}

    def test_half_period_shift(self, subcritical_chain, subcritical_mode, bench_profiles):
        """Test that t -> -t, a half-period shift of the field, leaves LHS unchanged."""
        tau, laminar = subcritical_mode
        shifted = stokes_field(laminar, tau, -0.01, Nx=48, Ny=24)
        chain = chain_report(shifted, bench_profiles)
        assert chain.lhs == pytest.approx(subcritical_chain.lhs, rel=1e-8)

    def test_reflection(self, subcritical_chain, subcritical_stokes, bench_profiles):
        """Test that LHS is unchanged on the mirror image x -> -x of the field."""
        chain = chain_report(subcritical_stokes.reflected(), bench_profiles)
        assert chain.lhs == pytest.approx(subcritical_chain.lhs, rel=1e-10)

    def test_quadrature_gap_order(self, subcritical_chain, coarse_subcritical_chain):
        """Test that the Gauss and midpoint values converge to each other at second order."""
        coarse = abs(coarse_subcritical_chain.lhs - coarse_subcritical_chain.lhs_midpoint)
        fine = abs(subcritical_chain.lhs - subcritical_chain.lhs_midpoint)
        assert math.log2(coarse / fine) >= 1.7

    def test_u1_residual_order(self, subcritical_chain, coarse_subcritical_chain):
        """Test that the strong-form residual of u1 decays at second order."""
        coarse = coarse_subcritical_chain.solution
        fine = subcritical_chain.solution
        assert math.log2(coarse.interior_residual / fine.interior_residual) >= 1.7
        assert fine.surface_residual < coarse.surface_residual

    def test_refined_grid_accepted(self, subcritical_mode, bench_profiles, subcritical_chain):
        """Test that refinement keeps the operator regular and the sign of LHS."""
        tau, laminar = subcritical_mode
        fine = stokes_field(laminar, tau, 0.01, Nx=96, Ny=48)
        chain = chain_report(fine, bench_profiles)
        assert chain.chain_length == 2
        assert np.sign(chain.lhs) == np.sign(subcritical_chain.lhs)


@pytest.mark.slow
class TestChainStudy:
    """Test cases for chain_study."""

    def test_sign_stable(self, subcritical_mode, bench_profiles):
        """Test that LHS keeps its sign and scales like t^2."""
        tau, laminar = subcritical_mode
        study = chain_study(laminar, bench_profiles, tau, Nx=24, Ny=12)
        assert study.amplitudes == (0.01, 0.005)
        assert study.sign_stable
        assert study.scaling_defect < 0.05
        assert study.status is Status.PASS
        assert study.to_dict()["status"] == "pass"

    def test_curvature_sign(self, subcritical_mode, bench_profiles):
        """Test that exactly one sign of the curvature matches the computed LHS."""
        tau, laminar = subcritical_mode
        statuses = [
            chain_study(laminar, bench_profiles, tau, Nx=24, Ny=12, c=c).status
            for c in (1.0, -1.0)
        ]
        assert sorted(s.value for s in statuses) == ["pass", "violation"]

    def test_attaches_mode(self, bench_laminar, bench_profiles, subcritical_mode):
        """Test that a profile without mode gets the mode at tau."""
        tau, _ = subcritical_mode
        study = chain_study(bench_laminar, bench_profiles, tau, amplitudes=(0.01,), Nx=24, Ny=12)
        assert study.tau == tau
        assert len(study.chains) == 1

    def test_empty_amplitudes(self, subcritical_mode, bench_profiles):
        """Test that an empty amplitude list is rejected."""
        tau, laminar = subcritical_mode
        with pytest.raises(ValueError, match="amplitudes must not be empty"):
            chain_study(laminar, bench_profiles, tau, amplitudes=())


class TestSolveU1:
    """Test cases for solve_u1."""

    def test_refuses_singular(self, coarse_subcritical_stokes, bench_profiles):
        """Test that a zero threshold above the nearest eigenvalue refuses the solve."""
        coeffs = coefficients(coarse_subcritical_stokes, bench_profiles)
        with pytest.raises(SingularOperatorError, match="Operator has an eigenvalue of size"):
            solve_u1(coarse_subcritical_stokes, coeffs, zero_tol=1.0)


class TestTransversality:
    """Test cases for transversality_lhs and leading_order_lhs."""

    def test_unknown_rule(self, stokes, bench_profiles):
        """Test that an unknown quadrature rule is rejected."""
        coeffs = coefficients(stokes, bench_profiles)
        u0 = psi_x(stokes)
        with pytest.raises(ValueError, match="rule must be 'gauss' or 'midpoint'"):
            transversality_lhs(stokes, coeffs, u0, np.zeros_like(u0), rule="simpson")

    def test_zero_u1(self, stokes, bench_profiles):
        """Test that with u1 = 0 the integral reduces to the L2 norm of u0."""
        coeffs = coefficients(stokes, bench_profiles)
        u0 = psi_x(stokes)
        gauss = transversality_lhs(stokes, coeffs, u0, np.zeros_like(u0), rule="gauss")
        midpoint = transversality_lhs(stokes, coeffs, u0, np.zeros_like(u0), rule="midpoint")
        assert gauss > 0
        assert midpoint == pytest.approx(gauss, rel=0.05)

    def test_leading_order(self, bench_bifurcation):
        """Test -(pi / 2c) int gamma^2 with gamma = sinh(k(y + 1)) / sinh k."""
        _, laminar = bench_bifurcation
        k = KAPPA_0
        gamma_sq = (math.sinh(2 * k) / (4 * k) - 0.5) / math.sinh(k) ** 2
        expected = -(math.pi / (2 * 0.5)) * gamma_sq
        assert leading_order_lhs(laminar, 0.5) == pytest.approx(expected, rel=1e-4)

    def test_leading_order_needs_mode(self, bench_laminar):
        """Test that a profile without mode is rejected."""
        with pytest.raises(ValueError, match="carries no transverse mode"):
            leading_order_lhs(bench_laminar, 1.0)

    def test_leading_order_zero_curvature(self, bench_bifurcation):
        """Test that c = 0 is rejected."""
        _, laminar = bench_bifurcation
        with pytest.raises(ValueError, match="branch curvature c must be nonzero"):
            leading_order_lhs(laminar, 0.0)


class TestJordanChain:
    """Test cases for JordanChain."""

    def test_negligible_lhs(self):
        """Test that a negligible normalized integral leaves the chain undetermined."""
        chain = _chain(1e-14)
        assert chain.normalized_lhs == pytest.approx(1e-10)
        assert chain.chain_length is None
        assert chain.verdict == "undetermined"

    def test_normalized_by_amplitude(self):
        """Test that a small LHS at small amplitude still decides the chain."""
        chain = _chain(1e-9, amplitude=0.001)
        assert chain.normalized_lhs == pytest.approx(1e-3)
        assert chain.chain_length == 2

    def test_laminar_not_normalized(self):
        """Test that a zero amplitude leaves LHS unscaled."""
        assert _chain(0.0, amplitude=0.0).chain_length is None

    def test_matches_prediction(self):
        """Test the sign comparison with the leading-order value."""
        assert _chain(-1e-3, predicted=-2.0).matches_prediction
        assert _chain(-1e-3, predicted=2.0).matches_prediction is False
        assert _chain(-1e-3).matches_prediction is None
        assert _chain(1e-14, predicted=-2.0).matches_prediction is None


class TestChainStudyStatus:
    """Test cases for ChainStudy statuses."""

    def test_pass(self):
        """Test one sign and matching predictions."""
        study = ChainStudy((0.01, 0.005), (_chain(-1e-4), _chain(-2.5e-5, amplitude=0.005)))
        assert study.sign_stable
        assert study.scaling_defect == pytest.approx(0.0)
        assert study.status is Status.PASS

    def test_sign_flip(self):
        """Test that a sign change in t is a violation."""
        study = ChainStudy((0.01, 0.005), (_chain(-1e-4), _chain(2.5e-5, amplitude=0.005)))
        assert not study.sign_stable
        assert study.scaling_defect == pytest.approx(2.0)
        assert study.status is Status.VIOLATION

    def test_prediction_mismatch(self):
        """Test that a stable sign opposite to the prediction is a violation."""
        study = ChainStudy((0.01,), (_chain(-1e-4, predicted=1.0),))
        assert study.sign_stable
        assert study.status is Status.VIOLATION

    def test_undetermined(self):
        """Test that an undetermined chain is inconclusive."""
        study = ChainStudy((0.01, 0.005), (_chain(-1e-4), _chain(0.0, amplitude=0.005)))
        assert study.status is Status.INCONCLUSIVE
