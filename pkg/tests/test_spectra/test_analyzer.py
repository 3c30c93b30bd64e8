"""Tests for SpectralAnalyzer."""

import math
from dataclasses import replace

import numpy as np
import pytest

from stratawave.spectra import SpectralAnalyzer, Status
from stratawave.spectra.analyzer import LAMINAR_CAVEAT
from stratawave.utils import multiset_distance


@pytest.fixture(scope="module")
def coarse_analyzer(coarse_laminar_field, bench_profiles):
    return SpectralAnalyzer(coarse_laminar_field, bench_profiles)


@pytest.fixture(scope="module")
def subcritical_analyzer(subcritical_field, bench_profiles):
    return SpectralAnalyzer(subcritical_field, bench_profiles)


@pytest.fixture(scope="module")
def subcritical_stokes_analyzer(coarse_subcritical_stokes, bench_profiles):
    return SpectralAnalyzer(coarse_subcritical_stokes, bench_profiles)


class TestSpectra:
    """Test cases for the mu and Steklov spectra."""

    def test_problem_cache(self, laminar_analyzer):
        """Test that constant-weight problems are assembled once."""
        first = laminar_analyzer.problem("half-nn")
        assert laminar_analyzer.problem("half-nn") is first

    def test_callable_weight_not_cached(self, laminar_analyzer):
        """Test that problems with weight functions are rebuilt."""
        weight = lambda x, y: 1.0 + 0.1 * np.cos(x)  # noqa: E731
        first = laminar_analyzer.problem("half-nn", vol_weight=weight)
        assert laminar_analyzer.problem("half-nn", vol_weight=weight) is not first

    def test_raw_steklov_is_negated(self, laminar_analyzer):
        """Test that the raw-sign Steklov set is the negated form set."""
        form = laminar_analyzer.steklov_spectrum()
        raw = laminar_analyzer.steklov_spectrum(surface_sign="raw")
        assert np.allclose(raw.eigenvalues, np.sort(-form.eigenvalues))

    def test_caveats(self, laminar_analyzer, stokes_analyzer):
        """Test the laminar-field caveat."""
        assert laminar_analyzer.caveats == [LAMINAR_CAVEAT]
        assert stokes_analyzer.caveats == []
        assert laminar_analyzer.tau_star == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "sides, halves",
        [
            ("dirichlet-sides", ("half-dd", "half-nd")),
            ("neumann-sides", ("half-nn", "half-dn")),
        ],
    )
    def test_sides_are_half_unions(self, stokes_analyzer, sides, halves):
        """Test that side spectra are unions of the half-period spectra."""
        whole = stokes_analyzer.mu_spectrum(sides, k=6).eigenvalues
        union = np.sort(
            np.concatenate([stokes_analyzer.mu_spectrum(bc, k=6).eigenvalues for bc in halves])
        )
        assert multiset_distance(whole, union[:6]) <= 1e-8

    def test_bloch_conjugate_symmetry(self, laminar_analyzer):
        """Test that tau and tau* - tau give the same Bloch spectrum."""
        first = laminar_analyzer.mu_spectrum("bloch", k=4, tau=0.3).eigenvalues
        second = laminar_analyzer.mu_spectrum("bloch", k=4, tau=0.7).eigenvalues
        assert np.allclose(first, second, atol=1e-9)


class TestNegativeCounts:
    """Test cases for negative_count_compare."""

    def test_single_period(self, laminar_analyzer):
        """Test n_mu = n_theta = 2 from the modes k = 0 and 1."""
        comparison = laminar_analyzer.negative_count_compare()
        assert (comparison.n_mu, comparison.n_theta) == (2, 2)
        assert comparison.stable
        assert comparison.status is Status.PASS

    def test_weighted(self, laminar_analyzer):
        """Test that positive weights leave the counts unchanged."""
        comparison = laminar_analyzer.negative_count_compare(
            a_weight=lambda x, y: 1.0 + 0.1 * np.cos(x), b_weight=2.0
        )
        assert (comparison.n_mu, comparison.n_theta) == (2, 2)

    def test_three_periods(self, coarse_analyzer):
        """Test six negative modes k = n / 3 for n = 0..5 over three periods."""
        comparison = coarse_analyzer.negative_count_compare(m=3)
        assert comparison.n_mu == 6
        assert comparison.equal
        assert comparison.to_dict()["status"] == "pass"


class TestPositivity:
    """Test cases for hform_positivity."""

    def test_clamped_form(self, laminar_analyzer):
        """Test lambda_min = pi^2 on functions vanishing at bed and surface."""
        report = laminar_analyzer.hform_positivity()
        assert report.lambda_min == pytest.approx(math.pi**2, rel=0.02)
        assert report.positive
        assert report.status is Status.PASS


class TestSpectrumReport:
    """Test cases for spectrum_report."""

    def test_named_values(self, laminar_analyzer):
        """Test the names and traces of the reported eigenvalues."""
        report = laminar_analyzer.spectrum_report(j_max=4)
        for name in ("mu_1", "mu_2", "mu_4P", "mu_1N", "mu_3D", "mu_4DD", "mu_1ND", "mu_2NN"):
            assert name in report.named
        assert report.trace["mu_2D"] == ("dirichlet-sides", 1)
        assert report.named["mu_1"] < report.named["mu_2"]
        assert report.caveats == [LAMINAR_CAVEAT]
        assert report.status is Status.PASS

    def test_to_dict(self, laminar_analyzer):
        """Test that every family appears in the serialized spectra."""
        data = laminar_analyzer.spectrum_report(j_max=3).to_dict()
        assert set(data["spectra"]) == {
            "periodic-even",
            "periodic-full",
            "neumann-sides",
            "dirichlet-sides",
            "half-dd",
            "half-dn",
            "half-nd",
            "half-nn",
        }


class TestLemma:
    """Test cases for lemma_al2_report."""

    def test_laminar(self, laminar_analyzer):
        """Test that the laminar field passes with the kernel clauses skipped."""
        report = laminar_analyzer.lemma_al2_report()
        assert report.status is Status.PASS
        assert not report.relation("mu_2D = 0").applicable
        assert report.relation("mu_1N = mu_1").status is Status.PASS
        assert report.kernel_correlation is None
        assert report.caveats == [LAMINAR_CAVEAT]

    def test_stokes_kernel(self, stokes_analyzer):
        """Test that psi_x gives the zero Dirichlet-sides eigenvalue."""
        report = stokes_analyzer.lemma_al2_report()
        assert report.relation("mu_2D = 0").applicable
        assert report.relation("mu_2D = 0").status is Status.PASS
        assert report.kernel_correlation > 0.99

    def test_stokes_equalities(self, stokes_analyzer):
        """Test the equalities between side, half and periodic spectra."""
        report = stokes_analyzer.lemma_al2_report()
        for name in ("mu_1N = mu_1", "mu_3N = mu_2", "mu_2D = mu_1DD", "mu_1D = mu_1ND"):
            assert report.relation(name).status is Status.PASS

    def test_half_family_gaps_are_strict(self, laminar_analyzer, monkeypatch):
        """Test that a tiny reversed half-family gap is a violation, unlike mu_2D > mu_2N."""
        report = laminar_analyzer.spectrum_report(4)
        named = dict(report.named)
        named["mu_1DN"] = named["mu_1DD"] + 5e-9
        named["mu_2N"] = named["mu_2D"] - 5e-9
        patched = replace(report, named=named)
        monkeypatch.setattr(laminar_analyzer, "spectrum_report", lambda j_max=4: patched)

        lemma = laminar_analyzer.lemma_al2_report()
        assert lemma.relation("mu_1DD > mu_1DN").status is Status.VIOLATION
        assert lemma.relation("mu_2D > mu_2N").status is Status.INCONCLUSIVE
        assert lemma.status is Status.VIOLATION

    def test_unknown_relation(self, laminar_analyzer):
        """Test that an unknown relation name raises KeyError."""
        with pytest.raises(KeyError):
            laminar_analyzer.lemma_al2_report().relation("mu_9 > 0")


class TestBlochSweep:
    """Test cases for bloch_sweep."""

    def test_laminar_interlacing(self, laminar_analyzer):
        """Test the bracketing and the touching at tau*/2."""
        report = laminar_analyzer.bloch_sweep(tau_samples=3, j_max=4)
        assert np.allclose(report.taus, [0.25, 0.5, 0.75])
        assert report.interlacing
        assert report.touching
        assert all(tau == 0.5 for tau, _ in report.touching)
        assert report.zero_free
        assert not report.criterion_holds

    def test_subcritical_stokes(self, subcritical_stokes_analyzer):
        """Test interlacing and zero-free curves on a Stokes field where mu_1 < 0 < mu_2."""
        report = subcritical_stokes_analyzer.bloch_sweep(tau_samples=3, j_max=4)
        assert report.criterion_holds
        assert report.interlacing
        assert report.zero_free
        assert report.status is Status.PASS

    def test_frame(self, laminar_analyzer):
        """Test the tabular form of the curves."""
        frame = laminar_analyzer.bloch_sweep(tau_samples=[0.25], j_max=2).to_frame()
        assert list(frame.columns) == ["tau", "mu_1", "mu_2"]
        assert frame["mu_1"].iloc[0] == pytest.approx(0.0625 - 1.9150080105836**2, abs=0.05)


class TestDecomposition:
    """Test cases for multi_period_decomposition."""

    @pytest.mark.parametrize("m", [2, 3])
    def test_matches_bloch_union(self, coarse_analyzer, m):
        """Test that m-period spectra are unions of Bloch spectra."""
        report = coarse_analyzer.multi_period_decomposition(m)
        assert report.periodic_error <= 1e-8
        assert report.even_error <= 1e-8
        assert report.status is Status.PASS

    def test_invalid_m(self, coarse_analyzer):
        """Test that m must be positive."""
        with pytest.raises(ValueError, match="m must be positive"):
            coarse_analyzer.multi_period_decomposition(0)


class TestVerdict:
    """Test cases for uniqueness_verdict."""

    def test_two_pi_period(self, laminar_analyzer):
        """Test that the criterion fails with two negative even eigenvalues."""
        verdict = laminar_analyzer.uniqueness_verdict(decompose=False)
        assert not verdict.criterion_holds
        assert not verdict.subharmonic_excluded
        assert verdict.status is Status.PASS

    def test_subcritical(self, subcritical_analyzer):
        """Test the criterion and the exclusion below the bifurcation period."""
        verdict = subcritical_analyzer.uniqueness_verdict(decompose=False)
        assert verdict.mu_1 < 0 < verdict.mu_2
        assert verdict.criterion_holds
        assert verdict.subharmonic_excluded
        assert verdict.to_dict()["verdict"] == "excluded"

    def test_decomposed(self, coarse_analyzer):
        """Test the verdict together with the Bloch decomposition of the 3-period spectra."""
        verdict = coarse_analyzer.uniqueness_verdict()
        assert verdict.decomposition is not None
        assert verdict.decomposition.periodic_error <= 1e-8
        assert verdict.decomposition.even_error <= 1e-8
        assert not verdict.criterion_holds
        assert verdict.status is Status.PASS

    @pytest.mark.slow
    def test_subcritical_stokes(self, subcritical_stokes_analyzer):
        """Test that the 3-period even spectrum of a subcritical Stokes field avoids zero."""
        verdict = subcritical_stokes_analyzer.uniqueness_verdict()
        assert verdict.mu_1 < 0 < verdict.mu_2
        assert verdict.criterion_holds
        assert verdict.min_abs_multi > 1e-4
        assert verdict.subharmonic_excluded
        assert verdict.decomposition.periodic_error <= 1e-8
        assert verdict.decomposition.even_error <= 1e-8
        assert verdict.status is Status.PASS

    def test_even_m_rejected(self, laminar_analyzer):
        """Test that m_odd must be odd and at least 3."""
        with pytest.raises(ValueError, match="m_odd must be odd and at least 3"):
            laminar_analyzer.uniqueness_verdict(m_odd=2)
