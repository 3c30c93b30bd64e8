"""Spectral analysis of a background field.

:class:`SpectralAnalyzer` assembles the quadratic form on each function
space once, solves the generalized eigenproblems and checks the relations
between them:

- the even-periodic spectrum mu_1 <= mu_2 <= ... and the uniqueness
  criterion mu_1 < 0 < mu_2,
- Dirichlet/Neumann side spectra and the four half-domain families,
- Steklov problems and their negative counts,
- Bloch curves in tau with their Dirichlet/Neumann bracketing,
- the multi-period spectrum against the union of Bloch spectra.
"""

import logging
import math
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from stratawave.assembly.forms import Weight
from stratawave.assembly.mesh import Mesh, build_mesh
from stratawave.assembly.problem import BoundaryCondition, SpectralProblem, assemble
from stratawave.eigensolve import (
    DEFAULT_RELATIVE_TOL,
    EigenResult,
    condense_to_surface,
    default_tol_zero,
    solve_gen,
)
from stratawave.flow.field import WaveField
from stratawave.flow.profiles import FluidProfiles
from stratawave.linearize.coefficients import coefficients
from stratawave.linearize.operators import psi_x
from stratawave.spectra.report import (
    CountComparison,
    DecompositionReport,
    LemmaReport,
    PositivityReport,
    Relation,
    SpectrumReport,
    SweepReport,
    VerdictReport,
    check_relation,
)
from stratawave.utils import correlation, multiset_distance

logger = logging.getLogger(__name__)

BC = BoundaryCondition
# family key -> suffix of the named eigenvalues
FAMILIES = {
    BC.PERIODIC_EVEN: "",
    BC.PERIODIC_FULL: "P",
    BC.NEUMANN_SIDES: "N",
    BC.DIRICHLET_SIDES: "D",
    BC.HALF_DD: "DD",
    BC.HALF_DN: "DN",
    BC.HALF_ND: "ND",
    BC.HALF_NN: "NN",
}
LAMINAR_CAVEAT = (
    "field is laminar: psi_x vanishes, so the kernel clauses (mu_2D = 0, "
    "mu_3D > 0, mu_2NN > 0) are reported but not asserted"
)
EQUALITY_RTOL = 1e-8


class SpectralAnalyzer:
    """Assemble and solve the spectral problems of one field.

    Args:
        field: Background field.
        profiles: Profiles of the flow.
        tol_zero: Relative zero tolerance; the absolute threshold of a pencil
            (A, B) is ``tol_zero * ||A||_F / ||B||_F``.
        margin_floor: Smallest strictness margin.
        kernel_tol: Allowed size of the discrete psi_x eigenvalue.
        spectral: Use FFT x-derivatives for the coefficients.
        bloch_form: ``"quasiperiodic"`` or ``"shifted"`` Bloch spaces.

    Example:
        >>> analyzer = SpectralAnalyzer(field, profiles)
        >>> analyzer.mu_spectrum("periodic-even", k=2).eigenvalues
        array([-3.66..., -2.66...])
    """

    def __init__(
        self,
        field: WaveField,
        profiles: FluidProfiles,
        tol_zero: float = DEFAULT_RELATIVE_TOL,
        margin_floor: float = 1e-8,
        kernel_tol: float = 5e-2,
        spectral: bool = False,
        bloch_form: str = "quasiperiodic",
    ):
        self.field = field
        self.profiles = profiles
        self.tol_zero = tol_zero
        self.margin_floor = margin_floor
        self.kernel_tol = kernel_tol
        self.bloch_form = bloch_form
        self.coeffs = coefficients(field, profiles, spectral=spectral)
        self._meshes: Dict[int, Mesh] = {}
        self._problems: Dict[tuple, SpectralProblem] = {}
        logger.debug(
            f"SpectralAnalyzer on {field.Nx}x{field.Ny} grid, laminar={field.is_laminar}"
        )

    @property
    def tau_star(self) -> float:
        return self.field.params.tau_star

    @property
    def caveats(self) -> List[str]:
        return [LAMINAR_CAVEAT] if self.field.is_laminar else []

    def mesh(self, m: int = 1) -> Mesh:
        if m not in self._meshes:
            self._meshes[m] = build_mesh(self.field, m=m)
        return self._meshes[m]

    def problem(
        self,
        bc: Union[BoundaryCondition, str],
        m: int = 1,
        tau: float = 0.0,
        vol_weight: Weight = 1.0,
        surf_weight: Weight = 1.0,
        clamp_surface: bool = False,
        surface_sign: str = "form",
    ) -> SpectralProblem:
        """Assembled problem, cached when both weights are constants."""
        bc = BoundaryCondition(bc)
        cacheable = isinstance(vol_weight, (int, float)) and isinstance(surf_weight, (int, float))
        key = (bc, m, float(tau), vol_weight, surf_weight, clamp_surface, surface_sign)
        if cacheable and key in self._problems:
            return self._problems[key]
        problem = assemble(
            self.mesh(m),
            self.coeffs,
            bc,
            vol_weight=vol_weight,
            surf_weight=surf_weight,
            tau=tau,
            surface_sign=surface_sign,
            bloch_form=self.bloch_form,
            clamp_surface=clamp_surface,
        )
        if cacheable:
            self._problems[key] = problem
        return problem

    def _tol(self, A: np.ndarray, B: np.ndarray) -> float:
        return default_tol_zero(A, B, relative=self.tol_zero)

    def _margin(self, *results: EigenResult) -> float:
        residual = max((r.max_residual for r in results), default=0.0)
        return max(10.0 * residual, self.margin_floor)

    def mu_spectrum(
        self,
        bc: Union[BoundaryCondition, str] = BC.PERIODIC_EVEN,
        m: int = 1,
        k: Optional[int] = None,
        weight: Weight = 1.0,
        tau: float = 0.0,
    ) -> EigenResult:
        """Eigenvalues mu of a(u, v) = mu (a_w u, v) on one space.

        Args:
            bc: Boundary-condition family.
            m: Number of periods.
            k: Number of lowest eigenvalues, all when None.
            weight: Volume weight of the mass form.
            tau: Bloch parameter (``bloch`` only).

        Returns:
            Lowest eigenpairs.
        """
        problem = self.problem(bc, m=m, tau=tau, vol_weight=weight)
        result = solve_gen(
            problem.A, problem.M_vol, k=k, tol_zero=self._tol(problem.A, problem.M_vol)
        )
        logger.debug(
            f"mu spectrum {problem.bc.value} m={m} tau={problem.tau:.4g}: "
            f"{result.eigenvalues[:4]}"
        )
        return result

    def steklov_spectrum(
        self,
        b: Weight = 1.0,
        m: int = 1,
        k: Optional[int] = None,
        bc: Union[BoundaryCondition, str] = BC.PERIODIC_EVEN,
        surface_sign: str = "form",
    ) -> EigenResult:
        """Eigenvalues theta of a(u, v) = theta s_b(u, v) with the surface mass.

        The interior dofs are eliminated by static condensation; returned
        eigenvectors cover all dofs.

        Args:
            b: Surface weight b > 0.
            m: Number of periods.
            k: Number of lowest eigenvalues, all when None.
            bc: Boundary-condition family.
            surface_sign: ``"form"`` or ``"raw"`` (theta_raw = -theta).
        """
        problem = self.problem(bc, m=m, surf_weight=b, surface_sign=surface_sign)
        surface = problem.surface_dofs
        M_ss = problem.M_surf[np.ix_(surface, surface)]
        A_ss = problem.A[np.ix_(surface, surface)]
        if surface_sign == "raw":
            # the raw pencil has a negative definite surface mass
            result = condense_to_surface(
                problem.A, -problem.M_surf, surface, k=None, tol_zero=self._tol(A_ss, M_ss)
            )
            return _negate(result, k)
        return condense_to_surface(
            problem.A, problem.M_surf, surface, k=k, tol_zero=self._tol(A_ss, M_ss)
        )

    def negative_count_compare(
        self,
        a_weight: Weight = 1.0,
        b_weight: Weight = 1.0,
        m: int = 1,
        bc: Union[BoundaryCondition, str] = BC.PERIODIC_EVEN,
    ) -> CountComparison:
        """Compare the negative counts of the mu and theta problems.

        Both counts use one shared absolute threshold, the larger of the two
        pencils' scaled tolerances. A count that changes when the threshold is
        halved makes the comparison inconclusive.
        """
        mu = self.mu_spectrum(bc, m=m, weight=a_weight)
        theta = self.steklov_spectrum(b=b_weight, m=m, bc=bc)
        shared = max(mu.tol_zero, theta.tol_zero)
        counts = []
        for tol in (shared, 0.5 * shared):
            counts.append(
                (
                    int(np.count_nonzero(mu.eigenvalues < -tol)),
                    int(np.count_nonzero(theta.eigenvalues < -tol)),
                )
            )
        stable = counts[0] == counts[1]
        if not stable:
            logger.warning(f"Negative counts change under tolerance halving: {counts}")
        return CountComparison(
            n_mu=counts[0][0], n_theta=counts[0][1], stable=stable, m=m, mu=mu, theta=theta
        )

    def hform_positivity(self, m: int = 1) -> PositivityReport:
        """Smallest eigenvalue of a(u, u) / (u, u) on functions vanishing on both boundaries."""
        problem = self.problem(BC.PERIODIC_FULL, m=m, clamp_surface=True)
        result = solve_gen(
            problem.A, problem.M_vol, k=1, tol_zero=self._tol(problem.A, problem.M_vol)
        )
        return PositivityReport(
            lambda_min=float(result.eigenvalues[0]), tol_zero=result.tol_zero, m=m
        )

    def spectrum_report(self, j_max: int = 4) -> SpectrumReport:
        """Spectra of every real family with named eigenvalues.

        Names follow the family suffix: ``mu_1``, ``mu_2`` (even periodic),
        ``mu_jP`` (periodic), ``mu_jN``, ``mu_jD`` (sides) and ``mu_jDD``,
        ``mu_jDN``, ``mu_jND``, ``mu_jNN`` (half period).
        """
        count = max(j_max, 3)
        results: Dict[str, EigenResult] = {}
        named: Dict[str, float] = {}
        trace: Dict[str, Tuple[str, int]] = {}
        for bc, suffix in FAMILIES.items():
            result = self.mu_spectrum(bc, k=count)
            results[bc.value] = result
            for j, value in enumerate(result.eigenvalues[:count]):
                name = f"mu_{j + 1}{suffix}"
                named[name] = float(value)
                trace[name] = (bc.value, j)
        return SpectrumReport(results=results, named=named, trace=trace, caveats=self.caveats)

    def lemma_al2_report(self, j_max: int = 4) -> LemmaReport:
        """Check the orderings between side, half-domain and periodic spectra.

        Equalities hold to ``1e-8`` relative; strict inequalities need a gap
        above the margin ``max(10 * residual, margin_floor)``. The clause
        mu_2D > mu_2N is softened to inconclusive inside the noise floor.
        """
        report = self.spectrum_report(j_max)
        mu = report.named
        margin = self._margin(*report.results.values())
        genuine = not self.field.is_laminar
        caveat_note = "" if genuine else "laminar field"

        def eq(name, a, b):
            scale = max(1.0, abs(mu[a]), abs(mu[b]))
            return check_relation(name, mu[a], mu[b], "eq", EQUALITY_RTOL * scale)

        relations: List[Relation] = [
            check_relation("mu_1D < 0", mu["mu_1D"], 0.0, "lt", margin),
            check_relation("mu_1D > mu_1N", mu["mu_1D"], mu["mu_1N"], "gt", margin),
            eq("mu_1N = mu_1", "mu_1N", "mu_1"),
            check_relation(
                "mu_2D = 0",
                mu["mu_2D"],
                0.0,
                "eq",
                self.kernel_tol,
                applicable=genuine,
                note=caveat_note,
            ),
            check_relation("mu_2D > mu_2N", mu["mu_2D"], mu["mu_2N"], "gt", margin, soft=True),
            eq("mu_3N = mu_2", "mu_3N", "mu_2"),
            check_relation(
                "mu_3D > 0", mu["mu_3D"], 0.0, "gt", margin, applicable=genuine, note=caveat_note
            ),
            eq("mu_1D = mu_1ND", "mu_1D", "mu_1ND"),
            eq("mu_1N = mu_1NN", "mu_1N", "mu_1NN"),
            eq("mu_1NN = mu_1", "mu_1NN", "mu_1"),
            check_relation("mu_1 < 0", mu["mu_1"], 0.0, "lt", margin),
            eq("mu_2D = mu_1DD", "mu_2D", "mu_1DD"),
            eq("mu_2NN = mu_2", "mu_2NN", "mu_2"),
            check_relation(
                "mu_2NN > 0",
                mu["mu_2NN"],
                0.0,
                "gt",
                margin,
                applicable=genuine,
                note=caveat_note,
            ),
        ]
        for j in range(1, j_max + 1):
            dd, dn, nd, nn = (mu[f"mu_{j}{s}"] for s in ("DD", "DN", "ND", "NN"))
            relations += [
                check_relation(f"mu_{j}DD > mu_{j}DN", dd, dn, "gt", margin),
                check_relation(f"mu_{j}DN > mu_{j}NN", dn, nn, "gt", margin),
                check_relation(f"mu_{j}DD > mu_{j}ND", dd, nd, "gt", margin),
                check_relation(f"mu_{j}ND > mu_{j}NN", nd, nn, "gt", margin),
                check_relation(f"mu_{j}N <= mu_{j}D", mu[f"mu_{j}N"], mu[f"mu_{j}D"], "le", margin),
            ]

        kernel = None
        if genuine:
            kernel = self._kernel_correlation(report.results[BC.DIRICHLET_SIDES.value])
        result = LemmaReport(
            relations=relations, named=mu, kernel_correlation=kernel, caveats=report.caveats
        )
        for failure in result.failures:
            logger.warning(
                f"Relation violated: {failure.name} ({failure.lhs:.6g} vs {failure.rhs:.6g})"
            )
        return result

    def _kernel_correlation(self, dirichlet: EigenResult) -> float:
        """Correlation of the second Dirichlet-sides eigenvector with psi_x."""
        problem = self.problem(BC.DIRICHLET_SIDES)
        mode = problem.lift(dirichlet.eigenvectors[:, 1])
        kernel = problem.mesh.nodal(psi_x(self.field))
        kernel[:, 0] = 0.0
        return correlation(mode, kernel)

    def bloch_sweep(
        self,
        tau_samples: Union[int, Iterable[float]] = 9,
        j_max: int = 4,
        show_progress: bool = False,
    ) -> SweepReport:
        """Bloch eigenvalues on a tau grid with the side-condition bracketing.

        At every tau the weak nesting mu_jN <= mu_hat_j(tau) <= mu_jD is
        checked. Strict gaps are required for tau != tau*/2; at tau*/2 the
        antiperiodic space splits into the ND and DN half families, so gaps
        that close there are recorded as touching.

        Args:
            tau_samples: Number n of samples i tau* / (n + 1), or explicit taus
                in (0, tau*).
            j_max: Number of curves.
            show_progress: Show a progress bar (requires tqdm).
        """
        tau_star = self.tau_star
        if isinstance(tau_samples, int):
            taus = tau_star * np.arange(1, tau_samples + 1) / (tau_samples + 1)
        else:
            taus = np.asarray(list(tau_samples), dtype=float)

        mu_N = self.mu_spectrum(BC.NEUMANN_SIDES, k=j_max)
        mu_D = self.mu_spectrum(BC.DIRICHLET_SIDES, k=j_max)
        even = self.mu_spectrum(BC.PERIODIC_EVEN, k=2)
        criterion = bool(
            even.eigenvalues[0] < -even.tol_zero and even.eigenvalues[1] > even.tol_zero
        )

        iterator: Iterable[float] = taus
        if show_progress:
            try:
                from tqdm import tqdm

                iterator = tqdm(taus, desc="Bloch sweep", unit="tau", ncols=80)
            except ImportError:
                logger.warning(
                    "tqdm not installed, progress bar disabled. Install with: pip install tqdm"
                )

        curves = np.empty((taus.size, j_max))
        relations: List[Relation] = []
        touching: List[Tuple[float, int]] = []
        zero_free = True
        for i, tau in enumerate(iterator):
            result = self.mu_spectrum(BC.BLOCH, k=j_max, tau=tau)
            curves[i] = result.eigenvalues[:j_max]
            margin = self._margin(result, mu_N, mu_D)
            midpoint = math.isclose(tau, 0.5 * tau_star, rel_tol=1e-12)
            for j in range(j_max):
                low, high, value = mu_N.eigenvalues[j], mu_D.eigenvalues[j], curves[i, j]
                label = f"mu_hat_{j + 1}({tau:.6g})"
                lower_kind, upper_kind = ("ge", "le") if midpoint else ("gt", "lt")
                relations.append(
                    check_relation(f"{label} > mu_{j + 1}N", value, low, lower_kind, margin)
                )
                relations.append(
                    check_relation(f"{label} < mu_{j + 1}D", value, high, upper_kind, margin)
                )
                if midpoint and min(value - low, high - value) <= margin:
                    touching.append((float(tau), j + 1))
            if tau % tau_star != 0.0 and np.any(np.abs(curves[i]) <= result.tol_zero):
                zero_free = False

        report = SweepReport(
            taus=taus,
            curves=curves,
            mu_N=mu_N.eigenvalues[:j_max],
            mu_D=mu_D.eigenvalues[:j_max],
            relations=relations,
            touching=touching,
            zero_free=zero_free,
            criterion_holds=criterion,
            tau_star=tau_star,
        )
        logger.info(
            f"Bloch sweep over {taus.size} samples: interlacing "
            f"{'pass' if report.interlacing else 'fail'}, {len(touching)} touching"
        )
        return report

    def multi_period_decomposition(
        self, m: int = 3, k: Optional[int] = None
    ) -> DecompositionReport:
        """Compare m-period spectra with unions of Bloch spectra.

        The periodic spectrum over m periods equals the union of the Bloch
        spectra at tau = s tau*/m, s = 0..m-1. Its even part pairs tau with
        -tau: the union of the even spectrum, the Bloch spectra for
        0 < s < m/2 and, for even m, the ND half family at tau*/2.
        """
        if m < 1:
            raise ValueError(f"m must be positive, got {m}")
        count = k if k is not None else 4 * m
        taus = [s * self.tau_star / m for s in range(m)]

        periodic = self.mu_spectrum(BC.PERIODIC_FULL, m=m, k=count).eigenvalues
        union = np.concatenate(
            [self.mu_spectrum(BC.BLOCH, k=count, tau=tau).eigenvalues for tau in taus]
        )
        periodic_union = np.sort(union)[:count]

        even = self.mu_spectrum(BC.PERIODIC_EVEN, m=m, k=count).eigenvalues
        parts = [self.mu_spectrum(BC.PERIODIC_EVEN, k=count).eigenvalues]
        for s in range(1, (m + 1) // 2):
            parts.append(self.mu_spectrum(BC.BLOCH, k=count, tau=taus[s]).eigenvalues)
        if m % 2 == 0:
            parts.append(self.mu_spectrum(BC.HALF_ND, k=count).eigenvalues)
        even_union = np.sort(np.concatenate(parts))[:count]

        report = DecompositionReport(
            m=m,
            periodic=periodic,
            periodic_union=periodic_union,
            even=even,
            even_union=even_union,
            periodic_error=multiset_distance(periodic, periodic_union),
            even_error=multiset_distance(even, even_union),
        )
        logger.debug(
            f"Decomposition m={m}: periodic error {report.periodic_error:.2e}, "
            f"even error {report.even_error:.2e}"
        )
        return report

    def uniqueness_verdict(self, m_odd: int = 3, decompose: bool = True) -> VerdictReport:
        """Uniqueness criterion mu_1 < 0 < mu_2 and the m-period even spectrum.

        When the criterion holds, the even spectrum over ``m_odd`` periods must
        stay away from zero: no m-periodic even solutions bifurcate nearby.

        Args:
            m_odd: Odd number of periods, at least 3.
            decompose: Also compare with the Bloch decomposition.
        """
        if m_odd < 3 or m_odd % 2 == 0:
            raise ValueError(f"m_odd must be odd and at least 3, got {m_odd}")
        even = self.mu_spectrum(BC.PERIODIC_EVEN, k=2)
        multi = self.mu_spectrum(BC.PERIODIC_EVEN, m=m_odd)
        decomposition = self.multi_period_decomposition(m_odd) if decompose else None
        verdict = VerdictReport(
            mu_1=float(even.eigenvalues[0]),
            mu_2=float(even.eigenvalues[1]),
            tol_zero=even.tol_zero,
            m=m_odd,
            min_abs_multi=float(np.min(np.abs(multi.eigenvalues))),
            decomposition=decomposition,
            caveats=self.caveats,
        )
        if verdict.status.value == "inconclusive":
            logger.warning(f"|mu_2| = {abs(verdict.mu_2):.3e} is within tol_zero: near bifurcation")
        return verdict


def _negate(result: EigenResult, k: Optional[int]) -> EigenResult:
    """Eigenpairs of the pencil with negated right-hand side, sorted ascending."""
    order = np.argsort(-result.eigenvalues)
    if k is not None:
        order = order[:k]
    return EigenResult(
        eigenvalues=-result.eigenvalues[order],
        eigenvectors=result.eigenvectors[:, order],
        residuals=result.residuals[order],
        tol_zero=result.tol_zero,
        a_norm=result.a_norm,
    )
