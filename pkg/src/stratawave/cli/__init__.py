#!/usr/bin/env python3
"""Stratawave CLI - spectral checks of stratified steady water waves.

Usage:
    stratawave laminar    [options]
    stratawave stokes     [options]
    stratawave spectrum   [options] [--export-coo]
    stratawave al2        [options]
    stratawave sweep      [options] [--no-progress]
    stratawave pm23       [options]
    stratawave bloch-check [options]
    stratawave floquet    [options]
    stratawave verdict    [options]

Every command writes ``<out>/<command>.json`` and prints a summary. The exit
status is 0 when every asserted property holds, 1 on a violation, 2 when the
outcome is inconclusive and 3 when the run fails.

Examples:
    # Uniqueness criterion on the default laminar flow
    stratawave verdict

    # Bloch sweep on the small-amplitude Stokes wave
    stratawave sweep --background stokes --amplitude 0.01 --tau-samples 9
"""

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from stratawave.__version__ import __version__
from stratawave.assembly.problem import BoundaryCondition
from stratawave.config import SCHEMA_VERSION, RunConfig, build_background
from stratawave.errors import NoBifurcationError, StratawaveError, format_error
from stratawave.flow.laminar import bifurcation_tau
from stratawave.flow.residual import pde_residual
from stratawave.formats import CSVCurveHandler, JSONReportHandler
from stratawave.spectra import SpectralAnalyzer, Status

logger = logging.getLogger(__name__)

EXIT_ERROR = 3
# period multiple of the floquet Stokes field when neither tau nor period_scale is set
FLOQUET_PERIOD_SCALE = 0.9

Outcome = Tuple[Dict[str, Any], Status, List[str]]


def print_error(message: str):
    """Print an error message."""
    print(f"✗ {message}", file=sys.stderr)


def print_success(message: str):
    """Print a success message."""
    print(f"✓ {message}")


def print_info(message: str):
    """Print an info message."""
    print(f"ℹ {message}")


def write_report(
    config: RunConfig, command: str, results: Dict[str, Any], status: Status
) -> Path:
    """Write ``<out>/<command>.json`` with the resolved configuration."""
    report = {
        "schema_version": SCHEMA_VERSION,
        "stratawave_version": __version__,
        "command": command,
        "config": config.to_dict(),
        "results": results,
        "status": status.value,
    }
    target = Path(config.output.out_dir) / f"{command}.json"
    return JSONReportHandler().write(report, target)


def _analyzer(config: RunConfig, field, profiles) -> SpectralAnalyzer:
    opts = config.options
    return SpectralAnalyzer(
        field,
        profiles,
        tol_zero=opts.tol_zero,
        margin_floor=opts.margin_floor,
        kernel_tol=opts.kernel_tol,
        bloch_form=opts.bloch_form,
    )


def _with_background(config: RunConfig, background: str) -> RunConfig:
    if config.background == background:
        return config
    return replace(config, background=background)


def run_laminar(config: RunConfig) -> Outcome:
    """Solve the laminar flow and report residuals and the bifurcation wavenumber."""
    config = _with_background(config, "laminar")
    field, profiles, laminar = build_background(config)
    results: Dict[str, Any] = {
        "slope": laminar.slope,
        "R": laminar.params.R,
        "shooting_residual": laminar.residual,
        "unidirectional": laminar.monotone,
        "surface_sigma": laminar.surface_sigma(profiles),
        "Lambda": field.params.Lambda,
        "residuals": pde_residual(field, profiles).to_dict(),
    }
    lines = [
        f"Psi'(0) = {laminar.slope:.10g}, R = {laminar.params.R:.10g}",
        f"shooting residual {laminar.residual:.2e}",
    ]
    try:
        tau, _ = bifurcation_tau(laminar, profiles)
        results["bifurcation_tau"] = tau
        results["bifurcation_Lambda"] = 2.0 * math.pi / tau
        lines.append(f"bifurcation at tau = {tau:.10g} (Lambda = {2.0 * math.pi / tau:.6g})")
    except NoBifurcationError as e:
        results["bifurcation_tau"] = None
        lines.append(f"no bifurcation: {e.message}")
    status = Status.PASS if laminar.monotone else Status.VIOLATION
    if not laminar.monotone:
        lines.append("flow is not unidirectional (Psi' changes sign)")
    return results, status, lines


def run_stokes(config: RunConfig) -> Outcome:
    """Build the small-amplitude Stokes field and report its residuals."""
    config = _with_background(config, "stokes")
    field, profiles, laminar = build_background(config)
    residuals = pde_residual(field, profiles)
    speed = field.surface_speed()
    results = {
        "tau": laminar.tau,
        "Lambda": field.params.Lambda,
        "amplitude": config.amplitude,
        "residuals": residuals.to_dict(),
        "min_surface_speed": float(np.min(speed)),
        "surface_range": [float(np.min(field.xi)), float(np.max(field.xi))],
    }
    lines = [
        f"Stokes field at tau = {laminar.tau:.10g}, t = {config.amplitude}",
        f"residuals: interior {residuals.r_interior:.2e}, "
        f"Bernoulli {residuals.r_bernoulli:.2e}, kinematic {residuals.r_kinematic:.2e}",
    ]
    return results, Status.PASS, lines


def run_spectrum(config: RunConfig) -> Outcome:
    """Spectra of all real families with named eigenvalues."""
    field, profiles, _ = build_background(config)
    analyzer = _analyzer(config, field, profiles)
    report = analyzer.spectrum_report(config.options.j_max)
    results = report.to_dict()
    if config.output.export_coo:
        target = Path(config.output.out_dir) / "matrices"
        written: Dict[str, Any] = {}
        for bc in BoundaryCondition:
            if bc is BoundaryCondition.BLOCH:
                continue
            written[bc.value] = analyzer.problem(bc).export_coo(target)
        results["matrices"] = written
    named = report.named
    lines = [
        f"mu_1 = {named['mu_1']:.6g}, mu_2 = {named['mu_2']:.6g}",
        f"sides: mu_1N = {named['mu_1N']:.6g}, mu_1D = {named['mu_1D']:.6g}",
    ]
    lines.extend(report.caveats)
    return results, report.status, lines


def run_al2(config: RunConfig) -> Outcome:
    """Orderings of side and half-period spectra plus positivity of the clamped form."""
    field, profiles, _ = build_background(config)
    analyzer = _analyzer(config, field, profiles)
    lemma = analyzer.lemma_al2_report(config.options.j_max)
    positivity = analyzer.hform_positivity()
    status = Status.combine([lemma.status, positivity.status])
    results = {"lemma": lemma.to_dict(), "positivity": positivity.to_dict()}
    lines = [
        f"{len(lemma.relations)} relations checked, {len(lemma.failures)} failing",
        f"clamped form: lambda_min = {positivity.lambda_min:.6g}",
    ]
    lines.extend(f"failed: {r.name} ({r.lhs:.6g} vs {r.rhs:.6g})" for r in lemma.failures)
    lines.extend(lemma.caveats)
    return results, status, lines


def run_sweep(config: RunConfig, show_progress: bool = True) -> Outcome:
    """Bloch curves over tau with Dirichlet/Neumann bracketing; writes sweep.csv."""
    field, profiles, _ = build_background(config)
    analyzer = _analyzer(config, field, profiles)
    sweep = analyzer.bloch_sweep(
        config.options.tau_samples, config.options.j_max, show_progress=show_progress
    )
    csv_path = CSVCurveHandler().write(
        sweep.to_frame(), Path(config.output.out_dir) / "sweep.csv"
    )
    results = sweep.to_dict()
    results["csv"] = str(csv_path)
    lines = [
        f"{len(sweep.taus)} tau samples, {sweep.j_max} curves -> {csv_path}",
        f"interlacing: {'pass' if sweep.interlacing else 'fail'}, "
        f"{len(sweep.touching)} touching at tau*/2",
        f"criterion mu_1 < 0 < mu_2: {sweep.criterion_holds}, zero-free: {sweep.zero_free}",
    ]
    return results, sweep.status, lines


def _pm23_cases(tau_star: float) -> List[Tuple[str, Any, Any]]:
    return [
        ("a=1, b=1", 1.0, 1.0),
        ("a=1, b=2", 1.0, 2.0),
        ("a=1+0.1cos(tau* x), b=1", lambda x, y: 1.0 + 0.1 * np.cos(tau_star * x), 1.0),
    ]


def run_pm23(config: RunConfig) -> Outcome:
    """Negative counts of the mu and Steklov problems on one and m periods."""
    field, profiles, _ = build_background(config)
    analyzer = _analyzer(config, field, profiles)
    multiples = sorted({1, config.options.period_multiple})
    comparisons = []
    statuses = []
    lines = []
    for m in multiples:
        for label, a, b in _pm23_cases(analyzer.tau_star):
            comparison = analyzer.negative_count_compare(a_weight=a, b_weight=b, m=m)
            statuses.append(comparison.status)
            comparisons.append({"case": label, **comparison.to_dict()})
            lines.append(
                f"m={m} {label}: n_mu={comparison.n_mu}, n_theta={comparison.n_theta}"
                + ("" if comparison.stable else " (unstable)")
            )
    return {"comparisons": comparisons}, Status.combine(statuses), lines


def run_bloch_check(config: RunConfig) -> Outcome:
    """Transform identities on seeded random window functions, M = 0..bloch_window."""
    from stratawave.bloch import bloch_identities

    field, profiles, _ = build_background(config)
    rng = np.random.default_rng(config.options.seed)
    reports = []
    lines = []
    for M in range(config.options.bloch_window + 1):
        v = rng.standard_normal(((2 * M + 1) * field.Nx, field.Ny + 1))
        v[:, 0] = 0.0
        report = bloch_identities(v, M, field, profiles)
        reports.append(report)
        lines.append(
            f"M={M}: roundtrip {report.roundtrip_error:.1e}, norm {report.norm_error:.1e}, "
            f"commutation {report.commutation_A:.1e}/{report.commutation_B:.1e}"
        )
    status = Status.PASS if all(r.passed for r in reports) else Status.VIOLATION
    return {"windows": [r.to_dict() for r in reports]}, status, lines


def run_floquet(config: RunConfig) -> Outcome:
    """Jordan chain of the zero eigenvalue at amplitudes t and t/2."""
    from stratawave.floquet import chain_study

    config = _with_background(config, "stokes")
    if config.flow.tau is None and config.flow.period_scale is None:
        config = replace(config, flow=replace(config.flow, period_scale=FLOQUET_PERIOD_SCALE))
        logger.info(f"Expanding at period_scale={FLOQUET_PERIOD_SCALE} off the bifurcation")
    field, profiles, laminar = build_background(config)
    opts = config.options
    study = chain_study(
        laminar,
        profiles,
        field.tau,
        amplitudes=(config.amplitude, 0.5 * config.amplitude),
        Nx=config.grid.Nx,
        Ny=config.grid.Ny,
        tol=opts.lhs_tol,
        zero_tol=opts.u1_zero_tol,
        c=opts.curvature,
    )
    lines = [
        f"t={t:g}: LHS/t^2 = {c.normalized_lhs:.6e} ({c.verdict}), "
        f"mu_near_zero = {c.mu_near_zero:.3e}"
        for t, c in zip(study.amplitudes, study.chains)
    ]
    lines.append(f"sign stable in t: {study.sign_stable}")
    if opts.curvature is not None:
        lines.append(f"leading-order LHS for c={opts.curvature:g}: {study.chains[0].predicted:.6e}")
    return study.to_dict(), study.status, lines


def run_verdict(config: RunConfig) -> Outcome:
    """Uniqueness criterion mu_1 < 0 < mu_2 and the m-period even spectrum."""
    field, profiles, _ = build_background(config)
    analyzer = _analyzer(config, field, profiles)
    verdict = analyzer.uniqueness_verdict(config.options.period_multiple)
    lines = [
        f"mu_1 = {verdict.mu_1:.6g}, mu_2 = {verdict.mu_2:.6g}",
        f"criterion holds: {verdict.criterion_holds}",
        f"{verdict.m}-period even spectrum: min |mu| = {verdict.min_abs_multi:.3e}",
    ]
    if verdict.decomposition is not None:
        lines.append(
            f"Bloch decomposition error: periodic {verdict.decomposition.periodic_error:.1e}, "
            f"even {verdict.decomposition.even_error:.1e}"
        )
    lines.extend(verdict.caveats)
    return verdict.to_dict(), verdict.status, lines


COMMANDS: Dict[str, Callable[..., Outcome]] = {
    "laminar": run_laminar,
    "stokes": run_stokes,
    "spectrum": run_spectrum,
    "al2": run_al2,
    "sweep": run_sweep,
    "pm23": run_pm23,
    "bloch-check": run_bloch_check,
    "floquet": run_floquet,
    "verdict": run_verdict,
}


def cmd_run(args) -> int:
    """Handle any analysis command."""
    try:
        config = RunConfig.from_args(args)
        runner = COMMANDS[args.command]
        if args.command == "sweep":
            outcome = runner(config, show_progress=not args.no_progress)
        else:
            outcome = runner(config)
        results, status, lines = outcome
        path = write_report(config, args.command, results, status)
    except (StratawaveError, FileNotFoundError, ValueError, MemoryError) as e:
        print_error(f"{args.command} failed")
        print(format_error(e), file=sys.stderr)
        return EXIT_ERROR

    print()
    for line in lines:
        print(f"  {line}")
    print()
    if status is Status.PASS:
        print_success(f"{args.command}: pass")
    elif status is Status.VIOLATION:
        print_error(f"{args.command}: violation")
    else:
        print_info(f"{args.command}: inconclusive")
    print_info(f"Report: {path}")
    return status.exit_code


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("-o", "--out", help="Output directory (default: stratawave-out)")
    parser.add_argument("--grid", help="Grid size Nx,Ny (default: 48,24)")
    parser.add_argument("--background", choices=["laminar", "stokes"], help="Background field")
    parser.add_argument("--amplitude", type=float, help="Stokes amplitude t (default: 0.01)")
    parser.add_argument("--tau-samples", type=int, help="Number of Bloch samples (default: 9)")
    parser.add_argument(
        "--period-multiple", type=int, help="Number of periods m (default: 3)"
    )
    parser.add_argument("--j-max", type=int, help="Number of eigenvalue curves (default: 4)")
    parser.add_argument("--tol-zero", type=float, help="Relative zero tolerance (default: 1e-6)")
    parser.add_argument("--bloch-window", type=int, help="Largest window half-width M (default: 2)")
    parser.add_argument("--seed", type=int, help="Random seed (default: 1234)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="stratawave",
        description="""
Stratawave - spectral checks of stratified steady water waves.

Quick Start:
    stratawave laminar                       # Solve the laminar flow
    stratawave verdict                       # Uniqueness criterion
    stratawave sweep --background stokes     # Bloch curves and interlacing
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit status: 0 pass, 1 violation, 2 inconclusive, 3 failed run.
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    _add_common(common)
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    helps = {
        "laminar": "Solve the laminar flow and its residuals",
        "stokes": "Build the small-amplitude Stokes field",
        "spectrum": "Spectra of all function spaces",
        "al2": "Orderings of side and half-period spectra",
        "sweep": "Bloch eigenvalue curves over tau (writes sweep.csv)",
        "pm23": "Negative counts of the mu and Steklov problems",
        "bloch-check": "Bloch transform identities on random inputs",
        "floquet": "Jordan chain of the zero eigenvalue",
        "verdict": "Uniqueness criterion and multi-period check",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, parents=[common], help=text)
        if name == "spectrum":
            sub.add_argument(
                "--export-coo", action="store_true", help="Write assembled matrices"
            )
        if name == "sweep":
            sub.add_argument("--no-progress", action="store_true", help="Disable progress bar")
        if name == "floquet":
            sub.add_argument("--curvature", type=float, help="Branch curvature c for the LHS sign")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 0

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(name)s %(levelname)s: %(message)s")
        logging.getLogger("stratawave").setLevel(logging.DEBUG)

    return cmd_run(args)
