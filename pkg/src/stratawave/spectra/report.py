"""Result objects of the spectral analyses.

Each report is a frozen dataclass with a ``status`` and a ``to_dict`` used by
the JSON report writer. Relations between eigenvalues are itemized so that a
failed check names exactly which inequality broke.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from stratawave.eigensolve import EigenResult


class Status(Enum):
    """Outcome of a check."""

    PASS = "pass"
    VIOLATION = "violation"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "violation": 1, "inconclusive": 2}[self.value]

    @staticmethod
    def combine(statuses: List["Status"]) -> "Status":
        """Violation dominates inconclusive, which dominates pass."""
        if Status.VIOLATION in statuses:
            return Status.VIOLATION
        if Status.INCONCLUSIVE in statuses:
            return Status.INCONCLUSIVE
        return Status.PASS


@dataclass(frozen=True)
class Relation:
    """One checked equality or inequality between two numbers.

    Attributes:
        name: Human-readable relation, e.g. ``"mu_1D > mu_1N"``.
        lhs: Left value.
        rhs: Right value.
        kind: ``"eq"``, ``"gt"``, ``"ge"``, ``"lt"`` or ``"le"``.
        tolerance: Equality tolerance or strictness margin.
        status: Outcome; ``INCONCLUSIVE`` when a strict gap sits inside the
            noise floor.
        applicable: False when a precondition is not met; such relations never
            affect the overall status.
        note: Why the relation was skipped or softened.
    """

    name: str
    lhs: float
    rhs: float
    kind: str
    tolerance: float
    status: Status
    applicable: bool = True
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "kind": self.kind,
            "tolerance": self.tolerance,
            "status": self.status.value,
            "applicable": self.applicable,
            "note": self.note,
        }


def check_relation(
    name: str,
    lhs: float,
    rhs: float,
    kind: str,
    tolerance: float,
    applicable: bool = True,
    note: str = "",
    soft: bool = False,
) -> Relation:
    """Evaluate a relation with a tolerance.

    ``eq`` holds when |lhs - rhs| <= tolerance; ``gt``/``lt`` need a gap larger
    than ``tolerance``; ``ge``/``le`` allow ``tolerance`` of slack. With
    ``soft`` a strict relation whose gap lies within 10 tolerances but has the
    right sign is inconclusive instead of a violation.
    """
    lhs, rhs = float(lhs), float(rhs)
    gap = lhs - rhs
    sign = -1.0 if kind == "lt" else 1.0
    if kind == "eq":
        holds = abs(gap) <= tolerance
    elif kind == "gt":
        holds = gap > tolerance
    elif kind == "lt":
        holds = -gap > tolerance
    elif kind == "ge":
        holds = gap >= -tolerance
    elif kind == "le":
        holds = -gap >= -tolerance
    else:
        raise ValueError(f"unknown relation kind '{kind}'")

    if holds:
        status = Status.PASS
    elif soft and kind in ("gt", "lt") and 0.0 < sign * gap <= 10 * tolerance:
        status = Status.INCONCLUSIVE
        note = note or "gap within the noise floor"
    else:
        status = Status.VIOLATION
    return Relation(name, lhs, rhs, kind, float(tolerance), status, applicable, note)


def relations_status(relations: List[Relation]) -> Status:
    return Status.combine([r.status for r in relations if r.applicable])


@dataclass(frozen=True)
class CountComparison:
    """Negative counts of the mu and theta problems on one space."""

    n_mu: int
    n_theta: int
    stable: bool
    m: int
    mu: EigenResult = field(repr=False, compare=False)
    theta: EigenResult = field(repr=False, compare=False)

    @property
    def equal(self) -> bool:
        return self.n_mu == self.n_theta

    @property
    def status(self) -> Status:
        if not self.stable:
            return Status.INCONCLUSIVE
        return Status.PASS if self.equal else Status.VIOLATION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "n_mu": self.n_mu,
            "n_theta": self.n_theta,
            "equal": self.equal,
            "stable": self.stable,
            "mu": self.mu.eigenvalues[: self.n_mu + 3].tolist(),
            "theta": self.theta.eigenvalues[: self.n_theta + 3].tolist(),
            "status": self.status.value,
        }


@dataclass(frozen=True)
class PositivityReport:
    """Smallest eigenvalue of the form on functions vanishing on both boundaries."""

    lambda_min: float
    tol_zero: float
    m: int

    @property
    def positive(self) -> bool:
        return self.lambda_min > self.tol_zero

    @property
    def status(self) -> Status:
        if abs(self.lambda_min) <= self.tol_zero:
            return Status.INCONCLUSIVE
        return Status.PASS if self.positive else Status.VIOLATION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda_min": self.lambda_min,
            "positive": self.positive,
            "tol_zero": self.tol_zero,
            "m": self.m,
            "status": self.status.value,
        }


@dataclass(frozen=True)
class LemmaReport:
    """Orderings between the side-condition and half-domain spectra."""

    relations: List[Relation]
    named: Dict[str, float]
    kernel_correlation: Optional[float] = None
    caveats: List[str] = field(default_factory=list)

    @property
    def status(self) -> Status:
        return relations_status(self.relations)

    @property
    def failures(self) -> List[Relation]:
        return [r for r in self.relations if r.applicable and r.status is Status.VIOLATION]

    def relation(self, name: str) -> Relation:
        for rel in self.relations:
            if rel.name == name:
                return rel
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "named": self.named,
            "relations": [r.to_dict() for r in self.relations],
            "failures": [r.name for r in self.failures],
            "kernel_correlation": self.kernel_correlation,
            "caveats": self.caveats,
            "status": self.status.value,
        }


@dataclass(frozen=True)
class SweepReport:
    """Bloch eigenvalue curves sampled in tau with the nesting checks.

    Attributes:
        taus: Sampled Bloch parameters.
        curves: Eigenvalues, shape (len(taus), j_max).
        mu_N: Lowest j_max Neumann-sides eigenvalues.
        mu_D: Lowest j_max Dirichlet-sides eigenvalues.
        relations: Nesting and strictness relations per (tau, j).
        touching: (tau, j) pairs where a strict gap closes at tau = tau*/2.
        zero_free: Whether no curve comes within tol_zero of zero for tau != 0.
        criterion_holds: Whether mu_1 < 0 < mu_2 on the even space.
    """

    taus: np.ndarray = field(repr=False, compare=False)
    curves: np.ndarray = field(repr=False, compare=False)
    mu_N: np.ndarray = field(repr=False, compare=False)
    mu_D: np.ndarray = field(repr=False, compare=False)
    relations: List[Relation] = field(default_factory=list)
    touching: List[Tuple[float, int]] = field(default_factory=list)
    zero_free: bool = True
    criterion_holds: bool = False
    tau_star: float = 1.0

    @property
    def j_max(self) -> int:
        return self.curves.shape[1]

    @property
    def interlacing(self) -> bool:
        return all(
            r.status is Status.PASS for r in self.relations if r.applicable and r.kind != "eq"
        )

    @property
    def status(self) -> Status:
        statuses = [relations_status(self.relations)]
        if self.criterion_holds and not self.zero_free:
            statuses.append(Status.VIOLATION)
        return Status.combine(statuses)

    def to_frame(self) -> pd.DataFrame:
        """Curves as a table with columns tau, mu_1, ..., mu_jmax."""
        frame = pd.DataFrame(
            self.curves, columns=[f"mu_{j + 1}" for j in range(self.j_max)]
        )
        frame.insert(0, "tau", self.taus)
        return frame

    def to_dict(self) -> Dict[str, Any]:
        violations = [
            r.name for r in self.relations if r.applicable and r.status is Status.VIOLATION
        ]
        return {
            "tau_star": self.tau_star,
            "taus": self.taus.tolist(),
            "curves": self.curves.tolist(),
            "mu_N": self.mu_N.tolist(),
            "mu_D": self.mu_D.tolist(),
            "interlacing": "pass" if self.interlacing else "fail",
            "violations": violations,
            "touching": [list(t) for t in self.touching],
            "zero_free": self.zero_free,
            "criterion_holds": self.criterion_holds,
            "status": self.status.value,
        }


@dataclass(frozen=True)
class DecompositionReport:
    """Multi-period spectrum against the union of Bloch spectra."""

    m: int
    periodic: np.ndarray = field(repr=False, compare=False)
    periodic_union: np.ndarray = field(repr=False, compare=False)
    even: np.ndarray = field(repr=False, compare=False)
    even_union: np.ndarray = field(repr=False, compare=False)
    periodic_error: float = 0.0
    even_error: float = 0.0
    tolerance: float = 1e-8

    @property
    def status(self) -> Status:
        ok = self.periodic_error <= self.tolerance and self.even_error <= self.tolerance
        return Status.PASS if ok else Status.VIOLATION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "periodic_error": self.periodic_error,
            "even_error": self.even_error,
            "tolerance": self.tolerance,
            "periodic": self.periodic.tolist(),
            "even": self.even.tolist(),
            "status": self.status.value,
        }


@dataclass(frozen=True)
class VerdictReport:
    """Uniqueness criterion and the multi-period check."""

    mu_1: float
    mu_2: float
    tol_zero: float
    m: int
    min_abs_multi: float
    decomposition: Optional[DecompositionReport] = None
    caveats: List[str] = field(default_factory=list)

    @property
    def criterion_holds(self) -> bool:
        return self.mu_1 < -self.tol_zero and self.mu_2 > self.tol_zero

    @property
    def subharmonic_excluded(self) -> bool:
        return self.criterion_holds and self.min_abs_multi > self.tol_zero

    @property
    def status(self) -> Status:
        if abs(self.mu_2) <= self.tol_zero:
            return Status.INCONCLUSIVE
        statuses = [Status.PASS]
        if self.criterion_holds and not self.subharmonic_excluded:
            statuses.append(Status.VIOLATION)
        if self.decomposition is not None:
            statuses.append(self.decomposition.status)
        return Status.combine(statuses)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu_1": self.mu_1,
            "mu_2": self.mu_2,
            "tol_zero": self.tol_zero,
            "criterion_holds": self.criterion_holds,
            "m": self.m,
            "min_abs_multi": self.min_abs_multi,
            "subharmonic_excluded": self.subharmonic_excluded,
            "verdict": "excluded" if self.subharmonic_excluded else "not excluded",
            "decomposition": None if self.decomposition is None else self.decomposition.to_dict(),
            "caveats": self.caveats,
            "status": self.status.value,
        }


@dataclass(frozen=True)
class SpectrumReport:
    """All spectra of one field with named eigenvalues.

    Attributes:
        results: EigenResult per family key (``"periodic-even"``, ``"half-dd"``, ...).
        named: Named scalars, e.g. ``mu_1``, ``mu_2N``, ``mu_1DD``.
        trace: Family key and index behind every named scalar.
        sweep: Optional Bloch sweep.
        verdict: Optional uniqueness verdict.
        caveats: Laminar-field and tolerance caveats.
    """

    results: Dict[str, EigenResult] = field(repr=False, compare=False)
    named: Dict[str, float] = field(default_factory=dict)
    trace: Dict[str, Tuple[str, int]] = field(default_factory=dict)
    sweep: Optional[SweepReport] = None
    verdict: Optional[VerdictReport] = None
    caveats: List[str] = field(default_factory=list)

    @property
    def status(self) -> Status:
        statuses = [Status.PASS]
        if self.sweep is not None:
            statuses.append(self.sweep.status)
        if self.verdict is not None:
            statuses.append(self.verdict.status)
        return Status.combine(statuses)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spectra": {key: res.to_dict() for key, res in self.results.items()},
            "named": self.named,
            "trace": {name: list(src) for name, src in self.trace.items()},
            "sweep": None if self.sweep is None else self.sweep.to_dict(),
            "verdict": None if self.verdict is None else self.verdict.to_dict(),
            "caveats": self.caveats,
            "status": self.status.value,
        }
