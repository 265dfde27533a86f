"""Structural and numerical isospectrality of two nilmanifolds."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from clifford_rep.modules import ModuleSpec
from heat_trace.totals import TraceControls, heat_trace_series
from htype_algebra.algebra import PseudoHTypeAlgebra, build_algebra_from_spec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Structural:
    answer: str
    rule: str = ""

    def to_dict(self) -> dict:
        return {"answer": self.answer, "rule": self.rule}


def structural_isospectral(spec_a: ModuleSpec, spec_b: ModuleSpec) -> Structural:
    """Yes when the heat traces coincide by construction; never a structural No.

    The traces only depend on (r, s) up to swapping and on the module dimension.
    """
    sig_a, sig_b = spec_a.signature, spec_b.signature
    if spec_a.total_dim != spec_b.total_dim:
        return Structural("Unknown")
    if sig_a == sig_b:
        return Structural("Yes", "same signature, equal module dimension")
    if sig_a == sig_b.swapped():
        return Structural("Yes", "swapped signature, equal module dimension")
    return Structural("Unknown")


class Verdict(str, Enum):
    CERTIFIED = "Isospectral-certified-structurally"
    INDISTINGUISHABLE = "Numerically-indistinguishable"
    DISTINGUISHED = "Distinguished"


@dataclass(frozen=True)
class NumericRow:
    t: float
    difference: float
    combined_bound: float
    value_a: float
    value_b: float

    def distinguishes(self, tol: float) -> bool:
        return self.difference > self.combined_bound + tol * max(abs(self.value_a), abs(self.value_b))


@dataclass(frozen=True)
class IsospectralityReport:
    structural: Structural
    rows: Tuple[NumericRow, ...]
    verdict: Verdict
    tolerance: float
    witness: Optional[NumericRow] = None

    def to_dict(self) -> dict:
        payload = {
            "structural": self.structural.to_dict(),
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "numeric": [
                {"t": row.t, "difference": row.difference, "combined_bound": row.combined_bound}
                for row in self.rows
            ],
        }
        if self.witness is not None:
            payload["witness"] = {"t": self.witness.t, "gap": self.witness.difference}
        return payload


def numeric_isospectral(
    alg_a: PseudoHTypeAlgebra,
    alg_b: PseudoHTypeAlgebra,
    t_values: Sequence[float],
    tol: float = 1e-12,
    ctrl: Optional[TraceControls] = None,
    laplacian: bool = False,
) -> IsospectralityReport:
    """Compare total heat traces at each t against the certified tail bounds.

    ``tol`` is a relative allowance for rounding on top of the tail bounds.
    """
    ctrl = ctrl or TraceControls()
    series_a = heat_trace_series(alg_a, t_values, ctrl, laplacian=laplacian)
    series_b = heat_trace_series(alg_b, t_values, ctrl, laplacian=laplacian)
    rows = tuple(
        NumericRow(
            t=t,
            difference=float(abs(a - b)),
            combined_bound=float(bound_a + bound_b),
            value_a=float(a),
            value_b=float(b),
        )
        for t, a, bound_a, b, bound_b in zip(
            series_a.t_values, series_a.values, series_a.tail_bounds, series_b.values, series_b.tail_bounds
        )
    )
    witness = next((row for row in rows if row.distinguishes(tol)), None)
    verdict = Verdict.DISTINGUISHED if witness else Verdict.INDISTINGUISHABLE
    structural = structural_isospectral(alg_a.module.spec, alg_b.module.spec)
    return IsospectralityReport(structural, rows, verdict, tol, witness)


def compare_modules(
    spec_a: ModuleSpec,
    spec_b: ModuleSpec,
    t_values: Sequence[float],
    tol: float = 1e-12,
    ctrl: Optional[TraceControls] = None,
    laplacian: bool = False,
) -> IsospectralityReport:
    """numeric_isospectral on the algebras of two specs, upgraded to CERTIFIED when the structural rule applies."""
    report = numeric_isospectral(
        build_algebra_from_spec(spec_a), build_algebra_from_spec(spec_b), t_values, tol, ctrl, laplacian
    )
    if report.structural.answer != "Yes":
        return report
    if report.verdict is Verdict.DISTINGUISHED:
        logger.error(
            "Structurally isospectral %s and %s differ numerically at t=%s",
            spec_a.describe(), spec_b.describe(), report.witness.t,
        )
        return report
    return IsospectralityReport(report.structural, report.rows, Verdict.CERTIFIED, tol)
