"""Numerical probe of how fast two heat traces approach each other as t -> 0."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath

from common.errors import DomainError
from heat_trace.precision import Precision, numeric_context, unit_roundoff
from heat_trace.totals import TraceResult

logger = logging.getLogger(__name__)

TraceFunction = Callable[[float], TraceResult]


class ProbeVerdict(str, Enum):
    IDENTICAL = "Identical"
    SUPER_POLYNOMIAL = "SuperPolynomial"
    POLYNOMIAL = "Polynomial"
    GROWING_SLOPE = "GrowingSlope"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ProbeRow:
    t: float
    difference: float
    noise_floor: float
    # log-log slope to the previous (larger) t above the floor
    slope: Optional[float] = None

    @property
    def above_floor(self) -> bool:
        return self.difference > self.noise_floor


@dataclass(frozen=True)
class ProbeReport:
    rows: Tuple[ProbeRow, ...]
    verdict: ProbeVerdict
    min_slope: float
    diagnostics: List[str] = field(default_factory=list)

    @property
    def slopes(self) -> List[float]:
        return [row.slope for row in self.rows if row.slope is not None]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "min_slope": self.min_slope,
            "rows": [
                {"t": row.t, "D": row.difference, "slope": row.slope, "noise_floor": row.noise_floor}
                for row in self.rows
            ],
            "diagnostics": list(self.diagnostics),
        }


def _log_slope(row_a: ProbeRow, row_b: ProbeRow) -> float:
    return (math.log(row_a.difference) - math.log(row_b.difference)) / (math.log(row_a.t) - math.log(row_b.t))


def _verdict(slopes: Sequence[float], min_slope: float) -> ProbeVerdict:
    if min(slopes) >= min_slope:
        return ProbeVerdict.SUPER_POLYNOMIAL
    if max(slopes) - min(slopes) <= 1.0:
        return ProbeVerdict.POLYNOMIAL
    if slopes[-1] - slopes[0] > 1.0:
        return ProbeVerdict.GROWING_SLOPE
    return ProbeVerdict.INCONCLUSIVE


def _value_precision(value) -> Precision:
    return "extended" if isinstance(value, mpmath.mpf) else "double"


def _rounding(precision: Precision) -> float:
    with numeric_context(precision) as ctx:
        return 64 * float(unit_roundoff(ctx))


def expansion_difference_probe(
    trace_a: TraceFunction,
    trace_b: TraceFunction,
    t_values: Sequence[float],
    min_slope: float = 6.0,
    precision: Optional[Precision] = None,
) -> ProbeReport:
    """D(t) = |tr_A(t) - tr_B(t)| with local log-log slopes above the certified noise floor.

    The floor at each t is the sum of both tail bounds plus a rounding allowance
    for the coarser arithmetic of the two returned values (mpf values count as
    extended). ``precision`` caps that at "double" when the caller knows better.
    Only points with D above the floor take part in the verdict: a polynomially
    decaying D keeps a roughly constant slope, an O(t^inf) one needs slopes of at
    least ``min_slope`` (or slopes that keep growing as t decreases).
    """
    ordered = sorted((float(t) for t in t_values), reverse=True)
    if not ordered:
        raise DomainError("the probe needs at least one t value")
    if any(not 0 < t <= 0.5 for t in ordered):
        raise DomainError("probe t values must lie in (0, 0.5]")
    rows: List[ProbeRow] = []
    previous: Optional[ProbeRow] = None
    diagnostics: List[str] = []
    for t in ordered:
        a, b = trace_a(t), trace_b(t)
        used = {_value_precision(a.value), _value_precision(b.value), precision or "extended"}
        rounding = _rounding("double" if "double" in used else "extended")
        difference = float(mpmath.fabs(a.value - b.value))
        floor = float(a.tail_bound) + float(b.tail_bound) + rounding * (abs(float(a.value)) + abs(float(b.value)))
        row = ProbeRow(t, difference, floor)
        if row.above_floor and difference > 0:
            if previous is not None:
                row = ProbeRow(t, difference, floor, _log_slope(previous, row))
            previous = row
        else:
            diagnostics.append(f"t={t!r}: D={difference:.3e} at or below noise floor {floor:.3e}")
        rows.append(row)

    if all(row.difference == 0 for row in rows):
        return ProbeReport(tuple(rows), ProbeVerdict.IDENTICAL, min_slope, diagnostics)
    slopes = [row.slope for row in rows if row.slope is not None]
    if not slopes:
        diagnostics.append("fewer than two points above the noise floor")
        logger.info("Expansion probe inconclusive: %s", diagnostics[-1])
        return ProbeReport(tuple(rows), ProbeVerdict.INCONCLUSIVE, min_slope, diagnostics)
    verdict = _verdict(slopes, min_slope)
    logger.info("Expansion probe verdict %s over slopes %s", verdict.value, ["%.3g" % s for s in slopes])
    return ProbeReport(tuple(rows), verdict, min_slope, diagnostics)
