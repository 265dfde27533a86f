"""Explicit sub-Laplacian spectrum for s = 0.

Two series make up the spectrum:

* lambda_l = 2 pi^2 |l|^2 for l in Z^{2N}, multiplicity #{l : |l|^2 = q};
* beta = 4 pi |m| (2k + N) for m in Z^r \\ {0}, k >= 0, each (m, k) contributing
  4^N |m|^N C(k+N-1, N-1).

Beta eigenvalues are keyed by the integer K = |m|^2 (2k+N)^2, so equal
eigenvalues coming from different (m, k) are merged exactly.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Tuple, Union

from common.errors import DomainError, SignatureError
from heat_trace.components import SpectralProfile, check_time
from heat_trace.lattice_sums import norm_counts
from heat_trace.totals import TraceControls, TraceResult, total_trace

logger = logging.getLogger(__name__)

Series = Literal["lambda", "beta"]


@dataclass(frozen=True)
class SurdMultiplicity:
    """coefficient * sqrt(radicand), kept exact when it is not an integer."""

    coefficient: Fraction
    radicand: int

    def __float__(self) -> float:
        return float(self.coefficient) * math.sqrt(self.radicand)

    def __str__(self):
        return f"{self.coefficient}*sqrt({self.radicand})"


Multiplicity = Union[int, SurdMultiplicity]


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    multiplicity: Multiplicity
    series: Series
    # q for the lambda series, K = |m|^2 (2k+N)^2 for the beta series
    key: int


@dataclass(frozen=True)
class SpectrumTable:
    entries: Tuple[SpectrumEntry, ...]
    cutoff: float
    profile: Optional[SpectralProfile] = None

    def __post_init__(self):
        values = [entry.eigenvalue for entry in self.entries]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("spectrum entries must have strictly increasing eigenvalues")

    def pairs(self):
        return [(entry.eigenvalue, entry.multiplicity) for entry in self.entries]


def _beta_multiplicity(contributions) -> Multiplicity:
    """Sum of 4^N Q^(N/2) C(k+N-1, N-1) count(Q) over (Q, j) with fixed K = Q j^2.

    Q^(N/2) = Q^((N-1)/2) sqrt(K) / j for odd N, so the sum is rational * sqrt(K).
    """
    integral = 0
    surd = Fraction(0)
    radicand = None
    for q, j, count, n, binomial in contributions:
        weight = count * 4 ** n * binomial
        if n % 2 == 0:
            integral += weight * q ** (n // 2)
            continue
        root = math.isqrt(q)
        if root * root == q:
            integral += weight * root ** n
        else:
            radicand = q * j * j
            surd += Fraction(weight * q ** ((n - 1) // 2), j)
    if not surd:
        return integral
    root = math.isqrt(radicand)
    if root * root == radicand:
        total = surd * root + integral
        if total.denominator == 1:
            return int(total)
    if integral:
        raise DomainError("mixed integral and surd multiplicities at one eigenvalue")
    return SurdMultiplicity(surd, radicand)


def spectrum_s0(alg, cutoff: float) -> SpectrumTable:
    """All sub-Laplacian eigenvalues <= cutoff with exact multiplicities (s = 0 only)."""
    profile = SpectralProfile.of(alg)
    if profile.s != 0:
        raise SignatureError(f"explicit spectra exist only for s = 0, got s = {profile.s}")
    if not cutoff > 0:
        raise DomainError("spectrum cutoff must be positive")
    n = profile.half_dim
    entries = []

    q_max = int(math.floor(cutoff / (2 * math.pi ** 2)))
    for q, count in enumerate(norm_counts(2 * n, q_max)):
        eigenvalue = 2 * math.pi ** 2 * q
        if count and eigenvalue <= cutoff:
            entries.append(SpectrumEntry(eigenvalue, count, "lambda", q))

    key_max = int(math.floor((cutoff / (4 * math.pi)) ** 2)) + 1
    q_counts = norm_counts(profile.r, max(key_max // (n * n), 0))
    grouped = {}
    for q in range(1, len(q_counts)):
        if not q_counts[q]:
            continue
        k = 0
        while q * (n + 2 * k) ** 2 <= key_max:
            j = n + 2 * k
            binomial = math.comb(k + n - 1, n - 1)
            grouped.setdefault(q * j * j, []).append((q, j, q_counts[q], n, binomial))
            k += 1
    for key in sorted(grouped):
        eigenvalue = 4 * math.pi * math.sqrt(key)
        if eigenvalue <= cutoff:
            entries.append(SpectrumEntry(eigenvalue, _beta_multiplicity(grouped[key]), "beta", key))

    entries.sort(key=lambda entry: entry.eigenvalue)
    logger.debug("s=0 spectrum up to %s: %d distinct eigenvalues", cutoff, len(entries))
    return SpectrumTable(tuple(entries), float(cutoff), profile)


def trace_from_spectrum(table: SpectrumTable, t, ctrl: Optional[TraceControls] = None) -> TraceResult:
    """sum mult e^{-t lambda} over the table, plus a bound for eigenvalues above the cutoff.

    Beyond the cutoff e^{-t lambda} <= e^{-t cutoff / 2} e^{-t lambda / 2}, so the tail is at
    most e^{-t cutoff / 2} times the full heat trace at t / 2.
    """
    check_time(t)
    value = math.fsum([float(entry.multiplicity) * math.exp(-t * entry.eigenvalue) for entry in table.entries])
    if math.isinf(table.cutoff):
        return TraceResult(value, 0.0)
    if table.profile is None:
        return TraceResult(value, math.inf)
    half = total_trace(table.profile, t / 2, ctrl or TraceControls(tail_tolerance=1e-6))
    return TraceResult(value, math.exp(-t * table.cutoff / 2) * (float(half.value) + float(half.tail_bound)))


def recover_module_dimension(table: SpectrumTable, rel_tol: float = 1e-9) -> int:
    """dim V = 2N read off an s = 0 spectrum from the eigenvalue 2 pi^2.

    An eigenvalue belongs to the lambda series when lambda^2 / pi^4 is an integer;
    the lattice count at 2 pi^2 is 4N.
    """
    target = 2 * math.pi ** 2
    for entry in table.entries:
        scaled = entry.eigenvalue ** 2 / math.pi ** 4
        if abs(scaled - round(scaled)) > rel_tol * max(scaled, 1):
            continue
        if math.isclose(entry.eigenvalue, target, rel_tol=rel_tol):
            multiplicity = entry.multiplicity
            if not isinstance(multiplicity, int) or multiplicity % 2:
                raise DomainError(f"unexpected multiplicity {multiplicity} at 2 pi^2")
            return multiplicity // 2
    raise DomainError("the spectrum does not reach 2 pi^2; raise the cutoff")
