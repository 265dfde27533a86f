"""The leading coefficient c_M of the small-time heat trace, tr(e^{-t D}) ~ c_M t^{-(N+d)}.

c_M = Vol(M) (2 pi)^{-(N+d)} int_{R^d} W. For s = 0 the integral has a closed
form through the multiple Hurwitz zeta function

    c_M (2 pi)^{N+d} 2^{d-1} / Gamma(N+d) = Vol(M) pi^{d/2} / Gamma(d/2) zeta_N(N+d, N/2).
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Literal, Optional, Tuple

import mpmath
import sympy

from asymptotics.volume import volume_integral
from common import config
from common.errors import DomainError
from heat_trace.components import SpectralProfile

logger = logging.getLogger(__name__)

Method = Literal["quadrature", "zeta_closed_form"]

# Vol(M) for the standard lattice: 1 as stated for these nilmanifolds, or the
# Lebesgue volume of the fundamental domain (half-integer center spacing).
VOLUME_CONVENTIONS = {
    "unit": lambda d: 1.0,
    "lebesgue": lambda d: 2.0 ** -d,
}

CONVENTION_ALIASES = {"paper": "unit"}


def canonical_convention(convention: str) -> str:
    name = CONVENTION_ALIASES.get(convention, convention)
    if name not in VOLUME_CONVENTIONS:
        raise ValueError(f"unknown volume convention {convention!r}")
    return name


def convention_volume(convention: str, d: int) -> float:
    return VOLUME_CONVENTIONS[canonical_convention(convention)](d)


@dataclass(frozen=True)
class LeadingCoefficient:
    value: float
    method: Method
    error_estimate: float
    convention: str
    volume: float

    def __post_init__(self):
        if not self.value > 0:
            raise DomainError(f"leading coefficient must be positive, got {self.value}")

    @property
    def relative_error(self) -> float:
        return self.error_estimate / self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "error": self.error_estimate,
            "convention": self.convention,
            "volume": self.volume,
        }


def leading_coefficient_quadrature(
    alg, convention: str = "unit", volume: Optional[float] = None
) -> LeadingCoefficient:
    """c_M from the quadrature of W. ``alg`` may be an algebra or a SpectralProfile.

    ``volume`` overrides the value the convention assigns to Vol(M).
    """
    profile = SpectralProfile.of(alg)
    vol = convention_volume(convention, profile.d) if volume is None else float(volume)
    if not vol > 0:
        raise DomainError("Vol(M) must be positive")
    integral, error = volume_integral(profile.half_dim, profile.r, profile.s)
    scale = vol / (2 * math.pi) ** (profile.half_dim + profile.d)
    logger.debug("Quadrature c_M for %s: %.17g +- %.3e", profile, scale * integral, scale * error)
    return LeadingCoefficient(scale * integral, "quadrature", scale * error, canonical_convention(convention), vol)


def multiple_hurwitz_zeta(n: int, s: int, a, dps: Optional[int] = None) -> Tuple[float, float]:
    """zeta_n(s, a) = sum over alpha in N^n of (a + |alpha|)^-s, with an error estimate.

    The number of alpha with |alpha| = m is C(m+n-1, n-1), a polynomial in x = m + a
    of degree n - 1, so the sum is a finite combination of Hurwitz zeta values
    zeta(s - j, a); s > n is required.
    """
    if n < 1:
        raise DomainError("zeta_n needs n >= 1")
    if s <= n:
        raise DomainError(f"zeta_n(s, a) diverges for s <= n (n={n}, s={s})")
    a = sympy.nsimplify(a)
    if not a > 0:
        raise DomainError("zeta_n(s, a) needs a > 0")
    x = sympy.Symbol("x")
    count = sympy.prod([x - a + j for j in range(1, n)]) / sympy.factorial(n - 1)
    coefficients = sympy.Poly(sympy.expand(count), x).all_coeffs()[::-1]
    with mpmath.workdps(dps or config.EXTENDED_DPS):
        a_mp = mpmath.mpf(sympy.Rational(a).p) / sympy.Rational(a).q
        terms = [
            mpmath.mpf(coefficient.p) / coefficient.q * mpmath.zeta(s - j, a_mp)
            for j, coefficient in enumerate(sympy.Rational(c) for c in coefficients)
        ]
        value = mpmath.fsum(terms)
        error = mpmath.fsum(abs(term) for term in terms) * mpmath.mpf(10) ** (-mpmath.mp.dps + 2)
        return float(value), float(error)


def _zeta_factor(half_dim: int, d: int, k: int) -> Tuple[float, float]:
    """pi^{d/2} / Gamma(d/2) zeta_N(k, N/2)."""
    zeta, error = multiple_hurwitz_zeta(half_dim, k, sympy.Rational(half_dim, 2))
    factor = math.pi ** (d / 2) / math.gamma(d / 2)
    return factor * zeta, factor * error


def leading_coefficient_zeta(half_dim: int, d: int, convention: str = "unit") -> LeadingCoefficient:
    """c_M for s = 0 from the multiple Hurwitz zeta closed form."""
    if half_dim < 1 or d < 1:
        raise DomainError(f"closed form needs N, d >= 1, got N={half_dim}, d={d}")
    vol = convention_volume(convention, d)
    k = half_dim + d
    right, error = _zeta_factor(half_dim, d, k)
    scale = vol * math.gamma(k) / ((2 * math.pi) ** k * 2 ** (d - 1))
    return LeadingCoefficient(scale * right, "zeta_closed_form", scale * error, canonical_convention(convention), vol)


@dataclass(frozen=True)
class InjectivityReport:
    k: int
    values: Dict[Tuple[int, int], float]
    min_gap: float
    closest: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "values": [{"N": n, "d": d, "value": value} for (n, d), value in sorted(self.values.items())],
            "min_gap": None if math.isinf(self.min_gap) else self.min_gap,
            "closest": [list(pair) for pair in self.closest] if self.closest else None,
        }


def injectivity_scan(k: int) -> InjectivityReport:
    """Evaluate (N, d) -> pi^{d/2}/Gamma(d/2) zeta_N(k, N/2) over N + d = k.

    Only evidence for injectivity: the report carries the smallest gap between
    two values.
    """
    if k < 2:
        raise DomainError("injectivity scan needs k >= 2")
    values = {(n, k - n): _zeta_factor(n, k - n, k)[0] for n in range(1, k)}
    min_gap, closest = math.inf, None
    for (left, a), (right, b) in itertools.combinations(sorted(values.items()), 2):
        if abs(a - b) < min_gap:
            min_gap, closest = abs(a - b), (left, right)
    return InjectivityReport(k, values, min_gap, closest)
