"""Heisenberg nilmanifolds H_alpha with the same leading heat coefficient as a given one.

With n + 1 = N + d the trace of H_alpha = Gamma_alpha \\ H_{2n+1} starts like that
of M when alpha^{n+1} c_{H_1} = c_M. The lattice Gamma_alpha is the image of the
unit-scale lattice under x -> sqrt(alpha) x, z -> alpha z, which scales the
sub-Laplacian by 1/alpha, so tr_{H_alpha}(t) = tr_{H_1}(t / alpha).
"""

import logging
from dataclasses import dataclass
from typing import Optional

from asymptotics.leading_coefficient import LeadingCoefficient, leading_coefficient_quadrature
from common.errors import DomainError
from heat_trace.components import SpectralProfile
from heat_trace.totals import TraceControls, TraceResult, total_trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeisenbergMatch:
    n: int
    alpha: float
    alpha_rel_error: float
    cM: LeadingCoefficient
    cH1: LeadingCoefficient
    manifold_dimension: int

    @property
    def heisenberg_dimension(self) -> int:
        return 2 * self.n + 1

    @property
    def profile(self) -> SpectralProfile:
        return SpectralProfile(self.n, 1, 0)

    def matched_coefficient(self) -> float:
        """c_{H_alpha} = alpha^{n+1} c_{H_1}."""
        return self.alpha ** (self.n + 1) * self.cH1.value

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "alpha_rel_error": self.alpha_rel_error,
            "cM": self.cM.to_dict(),
            "cH1": self.cH1.to_dict(),
            "dims": {"manifold": self.manifold_dimension, "heisenberg": self.heisenberg_dimension},
        }


def heisenberg_match(alg, convention: str = "unit") -> HeisenbergMatch:
    """Match c_M of a d > 1 nilmanifold by a Heisenberg nilmanifold of dimension 2N + 2d - 1.

    Both coefficients use the same volume convention. Pass "lebesgue" when the
    matched trace is compared against the lattice sums of ``heat_trace``.
    """
    profile = SpectralProfile.of(alg)
    if profile.d <= 1:
        raise DomainError(f"the Heisenberg match needs a center of dimension d > 1, got d={profile.d}")
    n = profile.half_dim + profile.d - 1
    cM = leading_coefficient_quadrature(profile, convention)
    cH1 = leading_coefficient_quadrature(SpectralProfile(n, 1, 0), convention)
    alpha = (cM.value / cH1.value) ** (1.0 / (n + 1))
    rel_error = (cM.relative_error + cH1.relative_error) / (n + 1)
    logger.info("Heisenberg match for %s: n=%d alpha=%.17g", profile, n, alpha)
    return HeisenbergMatch(n, alpha, rel_error, cM, cH1, 2 * profile.half_dim + profile.d)


def heisenberg_trace(match: HeisenbergMatch, t, ctrl: Optional[TraceControls] = None) -> TraceResult:
    """tr_{H_alpha}(t) as tr_{H_1}(t / alpha); the bound covers the uncertainty in alpha."""
    ctrl = ctrl or TraceControls()
    result = total_trace(match.profile, t / match.alpha, ctrl)
    # tr ~ alpha^{n+1}: a relative error e in alpha moves it by about (n+1) e
    spread = 2 * (match.n + 1) * match.alpha_rel_error * abs(result.value)
    return TraceResult(result.value, result.tail_bound + spread)
