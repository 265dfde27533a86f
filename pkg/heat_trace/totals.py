"""Total heat traces of the sub-Laplacian and the Laplacian.

The sum runs over dual vectors 2(mu, nu) grouped by (|mu|^2, |nu|^2); every
component only depends on the two norms (and on gcd(mu, nu) when they agree),
so each group is evaluated once and weighted by exact lattice-point counts.
Dual vectors with max(|mu|, |nu|) <= R are summed; the rest is bounded by
the sinh decay of the components.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Optional, Sequence, Tuple

from common import config
from common.errors import TruncationError
from heat_trace.components import SpectralProfile, check_time, component_value
from heat_trace.lattice_sums import exact_gcd_counts, monotone_tail, norm_counts, theta_series
from heat_trace.precision import Precision, accumulate, numeric_context

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceControls:
    """Truncation and precision settings for the lattice sums.

    ``lattice_radius`` is the starting cutoff R, raised automatically until the
    tail bound drops below ``tail_tolerance`` (or ``relative_tolerance`` times
    the n = 0 component, when that is looser). ``theta_radius`` caps the shells
    of the one-dimensional theta sums.
    """

    lattice_radius: int = 4
    theta_radius: int = 64
    tail_tolerance: float = 1e-13
    precision: Precision = "double"
    relative_tolerance: Optional[float] = None

    def __post_init__(self):
        if self.lattice_radius < 1:
            raise ValueError("lattice_radius must be a positive integer")
        if self.theta_radius < 1:
            raise ValueError("theta_radius must be a positive integer")
        if not self.tail_tolerance > 0:
            raise ValueError("tail_tolerance must be positive")
        if self.relative_tolerance is not None and not self.relative_tolerance > 0:
            raise ValueError("relative_tolerance must be positive")
        if self.precision not in ("double", "extended"):
            raise ValueError(f"unknown precision {self.precision!r}")

    def to_dict(self) -> dict:
        return {
            "lattice_radius": self.lattice_radius,
            "theta_radius": self.theta_radius,
            "tail_tolerance": self.tail_tolerance,
            "precision": self.precision,
            "relative_tolerance": self.relative_tolerance,
        }


class TraceResult(NamedTuple):
    value: object
    tail_bound: object


@dataclass(frozen=True)
class HeatTraceSeries:
    t_values: Tuple[float, ...]
    values: Tuple[object, ...]
    tail_bounds: Tuple[object, ...]
    laplacian: bool = False

    def rows(self):
        return list(zip(self.t_values, self.values, self.tail_bounds))


@lru_cache(maxsize=4096)
def _gcd_weights(r: int, s: int, q: int, radius: int) -> Tuple[Tuple[int, int], ...]:
    """(d0, count) for all (mu, nu) with |mu|^2 = |nu|^2 = q, grouped by gcd(mu, nu)."""
    mu_by_gcd = exact_gcd_counts(r, q, norm_counts(r, radius * radius))
    nu_by_gcd = exact_gcd_counts(s, q, norm_counts(s, radius * radius))
    weights = {}
    for g_mu, c_mu in mu_by_gcd.items():
        for g_nu, c_nu in nu_by_gcd.items():
            d0 = gcd(g_mu, g_nu)
            weights[d0] = weights.get(d0, 0) + c_mu * c_nu
    return tuple(sorted(weights.items()))


def _decay_envelope(profile: SpectralProfile, t, theta_factor, laplacian: bool, ctx):
    """x -> bound on one nonzero component with max(|mu|, |nu|) >= x.

    Uses a / sinh a <= (1 + 2a) e^{-a}, decreasing once a >= 1/2.
    """
    n = profile.half_dim
    exponent = ctx.mpf(n) if profile.s == 0 else ctx.mpf(n) / 2
    prefactor = (2 * ctx.pi * t) ** (-n) * theta_factor

    def envelope(x):
        y = 4 * ctx.pi * t * x
        bound = prefactor * ((1 + 2 * y) * ctx.exp(-y)) ** exponent
        if laplacian:
            bound *= ctx.exp(-8 * ctx.pi ** 2 * t * x * x)
        return bound

    return envelope


def _tail_bound(profile: SpectralProfile, t, radius: int, envelope, ctx):
    d = profile.d
    # points with sup-norm <= R but max(|mu|, |nu|) > R, then sup-norm shells k > R
    inside = ctx.mpf(2 * radius + 1) ** d * envelope(radius)
    shell = lambda k: 2 * d * ctx.mpf(2 * k + 1) ** (d - 1) * envelope(k)
    return inside + monotone_tail(shell, radius + 1, ctx)


def _component_sum(profile: SpectralProfile, t, radius: int, laplacian: bool, theta_radius: int, ctx):
    limit = radius * radius
    mu_support = [(q, c) for q, c in enumerate(norm_counts(profile.r, limit)) if c]
    nu_support = [(q, c) for q, c in enumerate(norm_counts(profile.s, limit)) if c]
    shift = -8 * ctx.pi ** 2 * t
    terms, errors = [], []
    for q_mu, c_mu in mu_support:
        for q_nu, c_nu in nu_support:
            if q_mu == q_nu and q_mu > 0:
                weights = _gcd_weights(profile.r, profile.s, q_mu, radius)
            else:
                weights = ((1, c_mu * c_nu),)
            factor = ctx.exp(shift * (q_mu + q_nu)) if laplacian else 1
            for d0, weight in weights:
                value, error = component_value(profile, q_mu, q_nu, d0, t, ctx, theta_radius)
                terms.append(weight * factor * value)
                errors.append(weight * factor * error)
    return accumulate(ctx, terms), accumulate(ctx, errors)


def _total(source, t, ctrl: TraceControls, laplacian: bool) -> TraceResult:
    check_time(t)
    profile = SpectralProfile.of(source)
    with numeric_context(ctrl.precision) as ctx:
        t = ctx.mpf(t)
        origin, _ = component_value(profile, 0, 0, 1, t, ctx, ctrl.theta_radius)
        target = ctrl.tail_tolerance
        if ctrl.relative_tolerance is not None:
            target = max(target, ctrl.relative_tolerance * origin)
        theta_factor = 1
        if profile.r and profile.s:
            theta, theta_error = theta_series(1 / t, ctx, ctrl.theta_radius)
            theta_factor = (theta + theta_error) ** profile.half_dim
        envelope = _decay_envelope(profile, t, theta_factor, laplacian, ctx)

        radius = max(ctrl.lattice_radius, math.ceil(1 / (8 * math.pi * float(t))))
        radius = min(radius, config.MAX_LATTICE_RADIUS)
        while True:
            bound = _tail_bound(profile, t, radius, envelope, ctx)
            if bound <= target:
                break
            if radius >= config.MAX_LATTICE_RADIUS:
                logger.warning(
                    "Lattice radius cap %d reached at t=%s with tail bound %.3e",
                    radius, float(t), float(bound),
                )
                raise TruncationError(
                    f"tail bound {float(bound):.3e} above tolerance {float(target):.3e} "
                    f"at the radius cap {radius}",
                    best_bound=float(bound),
                    radius=radius,
                )
            radius = min(math.ceil(1.5 * radius) + 1, config.MAX_LATTICE_RADIUS)
            logger.debug("Raising lattice radius to %d at t=%s", radius, float(t))

        value, component_errors = _component_sum(profile, t, radius, laplacian, ctrl.theta_radius, ctx)
        logger.debug("t=%s radius=%d value=%s tail=%s", float(t), radius, value, bound)
        return TraceResult(value, bound + component_errors)


def total_trace(alg, t, ctrl: Optional[TraceControls] = None) -> TraceResult:
    """Heat trace of the sub-Laplacian on the nilmanifold, with a certified tail bound.

    ``alg`` may be a PseudoHTypeAlgebra or a SpectralProfile.
    """
    return _total(alg, t, ctrl or TraceControls(), laplacian=False)


def laplacian_total_trace(alg, t, ctrl: Optional[TraceControls] = None) -> TraceResult:
    """Same sum with every component weighted by exp(-2 pi^2 t |n|^2) for n = 2(mu, nu)."""
    return _total(alg, t, ctrl or TraceControls(), laplacian=True)


def heat_trace_series(
    alg,
    t_values: Sequence[float],
    ctrl: Optional[TraceControls] = None,
    laplacian: bool = False,
    threads: Optional[int] = None,
) -> HeatTraceSeries:
    ctrl = ctrl or TraceControls()
    ordered = tuple(sorted(float(t) for t in t_values))
    for t in ordered:
        check_time(t)
    evaluate = laplacian_total_trace if laplacian else total_trace
    workers = min(threads or config.THREADS, max(len(ordered), 1))
    # mpmath.mp is process-global; workdps must not interleave
    if ctrl.precision == "extended" or workers <= 1:
        results = [evaluate(alg, t, ctrl) for t in ordered]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: evaluate(alg, t, ctrl), ordered))
    return HeatTraceSeries(
        t_values=ordered,
        values=tuple(result.value for result in results),
        tail_bounds=tuple(result.tail_bound for result in results),
        laplacian=laplacian,
    )
