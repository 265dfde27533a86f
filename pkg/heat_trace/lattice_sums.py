"""Gaussian lattice sums and exact lattice-point counts.

Every evaluation returns a ``(value, error)`` pair where ``error`` bounds the
truncation of the infinite sum (rounding is not included).
"""

import itertools
import math
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from common.errors import DomainError
from heat_trace.precision import accumulate, unit_roundoff


def theta_series(c, ctx, max_terms: Optional[int] = None) -> Tuple[object, object]:
    """theta(c) = sum over l in Z of exp(-c l^2).

    For c < pi the Jacobi transformation theta(c) = sqrt(pi/c) theta(pi^2/c) is
    applied first, so at most a handful of terms are ever summed. ``max_terms``
    caps the number of shells; the returned tail still bounds what was left out.
    """
    if c <= 0:
        raise DomainError("theta_series needs c > 0")
    if c < ctx.pi:
        scale = ctx.sqrt(ctx.pi / c)
        value, error = theta_series(ctx.pi ** 2 / c, ctx, max_terms)
        return scale * value, scale * error
    cutoff = unit_roundoff(ctx) / 16
    terms = [ctx.mpf(1)]
    ell = 1
    while True:
        term = ctx.exp(-c * ell * ell)
        if term < cutoff or (max_terms is not None and ell > max_terms):
            break
        terms.append(2 * term)
        ell += 1
    last = ell - 1
    # 2 sum_{l > L} e^{-c l^2} <= 2 e^{-c (L+1)^2} / (1 - e^{-c (2L+3)})
    tail = 2 * ctx.exp(-c * (last + 1) ** 2) / (1 - ctx.exp(-c * (2 * last + 3)))
    return accumulate(ctx, terms), tail


def power_with_error(value, error, exponent: int):
    """(value^k, bound on |(value+e)^k - value^k| for |e| <= error)."""
    if exponent == 0:
        return value ** 0, 0 * error
    return value ** exponent, exponent * error * (value + error) ** (exponent - 1)


def lattice_theta(gram: Sequence[Sequence[int]], c, ctx) -> Tuple[object, object]:
    """sum over l in Z^b of exp(-c l^T G l) for a positive definite integer Gram matrix."""
    size = len(gram)
    if size == 0:
        return ctx.mpf(1), 0 * ctx.mpf(1)
    matrix = np.array(gram, dtype=float)
    off_diagonal = matrix - np.diag(np.diag(matrix))
    if not off_diagonal.any():
        value, error = ctx.mpf(1), 0 * ctx.mpf(1)
        for entry in np.diag(matrix):
            factor, factor_error = theta_series(c * int(entry), ctx)
            error = value * factor_error + factor * error + error * factor_error
            value = value * factor
        return value, error
    smallest = float(np.linalg.eigvalsh(matrix).min())
    if smallest <= 0:
        raise DomainError("lattice_theta needs a positive definite Gram matrix")
    # Box of radius L: every omitted point has l^T G l >= smallest * k^2 for some k > L.
    rate = float(c) * smallest
    radius = 1
    while (2 * radius + 3) ** size * math.exp(-rate * (radius + 1) ** 2) > float(unit_roundoff(ctx)) / 16:
        radius += 1
    integer_gram = np.array(gram, dtype=np.int64)
    terms = []
    for point in itertools.product(range(-radius, radius + 1), repeat=size):
        vector = np.array(point, dtype=np.int64)
        norm = int(vector @ integer_gram @ vector)
        terms.append(ctx.exp(-c * norm))
    shell = lambda k: 2 * size * (2 * k + 1) ** (size - 1) * ctx.exp(-c * smallest * k * k)
    tail = monotone_tail(shell, radius + 1, ctx)
    return accumulate(ctx, terms), tail


def monotone_tail(term: Callable[[int], object], start: int, ctx, max_steps: int = 100000):
    """Bound sum_{k >= start} term(k) for positive terms whose ratios decrease in k."""
    total = []
    k = start
    current = term(k)
    for _ in range(max_steps):
        if current == 0:
            return accumulate(ctx, total)
        following = term(k + 1)
        ratio = following / current
        if ratio <= 0.9:
            total.append(current)
            total.append(following / (1 - ratio))
            return accumulate(ctx, total)
        total.append(current)
        k += 1
        current = following
    return ctx.inf


def _squares_array(dim: int, max_q: int) -> np.ndarray:
    if (2 * math.isqrt(max_q) + 1) ** max(dim, 1) < 2 ** 62:
        return np.zeros(max_q + 1, dtype=np.int64)
    return np.zeros(max_q + 1, dtype=object)


@lru_cache(maxsize=64)
def norm_counts(dim: int, max_q: int) -> Tuple[int, ...]:
    """counts[q] = #{v in Z^dim : |v|^2 = q} for 0 <= q <= max_q (exact)."""
    if dim < 0 or max_q < 0:
        raise ValueError("dimension and max_q must be nonnegative")
    counts = _squares_array(dim, max_q)
    counts[0] = 1
    largest = math.isqrt(max_q)
    for _ in range(dim):
        previous = counts.copy()
        counts = previous.copy()
        for ell in range(1, largest + 1):
            shift = ell * ell
            counts[shift:] += 2 * previous[: max_q + 1 - shift]
    return tuple(int(v) for v in counts)


def exact_gcd_counts(dim: int, q: int, counts: Sequence[int]) -> Dict[int, int]:
    """#{v in Z^dim : |v|^2 = q, gcd(v) = g} for every g with g^2 | q, q > 0."""
    if q <= 0:
        raise ValueError("exact_gcd_counts needs q > 0")
    divisors = [g for g in range(1, math.isqrt(q) + 1) if q % (g * g) == 0]
    exact: Dict[int, int] = {}
    for g in sorted(divisors, reverse=True):
        divisible = counts[q // (g * g)]
        exact[g] = divisible - sum(exact[h] for h in exact if h % g == 0)
    return {g: count for g, count in exact.items() if count}
