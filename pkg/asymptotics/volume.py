"""The volume function W and its integral over the center.

W(tau) = det(Omega(sqrt(-1) tau) / sinh Omega(sqrt(-1) tau))^(1/2) only depends on
(|mu|, |nu|), so the integral over R^d reduces to one radial variable
(r s = 0) or two (r, s > 0).
"""

import logging
import math
from typing import Sequence, Tuple

import mpmath
import numpy as np
from scipy import integrate, special

from common.errors import QuadratureError
from heat_trace.precision import x_over_sinh
from htype_algebra.algebra import PseudoHTypeAlgebra
from htype_algebra.omega import omega_eigen

logger = logging.getLogger(__name__)


def _phi(x: float) -> float:
    return x_over_sinh(mpmath.fp, x)


def volume_function(alg: PseudoHTypeAlgebra, tau: Sequence[float]) -> float:
    if len(tau) != alg.d:
        raise ValueError(f"expected a center vector of length {alg.d}, got {len(tau)}")
    if not any(tau):
        return 1.0
    value = 1.0
    for eigenvalue, multiplicity in omega_eigen(alg, [float(v) for v in tau]):
        value *= _phi(eigenvalue) ** (multiplicity / 2)
    return value


def sphere_measure(k: int) -> float:
    """Surface measure of the unit sphere in R^k (2 for k = 1)."""
    return 2 * math.pi ** (k / 2) / math.gamma(k / 2)


def _radial_tail(half_dim: int, d: int, cutoff: float) -> float:
    """int_L^inf rho^(d-1) phi(rho)^N, using phi(rho) <= 3 rho e^{-rho} for rho >= 1."""
    a = d + half_dim
    return 3.0 ** half_dim * special.gammaincc(a, half_dim * cutoff) * special.gamma(a) / half_dim ** a


def _split_tail(half_dim: int, r: int, s: int, cutoff: float) -> float:
    """Integral outside [0, L]^2, bounded over rho + sigma >= L by the (rho + sigma) factor alone."""
    exponent = half_dim / 2
    a = r + s + exponent
    radial = 3.0 ** exponent * special.gammaincc(a, exponent * cutoff) * special.gamma(a) / exponent ** a
    return special.beta(r, s) * radial


def _integrate(integrand_1d, integrand_2d, cutoff, epsabs, epsrel, limit):
    if integrand_2d is None:
        return integrate.quad(integrand_1d, 0.0, cutoff, epsabs=epsabs, epsrel=epsrel, limit=limit)
    inner_errors = []

    def outer(rho):
        value, error = integrate.quad(
            lambda sigma: integrand_2d(rho, sigma), 0.0, cutoff, epsabs=epsabs, epsrel=epsrel, limit=limit
        )
        inner_errors.append(error)
        return value

    value, error = integrate.quad(outer, 0.0, cutoff, epsabs=epsabs, epsrel=epsrel, limit=limit)
    return value, error + cutoff * max(inner_errors, default=0.0)


def volume_integral(
    half_dim: int,
    r: int,
    s: int,
    epsabs: float = 1e-12,
    epsrel: float = 1e-10,
) -> Tuple[float, float]:
    """(int_{R^d} W, error estimate) for N = half_dim and signature (r, s).

    The error estimate is the integrator's plus the analytic tail beyond the cutoff.
    """
    if half_dim < 1 or r < 0 or s < 0 or r + s < 1:
        raise ValueError(f"invalid volume integral parameters N={half_dim}, r={r}, s={s}")
    d = r + s
    if r * s == 0:
        tail_for = lambda L: _radial_tail(half_dim, d, L)
        integrand_1d = lambda rho: rho ** (d - 1) * _phi(rho) ** half_dim
        integrand_2d = None
        scale = sphere_measure(d)
    else:
        exponent = half_dim / 2
        tail_for = lambda L: _split_tail(half_dim, r, s, L)
        integrand_1d = None
        integrand_2d = lambda rho, sigma: (
            rho ** (r - 1) * sigma ** (s - 1) * (_phi(rho + sigma) * _phi(rho - sigma)) ** exponent
        )
        scale = sphere_measure(r) * sphere_measure(s)

    cutoff = 10.0
    while tail_for(cutoff) > epsabs / 10:
        cutoff += 5.0
        if cutoff > 2000:
            raise QuadratureError("no cutoff makes the analytic tail small enough", error=tail_for(cutoff))
    tail = tail_for(cutoff)

    for limit in (200, 800):
        value, error = _integrate(integrand_1d, integrand_2d, cutoff, epsabs, epsrel, limit)
        total_error = scale * (error + tail)
        if error + tail <= 100 * max(epsabs, epsrel * abs(value)):
            return scale * value, total_error
        logger.info("Retrying quadrature for N=%d (%d,%d) with limit=%d", half_dim, r, s, limit * 4)
    raise QuadratureError(
        f"quadrature for N={half_dim}, ({r},{s}) stopped at error {total_error:.3e}",
        estimate=scale * value,
        error=total_error,
    )


def radial_profile(half_dim: int, r: int, s: int, rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """W on a grid of (|mu|, |nu|) values, for plotting output."""
    rho = np.asarray(rho, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    phi = np.vectorize(_phi)
    if s == 0:
        return phi(rho) ** half_dim
    if r == 0:
        return phi(sigma) ** half_dim
    return (phi(rho + sigma) * phi(rho - sigma)) ** (half_dim / 2)
