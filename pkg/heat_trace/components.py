"""Traces of the component operators D^(n) of the sub-Laplacian.

The component indexed by the dual vector n = 2(mu, nu) depends only on
|mu|^2, |nu|^2 and, when |mu| = |nu|, on d0 = gcd(mu, nu):

* n = 0:            (2 pi t)^-N theta(1/2t)^(2N)
* |mu| = |nu| != 0: (pi t)^-N/2 (2|mu| / sinh(8 pi t |mu|))^N/2 theta(|mu|^2 / d0^2 t)^N
* otherwise:        2^N ((|mu|^2 - |nu|^2) / (sinh(4 pi t (|mu|+|nu|)) sinh(4 pi t (|mu|-|nu|))))^N/2
* s = 0, n != 0:    (|n| / sinh(2 pi t |n|))^N
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from common.errors import DomainError
from heat_trace.lattice_sums import lattice_theta, power_with_error, theta_series
from heat_trace.precision import Precision, log_sinh, numeric_context, x_over_sinh
from htype_algebra.algebra import PseudoHTypeAlgebra
from htype_algebra.lattice import DualLatticeVector
from htype_algebra.omega import kernel_lattice_basis, omega_eigen


@dataclass(frozen=True)
class SpectralProfile:
    """The data the trace formulas depend on: N = dim_h / 2 and the signature."""

    half_dim: int
    r: int
    s: int

    @classmethod
    def of(cls, source) -> "SpectralProfile":
        if isinstance(source, SpectralProfile):
            return source
        return cls(source.half_dim, source.r, source.s)

    @property
    def d(self) -> int:
        return self.r + self.s


def check_time(t) -> None:
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")


def component_value(
    profile: SpectralProfile, mu_sq: int, nu_sq: int, d0: int, t, ctx, theta_radius: Optional[int] = None
) -> Tuple[object, object]:
    """(value, truncation error) of one component trace, from the norms of (mu, nu)."""
    n = profile.half_dim
    t = ctx.mpf(t)
    two_pi_t = 2 * ctx.pi * t
    if mu_sq == 0 and nu_sq == 0:
        theta, theta_error = theta_series(1 / (2 * t), ctx, theta_radius)
        power, power_error = power_with_error(theta, theta_error, 2 * n)
        prefactor = two_pi_t ** (-n)
        return prefactor * power, prefactor * power_error
    if profile.s == 0:
        norm = 2 * ctx.sqrt(mu_sq)
        return ctx.exp(n * (ctx.log(norm) - log_sinh(ctx, two_pi_t * norm))), 0 * t
    if mu_sq == nu_sq:
        mu = ctx.sqrt(mu_sq)
        theta, theta_error = theta_series(ctx.mpf(mu_sq) / (d0 * d0 * t), ctx, theta_radius)
        power, power_error = power_with_error(theta, theta_error, n)
        log_factor = ctx.log(2 * mu) - log_sinh(ctx, 8 * ctx.pi * t * mu) - ctx.log(ctx.pi * t)
        prefactor = ctx.exp(n * log_factor / 2)
        return prefactor * power, prefactor * power_error
    mu, nu = ctx.sqrt(mu_sq), ctx.sqrt(nu_sq)
    gap = abs(mu_sq - nu_sq) / (mu + nu)
    log_ratio = ctx.log(abs(mu_sq - nu_sq)) - log_sinh(ctx, 4 * ctx.pi * t * (mu + nu)) - log_sinh(ctx, 4 * ctx.pi * t * gap)
    return ctx.exp(n * ctx.log(2) + n * log_ratio / 2), 0 * t


def _validate_vector(alg: PseudoHTypeAlgebra, n: DualLatticeVector) -> None:
    if len(n.m) != alg.r or len(n.n) != alg.s:
        raise ValueError(f"dual vector must have {alg.r} + {alg.s} coefficients")


def component_trace(alg: PseudoHTypeAlgebra, n: DualLatticeVector, t, precision: Precision = "double"):
    check_time(t)
    _validate_vector(alg, n)
    with numeric_context(precision) as ctx:
        value, _ = component_value(SpectralProfile.of(alg), n.mu_norm_sq, n.nu_norm_sq, max(n.d0, 1), t, ctx)
        return value


def component_trace_with_error(alg: PseudoHTypeAlgebra, n: DualLatticeVector, t, precision: Precision = "double"):
    check_time(t)
    _validate_vector(alg, n)
    with numeric_context(precision) as ctx:
        return component_value(SpectralProfile.of(alg), n.mu_norm_sq, n.nu_norm_sq, max(n.d0, 1), t, ctx)


def component_trace_general(alg: PseudoHTypeAlgebra, n: DualLatticeVector, t, precision: Precision = "double"):
    """(2 pi t)^-N sum_{mu in M(n)} e^{-<mu,mu>/2t} sqrt det(Omega/sinh Omega) at 2 pi sqrt(-1) t n.

    Works from the eigenvalues of Omega and the Gram matrix of the kernel
    lattice M(n) instead of the case formulas.
    """
    check_time(t)
    _validate_vector(alg, n)
    with numeric_context(precision) as ctx:
        t = ctx.mpf(t)
        if n.is_zero:
            gram = [[1 if i == j else 0 for j in range(alg.dim_h)] for i in range(alg.dim_h)]
        elif alg.s > 0 and n.mu_norm_sq == n.nu_norm_sq:
            gram = [list(row) for row in kernel_lattice_basis(alg, n).gram]
        else:
            gram = []
        theta, _ = lattice_theta(gram, 1 / (2 * t), ctx)
        determinant = ctx.mpf(1)
        if not n.is_zero:
            scale = 4 * ctx.pi * t
            for modulus, multiplicity in _omega_moduli(alg, n, ctx):
                determinant *= x_over_sinh(ctx, scale * modulus) ** (ctx.mpf(multiplicity) / 2)
        return (2 * ctx.pi * t) ** (-ctx.mpf(alg.dim_h) / 2) * theta * determinant


def _omega_moduli(alg: PseudoHTypeAlgebra, n: DualLatticeVector, ctx):
    """|eigenvalue| of Omega(sqrt(-1) (mu, nu)) with multiplicities, at working precision.

    omega_eigen fixes the multiplicities; each modulus is then re-derived from
    the exact integer norms so extended precision keeps every digit.
    """
    mu, nu = ctx.sqrt(n.mu_norm_sq), ctx.sqrt(n.nu_norm_sq)
    gap = abs(n.mu_norm_sq - n.nu_norm_sq) / (mu + nu)
    candidates = (mu + nu, gap, mu, nu, ctx.mpf(0))
    moduli = []
    for eigenvalue, multiplicity in omega_eigen(alg, n.coefficients):
        closest = min(candidates, key=lambda value: abs(float(value) - abs(eigenvalue)))
        moduli.append((closest, multiplicity))
    return moduli


def multiple_module_power_check(alg_k: PseudoHTypeAlgebra, alg_min: PseudoHTypeAlgebra, n: DualLatticeVector, t, rtol: float = 1e-10) -> bool:
    if alg_k.signature != alg_min.signature:
        raise ValueError("both algebras must share the signature")
    if alg_k.dim_h % alg_min.dim_h:
        raise ValueError("the multiple module dimension must be a multiple of the minimal one")
    copies = alg_k.dim_h // alg_min.dim_h
    left = component_trace(alg_k, n, t)
    right = component_trace(alg_min, n, t) ** copies
    return abs(left - right) <= rtol * abs(right)
