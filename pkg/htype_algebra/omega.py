"""Omega(z), its V+/V- blocks, characteristic polynomials and kernel lattices.

Rational inputs (int / Fraction) are handled exactly with sympy matrices;
float inputs go through numpy.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from common.errors import DomainError, SignatureError
from htype_algebra.algebra import PseudoHTypeAlgebra
from htype_algebra.lattice import DualLatticeVector

LAMBDA = sympy.Symbol("lambda")


def _is_exact(values: Sequence) -> bool:
    return all(isinstance(v, (Rational, sympy.Rational)) and not isinstance(v, bool) for v in values)


def _as_exact(value):
    if isinstance(value, sympy.Rational):
        return value
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _check_length(alg: PseudoHTypeAlgebra, z: Sequence) -> None:
    if len(z) != alg.d:
        raise ValueError(f"expected a center vector of length {alg.d}, got {len(z)}")


def omega(alg: PseudoHTypeAlgebra, z: Sequence) -> Union[sympy.Matrix, np.ndarray]:
    """Omega(z) = sum_k z_k (c_ij^k); a sympy Matrix for rational z, numpy otherwise."""
    _check_length(alg, z)
    if _is_exact(z):
        matrix = sympy.zeros(alg.dim_h, alg.dim_h)
        values = [_as_exact(v) for v in z]
    else:
        matrix = np.zeros((alg.dim_h, alg.dim_h))
        values = [float(v) for v in z]
    for (i, j), (k, sign) in alg.constants.items():
        if values[k]:
            matrix[i, j] += sign * values[k]
    return matrix


def module_action(alg: PseudoHTypeAlgebra, z: Sequence) -> Union[sympy.Matrix, np.ndarray]:
    """J_z = sum_k z_k J_k as a dense matrix."""
    _check_length(alg, z)
    exact = _is_exact(z)
    if exact:
        matrix = sympy.zeros(alg.dim_h, alg.dim_h)
        values = [_as_exact(v) for v in z]
    else:
        matrix = np.zeros((alg.dim_h, alg.dim_h))
        values = [float(v) for v in z]
    for k, generator in enumerate(alg.module.generators):
        if not values[k]:
            continue
        for i in range(alg.dim_h):
            j, sign = generator.image(i)
            matrix[j, i] += sign * values[k]
    return matrix


def metric_diagonal(alg: PseudoHTypeAlgebra, exact: bool = True):
    if exact:
        return sympy.diag(*alg.module.metric)
    return np.diag(np.array(alg.module.metric, dtype=float))


@dataclass(frozen=True)
class OmegaBlocks:
    A: object
    B: object
    C: object
    D: object
    positive_indices: Tuple[int, ...]
    negative_indices: Tuple[int, ...]


def _split_indices(alg: PseudoHTypeAlgebra) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    positive = tuple(i for i, g in enumerate(alg.module.metric) if g == 1)
    negative = tuple(i for i, g in enumerate(alg.module.metric) if g == -1)
    return positive, negative


def omega_blocks(alg: PseudoHTypeAlgebra, z: Sequence) -> OmegaBlocks:
    """Blocks of J_z with respect to V+ (+) V-: J_z = (A B; C D)."""
    if alg.s == 0:
        raise SignatureError("omega_blocks needs s > 0")
    positive, negative = _split_indices(alg)
    j_z = module_action(alg, z)
    if isinstance(j_z, np.ndarray):
        pick = lambda rows, cols: j_z[np.ix_(rows, cols)]
    else:
        pick = lambda rows, cols: j_z.extract(list(rows), list(cols))
    return OmegaBlocks(
        A=pick(positive, positive),
        B=pick(positive, negative),
        C=pick(negative, positive),
        D=pick(negative, negative),
        positive_indices=positive,
        negative_indices=negative,
    )


def check_block_relations(alg: PseudoHTypeAlgebra, z: Sequence) -> Dict[str, bool]:
    """Exact check of the block relations for a rational center vector."""
    if not _is_exact(z):
        raise ValueError("block relations are checked exactly; pass int or Fraction entries")
    blocks = omega_blocks(alg, z)
    mu, nu = z[: alg.r], z[alg.r:]
    mu_sq = sum(_as_exact(v) ** 2 for v in mu)
    nu_sq = sum(_as_exact(v) ** 2 for v in nu)
    size = len(blocks.positive_indices)
    identity = sympy.eye(size)
    zero = sympy.zeros(size, size)
    A, B, C, D = blocks.A, blocks.B, blocks.C, blocks.D
    return {
        "A_skew": A.T == -A,
        "D_skew": D.T == -D,
        "B_transpose_is_C": B.T == C,
        "A_squared": A * A == -mu_sq * identity,
        "D_squared": D * D == -mu_sq * identity,
        "BC": B * C == nu_sq * identity,
        "CB": C * B == nu_sq * identity,
        "AB_plus_BD": A * B + B * D == zero,
        "CA_plus_DC": C * A + D * C == zero,
        "A2_plus_BC": A * A + B * C == -(mu_sq - nu_sq) * identity,
        "CB_plus_D2": C * B + D * D == -(mu_sq - nu_sq) * identity,
    }


def _integer_omega_rows(alg: PseudoHTypeAlgebra, z: Sequence[int]) -> List[List[int]]:
    rows = [[0] * alg.dim_h for _ in range(alg.dim_h)]
    for (i, j), (k, sign) in alg.constants.items():
        rows[i][j] += sign * int(z[k])
    return rows


def char_poly_squared(alg: PseudoHTypeAlgebra, z: Sequence[int]) -> sympy.Poly:
    """det(Omega(z) + lambda)^2 by exact integer characteristic polynomial."""
    _check_length(alg, z)
    if any(int(v) != v for v in z):
        raise ValueError("char_poly_squared takes an integer center vector")
    negated = [[ZZ(-entry) for entry in row] for row in _integer_omega_rows(alg, z)]
    matrix = DomainMatrix(negated, (alg.dim_h, alg.dim_h), ZZ)
    coefficients = [int(c) for c in matrix.charpoly()]
    return sympy.Poly(coefficients, LAMBDA, domain="ZZ") ** 2


def char_poly_closed_form(alg: PseudoHTypeAlgebra, z: Sequence[int]) -> sympy.Poly:
    _check_length(alg, z)
    mu_sq = sum(int(v) ** 2 for v in z[: alg.r])
    nu_sq = sum(int(v) ** 2 for v in z[alg.r:])
    n = alg.half_dim
    if alg.s == 0:
        expression = (LAMBDA ** 2 + mu_sq) ** (2 * n)
    else:
        expression = ((LAMBDA ** 2 + mu_sq + nu_sq) ** 2 - 4 * mu_sq * nu_sq) ** n
    return sympy.Poly(expression, LAMBDA, domain="ZZ")


def omega_eigen(alg: PseudoHTypeAlgebra, z: Sequence) -> Tuple[Tuple[float, int], ...]:
    """Eigenvalues of Omega(sqrt(-1) z) with multiplicities, largest first."""
    _check_length(alg, z)
    exact = _is_exact(z)
    squares = [Fraction(v) ** 2 if exact else float(v) ** 2 for v in z]
    mu_sq = sum(squares[: alg.r], Fraction(0) if exact else 0.0)
    nu_sq = sum(squares[alg.r:], Fraction(0) if exact else 0.0)
    if mu_sq == 0 and nu_sq == 0:
        raise DomainError("omega_eigen needs z != 0")
    n = alg.half_dim
    mu, nu = math.sqrt(mu_sq), math.sqrt(nu_sq)
    if alg.s == 0 or nu_sq == 0:
        pairs = [(mu, n), (-mu, n)]
    elif mu_sq == 0:
        pairs = [(nu, n), (-nu, n)]
    else:
        if n % 2:
            raise DomainError(
                f"mixed eigenvalue query on a module with odd half-dimension N={n}"
            )
        half = n // 2
        pairs = [(mu + nu, half), (-(mu + nu), half)]
        if mu_sq == nu_sq:
            pairs.append((0.0, n))
        else:
            gap = float(abs(mu_sq - nu_sq)) / (mu + nu)
            pairs.extend([(gap, half), (-gap, half)])
    return tuple(sorted(pairs, key=lambda item: -item[0]))


@dataclass(frozen=True)
class KernelLattice:
    basis: Tuple[Tuple[int, ...], ...]
    gram: Tuple[Tuple[int, ...], ...]
    d0: int

    def basis_matrix(self) -> np.ndarray:
        """Columns are the lattice basis vectors."""
        return np.array(self.basis, dtype=np.int64).T


def kernel_lattice_basis(alg: PseudoHTypeAlgebra, n: DualLatticeVector) -> KernelLattice:
    """Integer basis of M(n) = ker Omega(n) and its Gram matrix 2|mu'|^2 Id."""
    if alg.s == 0:
        raise SignatureError("kernel lattices exist only for s > 0")
    if len(n.m) != alg.r or len(n.n) != alg.s:
        raise ValueError("dual vector does not match the signature")
    if n.is_zero:
        raise DomainError("kernel_lattice_basis needs n != 0")
    if n.mu_norm_sq != n.nu_norm_sq:
        raise DomainError("Omega(n) is nonsingular unless |mu| = |nu|")
    d0 = n.d0
    reduced = tuple(v // d0 for v in n.coefficients)
    blocks = omega_blocks(alg, reduced)
    B = np.array([[int(v) for v in row] for row in blocks.B.tolist()], dtype=np.int64)
    D = np.array([[int(v) for v in row] for row in blocks.D.tolist()], dtype=np.int64)
    columns = []
    for i in range(len(blocks.negative_indices)):
        vector = [0] * alg.dim_h
        for row, index in enumerate(blocks.positive_indices):
            vector[index] = int(B[row, i])
        for row, index in enumerate(blocks.negative_indices):
            vector[index] = -int(D[row, i])
        columns.append(tuple(vector))
    matrix = np.array(columns, dtype=np.int64)
    gram = matrix @ matrix.T
    return KernelLattice(
        basis=tuple(columns),
        gram=tuple(tuple(int(v) for v in row) for row in gram),
        d0=d0,
    )
