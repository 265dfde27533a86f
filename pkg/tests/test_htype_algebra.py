from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from clifford_rep.modules import ModuleSpec, build_minimal_module
from common.errors import DomainError, SignatureError, UnverifiedModuleError
from htype_algebra.algebra import (
    GroupElement,
    algebra_to_dict,
    build_algebra,
    build_algebra_from_spec,
    group_product,
    jacobi_holds,
)
from htype_algebra.lattice import DualLatticeVector
from htype_algebra.omega import (
    char_poly_closed_form,
    char_poly_squared,
    check_block_relations,
    kernel_lattice_basis,
    metric_diagonal,
    module_action,
    omega,
    omega_blocks,
    omega_eigen,
)

SIGNATURES = [(1, 0), (1, 1), (3, 0), (1, 3), (3, 1), (2, 2)]
SWEEP_SIGNATURES = [(r, s) for r in range(9) for s in range(9) if 1 <= r + s <= 8]


@pytest.fixture(scope="module")
def algebras():
    return {sig: build_algebra_from_spec(ModuleSpec.minimal(sig)) for sig in SIGNATURES}


@pytest.mark.parametrize("sig", SIGNATURES)
def test_structure_constants_are_signed_units(algebras, sig):
    alg = algebras[sig]
    assert alg.constants
    for (i, j), (k, sign) in alg.constants.items():
        assert sign in (1, -1)
        assert 0 <= k < alg.d
        assert alg.bracket(j, i) == (k, -sign)


@pytest.mark.parametrize("sig", SIGNATURES)
def test_each_center_direction_pairs_every_vector(algebras, sig):
    alg = algebras[sig]
    for k, items in alg.constants_by_center().items():
        assert len(items) == alg.dim_h
        assert len({i for i, _, _ in items}) == alg.dim_h


def test_unbracketed_pairs_vanish(algebras):
    alg = algebras[(1, 0)]
    assert alg.bracket(0, 0) == (-1, 0)


def test_minimal_brackets_in_two_dimensions(algebras):
    heisenberg = algebras[(1, 0)]
    assert heisenberg.bracket(0, 1) == (0, 1)
    assert heisenberg.bracket(1, 0) == (0, -1)
    split = build_algebra_from_spec(ModuleSpec.minimal((0, 1)))
    assert split.module.metric == (1, -1)
    assert dict(split.constants) == {(0, 1): (0, 1), (1, 0): (0, -1)}


@pytest.mark.parametrize("sig", [(1, 1), (3, 0), (1, 3), (3, 1)])
def test_jacobi_identity(algebras, sig):
    assert jacobi_holds(algebras[sig])


def test_dimensions(algebras):
    alg = algebras[(1, 3)]
    assert (alg.dim_h, alg.half_dim, alg.d, alg.manifold_dimension) == (8, 4, 4, 12)
    assert algebras[(3, 1)].manifold_dimension == 12


def test_unverified_module_is_rejected():
    module = build_minimal_module((1, 1))
    broken = type(module)(module.signature, (module.generators[0],) * 2, module.metric, module.spec)
    with pytest.raises(UnverifiedModuleError):
        build_algebra(broken)


def test_algebra_dump_lists_every_constant(algebras):
    alg = algebras[(1, 1)]
    payload = algebra_to_dict(alg)
    assert payload["dim_h"] == 4 and payload["d"] == 2
    assert len(payload["constants"]) == len(alg.constants)
    assert payload["lattice"]["vertical_spacing"] == "1/2"


def test_group_product_identity_and_inverse(algebras):
    alg = algebras[(1, 1)]
    g = GroupElement((1, 0, Fraction(1, 2), 2), (3, -1))
    h = GroupElement((0, 1, 1, -1), (0, 2))
    e = GroupElement.identity(alg)
    assert group_product(g, e, alg) == g
    assert group_product(g, g.inverse(), alg) == e
    left = group_product(group_product(g, h, alg), g, alg)
    right = group_product(g, group_product(h, g, alg), alg)
    assert left == right


def test_group_product_center_term(algebras):
    alg = algebras[(1, 0)]
    x = GroupElement((1, 0), (0,))
    y = GroupElement((0, 1), (0,))
    k, sign = alg.bracket(0, 1)
    product = group_product(x, y, alg)
    assert product.z[k] == Fraction(sign, 2)
    commutator_z = product.z[k] - group_product(y, x, alg).z[k]
    assert commutator_z == sign


def test_group_product_checks_shapes(algebras):
    alg = algebras[(1, 1)]
    with pytest.raises(ValueError):
        group_product(GroupElement((1,), (0, 0)), GroupElement.identity(alg), alg)


def _random_centers(alg, count=100):
    rng = random.Random(20 + alg.r * 7 + alg.s)
    for _ in range(count):
        z = [rng.randint(-3, 3) for _ in range(alg.d)]
        if not any(z):
            z[0] = 1
        yield z


@pytest.mark.parametrize("sig", SIGNATURES)
def test_characteristic_polynomial_closed_form(algebras, sig):
    alg = algebras[sig]
    for z in _random_centers(alg):
        assert char_poly_squared(alg, z) == char_poly_closed_form(alg, z), z


@pytest.mark.slow
@pytest.mark.parametrize("sig", [sig for sig in SWEEP_SIGNATURES if sig not in SIGNATURES])
def test_characteristic_polynomial_closed_form_sweep(sig):
    alg = build_algebra_from_spec(ModuleSpec.minimal(sig))
    for z in _random_centers(alg):
        assert char_poly_squared(alg, z) == char_poly_closed_form(alg, z), z


def test_characteristic_polynomial_at_equal_norms(algebras):
    alg = algebras[(1, 3)]
    z = [2, 0, 2, 0]
    assert char_poly_squared(alg, z) == char_poly_closed_form(alg, z)


@pytest.mark.parametrize("sig,z", [((1, 1), (1, 2)), ((1, 3), (2, 1, -1, 3)), ((3, 1), (1, 0, 2, 2))])
def test_block_relations(algebras, sig, z):
    relations = check_block_relations(algebras[sig], z)
    assert all(relations.values()), [name for name, ok in relations.items() if not ok]


def test_block_relations_need_split(algebras):
    with pytest.raises(SignatureError):
        omega_blocks(algebras[(3, 0)], (1, 0, 0))


def test_omega_is_exact_or_numeric(algebras):
    alg = algebras[(1, 1)]
    exact = omega(alg, (1, Fraction(1, 2)))
    numeric = omega(alg, (1.0, 0.5))
    assert isinstance(exact, sympy.Matrix)
    assert np.allclose(np.array(exact.tolist(), dtype=float), numeric)
    assert exact.T == -exact


def test_heisenberg_omega(algebras):
    assert omega(algebras[(1, 0)], (1,)) == sympy.Matrix([[0, 1], [-1, 0]])
    assert omega(algebras[(1, 0)], (0,)) == sympy.zeros(2, 2)


@pytest.mark.parametrize("sig", SIGNATURES)
def test_omega_is_metric_times_transposed_action(algebras, sig):
    alg = algebras[sig]
    rng = random.Random(5 + alg.r * 11 + alg.s)
    tau = metric_diagonal(alg)
    for _ in range(10):
        z = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(alg.d)]
        assert omega(alg, z) == tau * module_action(alg, z).T, z


def test_rank_drops_exactly_on_equal_norms(algebras):
    alg = algebras[(1, 1)]
    assert omega(alg, (1, 1)).rank() == alg.dim_h - alg.half_dim
    assert omega(alg, (1, 2)).rank() == alg.dim_h
    alg = algebras[(1, 3)]
    assert omega(alg, (5, 3, 4, 0)).rank() == alg.dim_h - alg.half_dim


def test_omega_eigen_cases(algebras):
    h = algebras[(1, 0)]
    assert omega_eigen(h, (2,)) == ((2.0, 1), (-2.0, 1))
    mixed = omega_eigen(algebras[(1, 1)], (3, 4))
    assert mixed == ((7.0, 1), (1.0, 1), (-1.0, 1), (-7.0, 1))
    degenerate = omega_eigen(algebras[(1, 3)], (1, 1, 0, 0))
    assert dict((value, mult) for value, mult in degenerate)[0.0] == 4
    with pytest.raises(DomainError):
        omega_eigen(h, (0,))


def test_omega_eigen_matches_numeric_spectrum(algebras):
    alg = algebras[(3, 1)]
    tau = (0.3, -1.1, 0.4, 0.9)
    matrix = omega(alg, tau)
    moduli = sorted(abs(np.linalg.eigvals(matrix).imag))
    expected = sorted(abs(v) for v, mult in omega_eigen(alg, tau) for _ in range(mult))
    assert np.allclose(moduli, expected, atol=1e-10)


@pytest.mark.parametrize(
    "sig,vector",
    [
        ((1, 1), DualLatticeVector((1,), (1,))),
        ((1, 1), DualLatticeVector((2,), (-2,))),
        ((1, 3), DualLatticeVector((5,), (3, 4, 0))),
        ((1, 3), DualLatticeVector((2,), (0, 2, 0))),
        ((3, 1), DualLatticeVector((3, 0, 4), (5,))),
    ],
)
def test_kernel_lattice(algebras, sig, vector):
    alg = algebras[sig]
    lattice = kernel_lattice_basis(alg, vector)
    assert len(lattice.basis) == alg.half_dim
    reduced_sq = vector.mu_norm_sq // (lattice.d0 * lattice.d0)
    assert lattice.gram == tuple(
        tuple(2 * reduced_sq if i == j else 0 for j in range(alg.half_dim)) for i in range(alg.half_dim)
    )
    matrix = omega(alg, vector.coefficients)
    for column in lattice.basis:
        assert matrix * sympy.Matrix(column) == sympy.zeros(alg.dim_h, 1)


def test_kernel_lattice_rejects_regular_vectors(algebras):
    alg = algebras[(1, 1)]
    with pytest.raises(DomainError):
        kernel_lattice_basis(alg, DualLatticeVector((1,), (2,)))
    with pytest.raises(DomainError):
        kernel_lattice_basis(alg, DualLatticeVector.zero(1, 1))
    with pytest.raises(SignatureError):
        kernel_lattice_basis(algebras[(3, 0)], DualLatticeVector((1, 0, 0)))


def test_dual_vector_gcd():
    vector = DualLatticeVector((4, -6), (2,))
    assert vector.d0 == 2
    assert vector.functional == (8, -12, 4)
    assert (-vector).m == (-4, 6)
