from __future__ import annotations

import math

import mpmath
import pytest

from clifford_rep.modules import ModuleSpec
from common import config
from common.errors import DomainError, SignatureError, TruncationError
from heat_trace.components import (
    SpectralProfile,
    component_trace,
    component_trace_general,
    multiple_module_power_check,
)
from heat_trace.lattice_sums import exact_gcd_counts, lattice_theta, norm_counts, theta_series
from heat_trace.spectrum import recover_module_dimension, spectrum_s0, trace_from_spectrum
from heat_trace.totals import TraceControls, heat_trace_series, laplacian_total_trace, total_trace
from htype_algebra.algebra import build_algebra_from_spec
from htype_algebra.lattice import DualLatticeVector


def _algebra(sig, text="minimal"):
    return build_algebra_from_spec(ModuleSpec.parse(sig, text))


@pytest.fixture(scope="module")
def h3():
    return _algebra((1, 0))


@pytest.fixture(scope="module")
def h5():
    return _algebra((1, 0), "p:2")


@pytest.fixture(scope="module")
def pair():
    return _algebra((1, 3)), _algebra((3, 1))


# --- lattice sums -------------------------------------------------------------------


@pytest.mark.parametrize("c", [0.05, 0.5, 1.0, 3.0, 10.0])
def test_theta_series_matches_jacobi_theta(c):
    value, error = theta_series(c, mpmath.fp)
    assert value == pytest.approx(float(mpmath.jtheta(3, 0, mpmath.exp(-c))), rel=1e-13)
    assert error < 1e-15 * value


@pytest.mark.parametrize("t", [0.01, 0.1, 0.7, 2.0])
def test_theta_poisson_identity(t):
    left, _ = theta_series(1 / (2 * t), mpmath.fp)
    right, _ = theta_series(2 * math.pi ** 2 * t, mpmath.fp)
    assert left == pytest.approx(math.sqrt(2 * math.pi * t) * right, rel=1e-12)


def test_theta_series_rejects_nonpositive():
    with pytest.raises(DomainError):
        theta_series(0.0, mpmath.fp)


def test_lattice_theta_diagonal_and_general_agree():
    diagonal, _ = lattice_theta([[2, 0], [0, 2]], 0.4, mpmath.fp)
    single, _ = theta_series(0.8, mpmath.fp)
    assert diagonal == pytest.approx(single ** 2, rel=1e-14)
    general, tail = lattice_theta([[2, 1], [1, 2]], 0.5, mpmath.fp)
    direct = sum(
        math.exp(-0.5 * (2 * a * a + 2 * a * b + 2 * b * b)) for a in range(-30, 31) for b in range(-30, 31)
    )
    assert general == pytest.approx(direct, rel=1e-13)
    assert tail < 1e-15


def test_norm_counts():
    assert norm_counts(2, 5) == (1, 4, 4, 0, 4, 8)
    assert norm_counts(1, 4) == (1, 2, 0, 0, 2)
    assert norm_counts(0, 3) == (1, 0, 0, 0)
    assert sum(norm_counts(3, 3)) == 1 + 6 + 12 + 8


def test_exact_gcd_counts():
    counts = norm_counts(2, 25)
    # |v|^2 = 25 in Z^2: (+-5, 0), (0, +-5) have gcd 5; the 8 permutations of (+-3, +-4) gcd 1
    assert exact_gcd_counts(2, 25, counts) == {1: 8, 5: 4}
    assert exact_gcd_counts(2, 4, counts) == {2: 4}
    with pytest.raises(ValueError):
        exact_gcd_counts(2, 0, counts)


# --- component traces ----------------------------------------------------------------

COMPONENT_CASES = [
    ((1, 0), "minimal", DualLatticeVector((0,))),
    ((1, 0), "minimal", DualLatticeVector((3,))),
    ((3, 0), "minimal", DualLatticeVector((1, -2, 2))),
    ((1, 1), "minimal", DualLatticeVector((1,), (2,))),
    ((1, 1), "minimal", DualLatticeVector((1,), (1,))),
    ((1, 1), "minimal", DualLatticeVector((2,), (-2,))),
    ((1, 1), "minimal", DualLatticeVector((0,), (1,))),
    ((1, 3), "minimal", DualLatticeVector((5,), (3, 4, 0))),
    ((1, 3), "minimal", DualLatticeVector((2,), (0, 2, 0))),
    ((1, 3), "minimal", DualLatticeVector((1,), (1, 1, 1))),
    ((3, 1), "minimal", DualLatticeVector((3, 0, 4), (5,))),
    ((3, 1), "p+:1,p-:1", DualLatticeVector((1, 1, 0), (1,))),
]


@pytest.mark.parametrize("sig,text,vector", COMPONENT_CASES)
@pytest.mark.parametrize("t", [0.05, 0.2, 1.0])
def test_component_formula_matches_general_evaluation(sig, text, vector, t):
    alg = _algebra(sig, text)
    assert component_trace(alg, vector, t) == pytest.approx(component_trace_general(alg, vector, t), rel=1e-12)


def test_component_depends_only_on_norms_and_gcd():
    alg = _algebra((1, 3))
    a = component_trace(alg, DualLatticeVector((5,), (3, 4, 0)), 0.1)
    b = component_trace(alg, DualLatticeVector((-5,), (0, 0, 5)), 0.1)
    assert a == b


def test_component_extended_precision_agrees(h5):
    vector = DualLatticeVector((2,))
    double = component_trace(h5, vector, 0.3)
    extended = component_trace(h5, vector, 0.3, precision="extended")
    assert float(extended) == pytest.approx(double, rel=1e-13)


@pytest.mark.parametrize(
    "vector", [DualLatticeVector((0,), (0,)), DualLatticeVector((1,), (1,)), DualLatticeVector((2,), (1,))]
)
def test_multiple_module_power_law(vector):
    minimal = _algebra((1, 1))
    doubled = _algebra((1, 1), "p+:2")
    assert multiple_module_power_check(doubled, minimal, vector, 0.15)


def test_component_rejects_bad_input(h3):
    with pytest.raises(DomainError):
        component_trace(h3, DualLatticeVector((1,)), 0.0)
    with pytest.raises(ValueError):
        component_trace(h3, DualLatticeVector((1,), (1,)), 0.5)


# --- totals ---------------------------------------------------------------------------


def test_heisenberg_three_leading_term(h3):
    result = total_trace(h3, 0.02)
    assert 0.02 ** 2 * result.value == pytest.approx(1 / 16, abs=1e-10)
    assert result.tail_bound <= 2e-13


def test_heisenberg_five_leading_term(h5):
    result = total_trace(h5, 0.02)
    assert 0.02 ** 3 * result.value == pytest.approx(1 / (48 * math.pi), abs=1e-10)


def test_profile_and_algebra_give_the_same_trace(h5):
    assert total_trace(SpectralProfile(2, 1, 0), 0.3).value == total_trace(h5, 0.3).value


@pytest.mark.parametrize("t", [0.1, 0.5, 1.5])
def test_swapped_signature_traces_agree(pair, t):
    first, second = pair
    a, b = total_trace(first, t), total_trace(second, t)
    assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound + 1e-12 * abs(a.value)


@pytest.mark.parametrize("t", [0.1, 0.5])
def test_swapped_signature_laplacian_traces_agree(pair, t):
    first, second = pair
    a, b = laplacian_total_trace(first, t), laplacian_total_trace(second, t)
    assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound + 1e-12 * abs(a.value)


def test_laplacian_trace_is_smaller(h3):
    assert laplacian_total_trace(h3, 0.2).value < total_trace(h3, 0.2).value


def test_extended_precision_total_agrees(h3):
    double = total_trace(h3, 0.5)
    extended = total_trace(h3, 0.5, TraceControls(precision="extended"))
    assert float(extended.value) == pytest.approx(double.value, rel=1e-13)


def test_relative_tolerance_relaxes_target(h3):
    strict = total_trace(h3, 0.05)
    relaxed = total_trace(h3, 0.05, TraceControls(relative_tolerance=1e-6))
    assert relaxed.tail_bound >= strict.tail_bound
    assert relaxed.value == pytest.approx(strict.value, rel=1e-6)


def test_radius_cap_raises_truncation_error(h3, monkeypatch):
    monkeypatch.setattr(config, "MAX_LATTICE_RADIUS", 4)
    with pytest.raises(TruncationError) as info:
        total_trace(h3, 0.5, TraceControls(tail_tolerance=1e-300))
    assert info.value.radius == 4


def test_nonpositive_time(h3):
    with pytest.raises(DomainError):
        total_trace(h3, -0.1)
    with pytest.raises(DomainError):
        heat_trace_series(h3, [0.1, 0.0])


def test_controls_validation():
    with pytest.raises(ValueError):
        TraceControls(lattice_radius=0)
    with pytest.raises(ValueError):
        TraceControls(precision="quad")


def test_series_is_sorted_and_thread_independent(h5):
    t_values = [1.0, 0.1, 0.5, 0.25]
    threaded = heat_trace_series(h5, t_values, threads=4)
    sequential = heat_trace_series(h5, t_values, threads=1)
    assert threaded.t_values == (0.1, 0.25, 0.5, 1.0)
    assert threaded.values == sequential.values
    assert [row[0] for row in threaded.rows()] == [0.1, 0.25, 0.5, 1.0]


# --- explicit s = 0 spectrum ----------------------------------------------------------


def test_first_beta_eigenvalue_of_heisenberg_three(h3):
    table = spectrum_s0(h3, 50.0)
    beta = [entry for entry in table.entries if entry.series == "beta"]
    assert beta[0].eigenvalue == pytest.approx(4 * math.pi)
    assert beta[0].multiplicity == 8
    assert table.entries[0].eigenvalue == 0 and table.entries[0].multiplicity == 1


@pytest.mark.parametrize("sig,text", [((1, 0), "minimal"), ((1, 0), "p:2"), ((3, 0), "minimal")])
@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
def test_spectrum_sum_matches_total_trace(sig, text, t):
    alg = _algebra(sig, text)
    table = spectrum_s0(alg, 2000.0)
    from_spectrum = trace_from_spectrum(table, t)
    total = total_trace(alg, t)
    slack = from_spectrum.tail_bound + total.tail_bound + 1e-11 * total.value
    assert abs(from_spectrum.value - total.value) <= slack


@pytest.mark.parametrize("text,dimension", [("minimal", 2), ("p:2", 4), ("p:3", 6)])
def test_module_dimension_read_from_spectrum(text, dimension):
    table = spectrum_s0(_algebra((1, 0), text), 30.0)
    assert recover_module_dimension(table) == dimension


def test_spectrum_needs_positive_definite_center():
    with pytest.raises(SignatureError):
        spectrum_s0(_algebra((1, 1)), 100.0)
    with pytest.raises(DomainError):
        spectrum_s0(SpectralProfile(1, 1, 0), 0.0)
    with pytest.raises(DomainError):
        recover_module_dimension(spectrum_s0(SpectralProfile(1, 1, 0), 10.0))
