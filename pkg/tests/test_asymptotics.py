from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from asymptotics.heisenberg import heisenberg_match, heisenberg_trace
from asymptotics.leading_coefficient import (
    LeadingCoefficient,
    convention_volume,
    injectivity_scan,
    leading_coefficient_quadrature,
    leading_coefficient_zeta,
    multiple_hurwitz_zeta,
)
from asymptotics.probe import ProbeVerdict, expansion_difference_probe
from asymptotics.volume import radial_profile, sphere_measure, volume_function, volume_integral
from clifford_rep.modules import ModuleSpec
from common.errors import DomainError
from heat_trace.components import SpectralProfile
from heat_trace.totals import TraceControls, TraceResult, total_trace
from htype_algebra.algebra import build_algebra_from_spec


def _algebra(sig, text="minimal"):
    return build_algebra_from_spec(ModuleSpec.parse(sig, text))


@pytest.fixture(scope="module")
def m12():
    return _algebra((1, 3))


@pytest.fixture(scope="module")
def match12(m12):
    return heisenberg_match(m12, "lebesgue")


# --- volume function ------------------------------------------------------------------


def test_volume_function_values():
    h3 = _algebra((1, 0))
    assert volume_function(h3, (0.0,)) == 1.0
    assert volume_function(h3, (1.0,)) == pytest.approx(1 / math.sinh(1))
    mixed = _algebra((1, 1))
    assert volume_function(mixed, (3.0, 4.0)) == pytest.approx(7 / math.sinh(7) / math.sinh(1), rel=1e-14)


def test_volume_function_depends_on_block_norms(m12):
    a = volume_function(m12, (1.0, 2.0, 0.0, 0.0))
    b = volume_function(m12, (-1.0, 0.0, 0.0, 2.0))
    c = volume_function(m12, (1.0, 0.0, -2.0, 0.0))
    assert a == pytest.approx(b, rel=1e-15) and a == pytest.approx(c, rel=1e-15)


def test_volume_function_continuous_across_equal_norms():
    alg = _algebra((1, 1))
    at_equal = volume_function(alg, (1.0, 1.0))
    near = volume_function(alg, (1.0, 1.0 + 1e-3))
    assert abs(near - at_equal) <= 1e-3
    assert at_equal == pytest.approx(2 / math.sinh(2))


def test_volume_function_length_check(m12):
    with pytest.raises(ValueError):
        volume_function(m12, (1.0, 2.0))


def test_sphere_measure():
    assert sphere_measure(1) == pytest.approx(2.0)
    assert sphere_measure(2) == pytest.approx(2 * math.pi)
    assert sphere_measure(3) == pytest.approx(4 * math.pi)


def test_volume_integral_heisenberg():
    value, error = volume_integral(1, 1, 0)
    assert value == pytest.approx(math.pi ** 2 / 2, rel=1e-10)
    assert error < 1e-8


def test_volume_integral_rejects_bad_parameters():
    with pytest.raises(ValueError):
        volume_integral(0, 1, 0)
    with pytest.raises(ValueError):
        volume_integral(2, 0, 0)


def test_radial_profile_matches_volume_function():
    alg = _algebra((1, 1))
    grid = radial_profile(alg.half_dim, 1, 1, np.array([3.0, 1.0]), np.array([4.0, 1.0]))
    assert grid[0] == pytest.approx(volume_function(alg, (3.0, 4.0)))
    assert grid[1] == pytest.approx(volume_function(alg, (1.0, 1.0)))


# --- leading coefficient --------------------------------------------------------------


def test_conventions():
    assert convention_volume("unit", 3) == 1.0
    assert convention_volume("lebesgue", 3) == 0.125
    assert convention_volume("paper", 3) == 1.0
    with pytest.raises(ValueError):
        convention_volume("fundamental-domain", 1)


def test_heisenberg_three_coefficient():
    h3 = _algebra((1, 0))
    unit = leading_coefficient_quadrature(h3)
    assert unit.value == pytest.approx(1 / 8, abs=1e-8)
    assert unit.method == "quadrature"
    assert leading_coefficient_quadrature(h3, "lebesgue").value == pytest.approx(1 / 16, abs=1e-8)
    assert leading_coefficient_zeta(1, 1).value == pytest.approx(1 / 8, rel=1e-12)


def test_heisenberg_five_coefficient():
    assert leading_coefficient_zeta(2, 1).value == pytest.approx(1 / (24 * math.pi), rel=1e-12)


def test_volume_override():
    h3 = _algebra((1, 0))
    assert leading_coefficient_quadrature(h3, volume=2.0).value == pytest.approx(0.25, abs=1e-8)
    with pytest.raises(DomainError):
        leading_coefficient_quadrature(h3, volume=0.0)


def test_coefficient_must_be_positive():
    with pytest.raises(DomainError):
        LeadingCoefficient(0.0, "quadrature", 0.0, "unit", 1.0)


def test_multiple_hurwitz_zeta():
    value, error = multiple_hurwitz_zeta(1, 2, 0.5)
    assert value == pytest.approx(math.pi ** 2 / 2, rel=1e-14)
    assert error < 1e-20
    # zeta_2(5, 1) = sum_m (m + 1) (m + 1)^-5 = zeta(4)
    assert multiple_hurwitz_zeta(2, 5, 1)[0] == pytest.approx(math.pi ** 4 / 90, rel=1e-14)


@pytest.mark.parametrize("n,s,a", [(0, 3, 1), (2, 2, 1), (1, 3, 0)])
def test_multiple_hurwitz_zeta_domain(n, s, a):
    with pytest.raises(DomainError):
        multiple_hurwitz_zeta(n, s, a)


@pytest.mark.parametrize("half_dim,d", [(1, 1), (2, 1), (1, 2), (4, 1), (2, 3)])
@pytest.mark.parametrize("convention", ["unit", "lebesgue"])
def test_zeta_closed_form_matches_quadrature(half_dim, d, convention):
    profile = SpectralProfile(half_dim, d, 0)
    quadrature = leading_coefficient_quadrature(profile, convention)
    closed = leading_coefficient_zeta(half_dim, d, convention)
    assert closed.value == pytest.approx(quadrature.value, rel=1e-8)
    assert closed.method == "zeta_closed_form"


def test_swapped_signatures_share_the_coefficient(m12):
    a = leading_coefficient_quadrature(m12)
    b = leading_coefficient_quadrature(_algebra((3, 1)))
    assert a.value == pytest.approx(b.value, rel=1e-8)


def test_injectivity_scan():
    assert injectivity_scan(2).min_gap == math.inf
    assert injectivity_scan(2).to_dict()["min_gap"] is None
    report = injectivity_scan(6)
    assert len(report.values) == 5
    assert report.min_gap > 0
    assert report.closest is not None
    with pytest.raises(DomainError):
        injectivity_scan(1)


# --- Heisenberg match -----------------------------------------------------------------


def test_match_dimensions(match12):
    assert match12.n == 7
    assert (match12.manifold_dimension, match12.heisenberg_dimension) == (12, 15)
    assert match12.matched_coefficient() == pytest.approx(match12.cM.value, rel=1e-8)
    assert match12.alpha > 0
    assert match12.to_dict()["dims"] == {"manifold": 12, "heisenberg": 15}


def test_match_defaults_to_unit_volume(m12, match12):
    unit = heisenberg_match(m12)
    assert unit.cM.convention == "unit" and unit.cH1.convention == "unit"
    assert heisenberg_match(m12, "paper").alpha == unit.alpha
    # Vol(M) = 2^-4 against Vol(H_1) = 2^-1
    assert unit.alpha ** 8 == pytest.approx(8 * match12.alpha ** 8, rel=1e-7)


def test_match_needs_several_center_directions():
    with pytest.raises(DomainError):
        heisenberg_match(_algebra((1, 0)))


def test_matched_heisenberg_trace_leading_term(match12):
    t = 0.02 * match12.alpha
    result = heisenberg_trace(match12, t)
    assert t ** 8 * result.value == pytest.approx(match12.cM.value, rel=1e-7)


@pytest.mark.slow
def test_nilmanifold_trace_leading_term(m12, match12):
    t = 0.03
    result = total_trace(m12, t, TraceControls(relative_tolerance=1e-12))
    assert t ** 8 * result.value == pytest.approx(match12.cM.value, rel=1e-5)


# --- expansion probe ------------------------------------------------------------------

PROBE_T = (0.04, 0.03, 0.02, 0.015, 0.01)


def test_probe_identical_traces():
    h3 = _algebra((1, 0))
    trace = lambda t: total_trace(h3, t)
    report = expansion_difference_probe(trace, trace, PROBE_T[:3], precision="double")
    assert report.verdict is ProbeVerdict.IDENTICAL
    assert report.to_dict()["verdict"] == "Identical"


def test_probe_detects_polynomial_difference():
    h3, h5 = _algebra((1, 0)), _algebra((1, 0), "p:2")
    report = expansion_difference_probe(
        lambda t: total_trace(h3, t), lambda t: total_trace(h5, t), PROBE_T, precision="double"
    )
    assert report.verdict is ProbeVerdict.POLYNOMIAL
    assert len(report.slopes) == len(PROBE_T) - 1
    assert all(-4.0 < slope < -2.5 for slope in report.slopes)
    assert [row.t for row in report.rows] == sorted(PROBE_T, reverse=True)


def test_noise_floor_follows_returned_values():
    a = lambda t: TraceResult(1.0, 0.0)
    b = lambda t: TraceResult(1.0 + 4e-15, 0.0)
    report = expansion_difference_probe(a, b, (0.2, 0.1), precision="extended")
    double_floor = 64 * 2.0 ** -52 * (2.0 + 4e-15)
    assert [row.noise_floor for row in report.rows] == pytest.approx([double_floor] * 2)
    assert report.verdict is ProbeVerdict.INCONCLUSIVE

    def extended(shift):
        def trace(t):
            with mpmath.workdps(40):
                return TraceResult(mpmath.mpf(1) + shift * mpmath.mpf(10) ** -20 * mpmath.mpf(t), 0.0)
        return trace

    c, d = extended(0), extended(1)
    report = expansion_difference_probe(c, d, (0.2, 0.1))
    assert all(row.noise_floor < 1e-30 for row in report.rows)
    assert report.slopes == pytest.approx([1.0])
    capped = expansion_difference_probe(c, d, (0.2, 0.1), precision="double")
    assert capped.verdict is ProbeVerdict.INCONCLUSIVE


def test_probe_rejects_bad_times():
    trace = lambda t: total_trace(SpectralProfile(1, 1, 0), t)
    with pytest.raises(DomainError):
        expansion_difference_probe(trace, trace, [])
    with pytest.raises(DomainError):
        expansion_difference_probe(trace, trace, [0.6, 0.1])


@pytest.mark.slow
def test_probe_against_matched_heisenberg_is_not_polynomial(m12, match12):
    report = expansion_difference_probe(
        lambda t: total_trace(m12, t, TraceControls(relative_tolerance=1e-12)),
        lambda t: heisenberg_trace(match12, t, TraceControls(relative_tolerance=1e-12)),
        (0.2, 0.15, 0.1, 0.07, 0.05),
        precision="double",
    )
    assert report.verdict is not ProbeVerdict.POLYNOMIAL
