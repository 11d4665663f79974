import math

import numpy as np
import pytest

from src.components.constructions import (build_pair, catalogue, divergence_witnesses, rotate_graph, sup_derivative,
                                          verify_asymptotics, verify_pair)
from src.components.critical_detection import find_critical_set
from src.components.expression_parser import parse
from src.entity.artifact_entity import AsymptoticClaim
from src.entity.function import TSFunction
from src.exception import MonotonicityError, ParameterRangeError


def test_logistic_step_closed_form():
    x = np.linspace(-30.0, 30.0, 61)
    f = catalogue("c_e_p1_p2", {"p1": 0.0, "p2": 1.0})
    np.testing.assert_allclose(f.value(x), 1.0 / (np.exp(x) + 1.0), rtol=1e-12, atol=1e-15)


def test_hyperbola_branch_identity():
    p1, p2 = 0.5, 2.0
    f = catalogue("c_H_p1_p2", {"p1": p1, "p2": p2})
    assert catalogue("c_H_p1_p2").value(0.0) == pytest.approx(1.0)
    x = np.linspace(-50.0, 50.0, 101)
    y = f.value(x)
    np.testing.assert_allclose((y - p1) * (y - p1 - x), p2, rtol=1e-9)


@pytest.mark.parametrize("name, params", [
    ("c_H_p1_p2", {"p2": 0.0}),
    ("c_H_plus_inf_r", {"r": -1.0}),
    ("c_e_p1_p2", {"p1": 1.0, "p2": 1.0}),
    ("c_p0", {"p": [1.0, 0.0, -1.0]}),
    ("c_p0", {"q": 1.0}),
    ("not_a_function", {}),
])
def test_parameter_range_errors(name, params):
    with pytest.raises(ParameterRangeError):
        catalogue(name, params)


def test_unknown_theorem_and_unused_parameter():
    with pytest.raises(ParameterRangeError):
        build_pair("7")
    with pytest.raises(ParameterRangeError):
        build_pair("6a", {"p": [1.0]})


def test_hyperbola_pair_is_separated():
    c1, c2 = build_pair("4")
    x = np.linspace(-20.0, 20.0, 4001)
    assert np.all(c2.value(x) > c1.value(x))


def test_logistic_pair_stays_between_the_limits():
    c1, c2 = build_pair("6a")
    x = np.linspace(-3.0, 3.0, 2001)
    for f in (c1, c2):
        values = f.value(x)
        assert np.all((0.0 < values) & (values < 1.0))


def test_lower_hyperbola_of_5a_has_no_critical_points(tol):
    c1, _ = build_pair("5a")
    assert len(find_critical_set(c1, (-10.0, 10.0), tol)) == 0


def test_verify_pair_for_hyperbola_construction(tol):
    c1, c2 = build_pair("4")
    check = verify_pair("4", c1, c2, windows=(2.0,), tol=tol)
    assert check.checks["image_bounds"]
    assert check.checks["separation[2]"]
    assert check.detail["windows"] == [2.0]
    assert check.checks["c1 diverge at +inf"]


def test_verify_pair_caps_windows_where_oscillation_outruns_the_lattice(tol):
    c1, c2 = build_pair("4")
    check = verify_pair("4", c1, c2, windows=(2.0, 10.0), tol=tol)
    assert check.detail["windows"] == [2.0]


def test_logistic_limit_at_plus_infinity():
    f = catalogue("c_e_p1_p2", {"p1": 0.0, "p2": 1.0})
    assert verify_asymptotics(f, AsymptoticClaim(1, "limit", 0.0)).consistent
    assert verify_asymptotics(f, AsymptoticClaim(-1, "limit", 1.0)).consistent


@pytest.mark.parametrize("side", [-1, 1])
def test_hyperbola_diverges_on_both_sides(side):
    assert verify_asymptotics(catalogue("c_H_plus_inf_r"), AsymptoticClaim(side, "diverge", 1.0)).consistent


def test_sine_has_no_limit():
    report = verify_asymptotics(TSFunction(parse("sin(x)")), AsymptoticClaim(1, "limit", 0.0))
    assert not report.consistent
    assert report.confidence == "full"


def test_bump_witnesses_grow():
    witness = divergence_witnesses("c_p0", 5, side=1, sign=1)
    assert witness.mode == "divergence"
    assert len(witness) == 5
    xs = [x for x, _ in witness.points]
    slopes = [d1 for _, d1 in witness.points]
    assert xs == sorted(xs)
    assert all(d1 > 0 for d1 in slopes)
    assert slopes == sorted(slopes)


def test_negative_witnesses_carry_negative_slope():
    witness = divergence_witnesses("c_p0", 3, side=-1, sign=-1)
    assert len(witness) == 3
    assert all(d1 < 0 for _, d1 in witness.points)
    assert all(x < 0 for x, _ in witness.points)


def test_one_sided_bump_decays_on_the_left():
    witness = divergence_witnesses("c_p00", 5, side=-1)
    assert witness.mode == "limit"
    slopes = [abs(d1) for _, d1 in witness.points]
    assert slopes == sorted(slopes, reverse=True)
    assert slopes[-1] < 1e-3


def test_zero_witnesses_and_unknown_name():
    assert len(divergence_witnesses("c_p0", 0)) == 0
    with pytest.raises(ParameterRangeError):
        divergence_witnesses("sin", 3)


@pytest.fixture(scope="module")
def rotated_bump():
    return rotate_graph(TSFunction(parse("1/(x^2+1)")), 0.5, (0.7, 1.5), (-10.0, 10.0))


def test_rotated_bump_critical_points_sit_over_slope_a_c(rotated_bump, tol):
    graph = rotated_bump.evaluator
    assert graph.bounds_hold
    critical_set = find_critical_set(rotated_bump, graph.mapped_window, tol)
    assert len(critical_set) == 2
    c0 = TSFunction(parse("1/(x^2+1)"))
    for item in critical_set:
        x = float(graph.preimage(item.point)[0])
        assert abs(float(c0.derivative(x)) - 0.5) < 1e-6


def test_rotation_is_an_isometry(rotated_bump):
    graph = rotated_bump.evaluator
    x = np.linspace(-9.0, 9.0, 37)
    c, u = graph.graph_point(x)
    np.testing.assert_allclose(rotated_bump.value(u), c, atol=1e-10)
    np.testing.assert_allclose(c ** 2 + u ** 2, (1.0 / (x ** 2 + 1)) ** 2 + x ** 2, rtol=1e-10)


def test_preimage_outside_the_table_is_bracketed(rotated_bump):
    graph = rotated_bump.evaluator
    u = graph.mapped_window[1] + 5.0
    x = float(graph.preimage(u)[0])
    assert float(graph.u2(x)) == pytest.approx(u, abs=1e-9)


def test_non_monotone_rotation_is_rejected():
    with pytest.raises(MonotonicityError):
        rotate_graph(TSFunction(parse("3*sin(x)")), 1.0, (1.2, 1.5), (-10.0, 10.0))


def test_rotation_bounds_are_validated():
    with pytest.raises(ParameterRangeError):
        rotate_graph(TSFunction(parse("0")), 2.0, (0.6, 1.5), (-1.0, 1.0))
    with pytest.raises(ParameterRangeError):
        rotate_graph(TSFunction(parse("0")), 0.5, (1.5, 0.6), (-1.0, 1.0))


def test_rotated_line_has_no_critical_points(tol):
    rotated = rotate_graph(TSFunction(parse("0")), 0.5, (0.6, 2.0), (-5.0, 5.0))
    assert len(find_critical_set(rotated, rotated.evaluator.mapped_window, tol)) == 0


def test_sup_derivative_of_bump():
    assert sup_derivative(TSFunction(parse("1/(x^2+1)")), (-5.0, 5.0)) == pytest.approx(
        3.0 * math.sqrt(3.0) / 8.0, rel=1e-9)


def test_bump_rotated_at_its_steepest_slope(tol):
    bump = TSFunction(parse("1/(x^2+1)"))
    a_c = sup_derivative(bump, (-10.0, 10.0))
    rotated = rotate_graph(bump, a_c, (0.7, 1.5), (-10.0, 10.0))
    graph = rotated.evaluator
    assert graph.bounds_hold and graph.bound_violation is None
    critical_set = find_critical_set(rotated, graph.mapped_window, tol)
    assert len(critical_set) >= 1
    for item in critical_set:
        x = float(graph.preimage(item.point)[0])
        assert abs(float(bump.derivative(x)) - a_c) < 1e-6
        assert x == pytest.approx(-1.0 / math.sqrt(3.0), abs=1e-3)
    assert verify_asymptotics(rotated, AsymptoticClaim(1, "diverge", -1.0)).consistent
    assert verify_asymptotics(rotated, AsymptoticClaim(-1, "diverge", 1.0)).consistent


def test_rotated_sine_reports_where_the_slope_bound_fails(tol):
    rotated = rotate_graph(TSFunction(parse("sin(x)")), 0.5, (1.0, 1.5), (-10.0, 10.0))
    graph = rotated.evaluator
    assert not graph.bounds_hold
    x, slope = graph.bound_violation
    assert abs(math.cos(x) + 1.0) < 1e-4
    assert slope == pytest.approx(math.cos(x)) and slope < -1.0 / 1.5
    critical_set = find_critical_set(rotated, graph.mapped_window, tol)
    assert len(critical_set) == 6
    for item in critical_set:
        assert abs(math.cos(float(graph.preimage(item.point)[0])) - 0.5) < 1e-6
    assert verify_asymptotics(rotated, AsymptoticClaim(1, "diverge", -1.0)).consistent
    assert verify_asymptotics(rotated, AsymptoticClaim(-1, "diverge", 1.0)).consistent


def test_bump_over_polynomial_derivative_closed_form():
    x = np.linspace(-2.0, 2.0, 1000)
    f = catalogue("c_p0")
    e = np.exp(x ** 2)
    p = 1.0 + x ** 2
    numerator_terms = (2 * x * e * np.cos(e) * p, (2.0 + np.sin(e)) * 2 * x)
    expected = (numerator_terms[0] - numerator_terms[1]) / p ** 2
    scale = (np.abs(numerator_terms[0]) + np.abs(numerator_terms[1])) / p ** 2
    assert np.all(np.abs(f.derivative(x) - expected) <= 1e-10 * scale + 1e-15)
    np.testing.assert_allclose(f.value(x), (2.0 + np.sin(e)) / p, rtol=1e-12)


def test_logistic_step_derivative_and_offset_identities():
    p1, p2 = 0.5, 3.0
    x = np.linspace(-5.0, 5.0, 1000)
    f = catalogue("c_e_p1_p2", {"p1": p1, "p2": p2})
    np.testing.assert_allclose(f.derivative(x), (p1 - p2) * np.exp(x) / (np.exp(x) + 1.0) ** 2, rtol=1e-10)
    np.testing.assert_allclose(f.value(x) - p1, (p2 - p1) / (np.exp(x) + 1.0), rtol=1e-10)
