import math

import numpy as np
import pytest

from src.components.constructions import catalogue
from src.components.critical_detection import CriticalSetFinder, find_critical_set, is_extremum
from src.components.expression_parser import parse
from src.entity.config_entity import Tolerances
from src.entity.function import TSFunction
from src.entity.region import CriticalKind
from src.exception import AccumulationError


def _f(text: str) -> TSFunction:
    return TSFunction(parse(text))


def test_sine_items(tol):
    critical_set = find_critical_set(_f("sin(x)"), (-7.0, 7.0), tol)
    loci = [item.point for item in critical_set]
    np.testing.assert_allclose(loci, [-1.5 * math.pi, -0.5 * math.pi, 0.5 * math.pi, 1.5 * math.pi], atol=1e-9)
    assert critical_set.values() == pytest.approx([1.0, -1.0, 1.0, -1.0], abs=1e-12)
    assert [item.kind for item in critical_set] == [CriticalKind.LOCAL_MAX, CriticalKind.LOCAL_MIN,
                                                    CriticalKind.LOCAL_MAX, CriticalKind.LOCAL_MIN]
    assert all(item.nondegenerate for item in critical_set)
    assert critical_set.gap == pytest.approx(2.0)
    assert not critical_set.truncated


def test_linear_function_has_no_critical_points(tol):
    critical_set = find_critical_set(_f("2*x+1"), (-3.0, 5.0), tol)
    assert len(critical_set) == 0
    assert critical_set.gap == math.inf


def test_cubic_inflection_is_a_degenerate_non_extremum(tol):
    critical_set = find_critical_set(_f("x^3"), (-1.0, 1.0), tol)
    assert len(critical_set) == 1
    item = critical_set.items[0]
    assert item.point == pytest.approx(0.0, abs=1e-6)
    assert item.kind == CriticalKind.NON_EXTREMUM
    assert not item.nondegenerate
    assert not is_extremum(item)


def test_sine_maximum_is_an_extremum(tol):
    critical_set = find_critical_set(_f("sin(x)"), (0.0, 3.0), tol)
    assert len(critical_set) == 1
    assert is_extremum(critical_set.items[0])


def test_touching_root_of_the_derivative_is_found(tol):
    # c' = (x - 0.3)^2 >= 0 never changes sign
    critical_set = find_critical_set(_f("(x-0.3)^3/3"), (-1.0, 1.1), tol)
    assert len(critical_set) == 1
    assert critical_set.items[0].point == pytest.approx(0.3, abs=1e-6)
    assert critical_set.items[0].kind == CriticalKind.NON_EXTREMUM


def test_constant_is_one_truncated_flat_interval(tol):
    critical_set = find_critical_set(_f("3"), (-2.0, 2.0), tol)
    assert len(critical_set) == 1
    item = critical_set.items[0]
    assert item.kind == CriticalKind.INTERVAL_FLAT
    assert item.locus == (-2.0, 2.0)
    assert item.truncated
    assert critical_set.interior_items() == []


def test_hyperbola_branch_has_single_minimum(tol):
    critical_set = find_critical_set(catalogue("c_H_plus_inf_r"), (-5.0, 5.0), tol)
    assert len(critical_set) == 1
    item = critical_set.items[0]
    assert item.point == pytest.approx(0.0, abs=1e-9)
    assert item.value == pytest.approx(1.0)
    assert item.kind == CriticalKind.LOCAL_MIN


def test_gaussian_sine_values_are_pairwise_distinct(tol):
    critical_set = find_critical_set(catalogue("gauss_sin"), (-6.0, 6.0), tol)
    values = critical_set.values()
    assert 4 <= len(values) < 20
    assert len(set(values)) == len(values)
    assert all(item.nondegenerate for item in critical_set)


def test_flank_signs_agree_with_kind(tol):
    f = catalogue("gauss_sin")
    for item in find_critical_set(f, (-6.0, 6.0), tol):
        left, right = f.derivative(np.array([item.point - tol.side, item.point + tol.side]))
        if item.kind == CriticalKind.LOCAL_MAX:
            assert left > 0 > right
        elif item.kind == CriticalKind.LOCAL_MIN:
            assert left < 0 < right


def test_refined_lattice_moves_no_locus(tol):
    coarse = find_critical_set(_f("sin(x)+0.3*cos(2*x)"), (-7.0, 7.0), tol)
    fine = CriticalSetFinder(Tolerances.from_dict({"lattice": 2 * tol.lattice})).find_critical_set(
        _f("sin(x)+0.3*cos(2*x)"), (-7.0, 7.0))
    assert len(coarse) == len(fine)
    for a, b in zip(coarse, fine):
        assert abs(a.point - b.point) <= 1e-10


def test_too_many_items_is_reported_as_accumulation():
    finder = CriticalSetFinder(Tolerances.from_dict({"max_items": 3}))
    with pytest.raises(AccumulationError):
        finder.find_critical_set(_f("sin(x)"), (-20.0, 20.0))


def test_critical_set_is_cached_per_window(tol):
    f = _f("cos(x)")
    assert f.critical_set((-4.0, 4.0), tol) is f.critical_set((-4.0, 4.0), tol)
