import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.components.constructions import catalogue
from src.components.critical_detection import find_critical_set
from src.components.expression_parser import parse
from src.components.reeb_sweep import (ReebSweep, _same_relative, _same_value, build_reeb_graph, check_cw_hypotheses,
                                       predict_mthm2, value_clusters)
from src.components.stability import morse_check
from src.components.strip_slicer import make_region
from src.entity.config_entity import SweepConfig
from src.entity.function import TSFunction
from src.entity.reeb_graph import CRITICAL, CUT, END
from src.exception import DegenerateEventError, HypothesisViolation


def expression_function(text: str) -> TSFunction:
    return TSFunction(parse(text))


def assert_multiset(found, expected, abs_tol=1e-9):
    assert [degree for _, degree in found] == [degree for _, degree in expected]
    assert [height for height, _ in found] == pytest.approx([height for height, _ in expected], abs=abs_tol)


@pytest.fixture(scope="module")
def sin_graph(sin_region):
    return build_reeb_graph(sin_region)


def test_shifted_sine_vertex_multiset(sin_graph):
    assert_multiset(sin_graph.degree_multiset(),
                    [(-1.0, 1), (-1.0, 1), (0.0, 3), (0.0, 3), (1.0, 3), (1.0, 3), (2.0, 1), (2.0, 1)])
    assert sin_graph.heights == pytest.approx((-1.0, 2.0))


def test_edges_point_upward(sin_graph):
    heights = {v.id: v.height for v in sin_graph.vertices}
    assert sin_graph.edges
    for edge in sin_graph.edges:
        assert heights[edge.lo] < heights[edge.hi]


def test_extremum_vertices_have_degree_one(sin_graph):
    for vertex in sin_graph.interior_vertices():
        if sin_graph.is_local_extremum(vertex.id):
            assert vertex.degree == 1
        else:
            assert vertex.degree == 3


def test_degree_counts_match_edges(sin_graph):
    for vertex in sin_graph.vertices:
        assert vertex.degree == sin_graph.up_degree(vertex.id) + sin_graph.down_degree(vertex.id)


def test_vertex_ids_follow_height_order(sin_graph):
    assert [v.id for v in sin_graph.vertices] == list(range(len(sin_graph.vertices)))
    assert [v.height for v in sin_graph.vertices] == sorted(v.height for v in sin_graph.vertices)


def test_band_counts_hold_between_events(sin_region, sin_graph):
    check = ReebSweep().check_bands(sin_region, sin_graph)
    assert check.holds, check.failures
    assert check.bands_checked == len(sin_graph.bands)


def test_sweep_is_deterministic(sin_region, sin_graph):
    assert build_reeb_graph(sin_region) == sin_graph


def test_prediction_for_shifted_sine_matches_the_graph(sin_region, sin_graph, tol):
    prediction = predict_mthm2(sin_region.c1.critical_set(sin_region.window, tol), 1.0)
    assert len(prediction) == 8
    comparison = ReebSweep().compare_prediction(sin_graph, prediction)
    assert comparison.matches, comparison.mismatches
    assert comparison.compared == 4
    assert comparison.height_window == pytest.approx((0.0, 1.0))


def test_prediction_for_cubic_inflection(tol):
    prediction = predict_mthm2(find_critical_set(expression_function("x^3"), (-1.0, 1.0), tol), 0.5)
    assert_multiset(prediction.multiset(), [(0.0, 2), (0.5, 2)])


def test_prediction_without_critical_points_is_empty(tol):
    prediction = predict_mthm2(find_critical_set(expression_function("2*x"), (-1.0, 1.0), tol), 0.5)
    assert len(prediction) == 0


@pytest.mark.parametrize("a", [0.0, -1.0, 2.5, 3.5])
def test_prediction_rejects_shift_outside_the_gap(sin_region, tol, a):
    with pytest.raises(HypothesisViolation):
        predict_mthm2(sin_region.c1.critical_set(sin_region.window, tol), a)


def test_constant_strip_is_one_edge_between_cuts(constant_region):
    graph = build_reeb_graph(constant_region)
    assert [v.kind for v in graph.vertices] == [CUT, CUT]
    assert [v.height for v in graph.vertices] == [-1.0, 1.0]
    assert len(graph.edges) == 1
    assert graph.interior_vertices() == []


def test_monotone_pair_has_no_interior_vertices(tol):
    c1 = catalogue("c_H_p1_p2")
    region = make_region(c1, c1.shifted(1.0), (-5.0, 5.0), tol)
    graph = build_reeb_graph(region)
    assert graph.interior_vertices() == []
    assert all(v.kind == CUT for v in graph.vertices)


def test_height_bounds_add_end_vertices(sin_region):
    graph = ReebSweep(SweepConfig(heights=(-0.5, 1.5))).build_reeb_graph(sin_region)
    assert graph.heights == (-0.5, 1.5)
    ends = [v for v in graph.vertices if v.kind == END]
    assert {v.height for v in ends} == {-0.5, 1.5}
    assert all(v.truncated for v in ends)
    assert_multiset(graph.degree_multiset(), [(0.0, 3), (0.0, 3), (1.0, 3), (1.0, 3)])


def test_unordered_height_bounds_are_rejected(sin_region):
    with pytest.raises(ValueError):
        ReebSweep(SweepConfig(heights=(1.0, 0.0))).build_reeb_graph(sin_region)


def test_nearly_coinciding_critical_values_are_degenerate(tol):
    region = make_region(expression_function("sin(x)"), expression_function("sin(x)+2.000000001"), (-7.0, 7.0), tol)
    with pytest.raises(DegenerateEventError) as excinfo:
        build_reeb_graph(region)
    assert excinfo.value.height == pytest.approx(1.0, abs=1e-8)


def test_interior_vertices_are_critical(sin_graph):
    assert all(v.kind == CRITICAL and not v.truncated for v in sin_graph.interior_vertices())


def test_cw_hypotheses_hold_for_periodic_pair(tol):
    region = make_region(expression_function("sin(x)"), expression_function("sin(x)+3"), (-7.0, 7.0), tol)
    report = check_cw_hypotheses(region, [])
    assert report.holds
    assert report.critical_values == pytest.approx([-1.0, 1.0, 2.0, 4.0])
    assert report.warnings == []


def test_cw_hypotheses_with_declared_accumulation_point(gauss_runge_region):
    report = check_cw_hypotheses(gauss_runge_region, [0.0])
    assert report.holds, report.warnings
    assert report.ZF_points_clean


def test_undeclared_accumulation_is_warned(gauss_runge_region):
    report = check_cw_hypotheses(gauss_runge_region, [])
    assert report.warnings
    assert not report.closed_away_from_ZF
    assert not report.holds


@given(st.floats(min_value=1e-40, max_value=1e-14), st.floats(min_value=1.5, max_value=50.0))
def test_tiny_values_stay_distinct_under_relative_comparison(tol, value, ratio):
    assert _same_value(value, value * ratio, tol)
    assert not _same_relative(value, value * ratio, tol)
    assert _same_relative(value, value * (1 + 1e-13), tol)


def test_value_clusters_keep_large_chains_only():
    entries = [(0.0, 0.0), (1e-7, 1.0), (2e-7, 2.0), (5.0, 3.0), (5.5, 4.0)]
    clusters = value_clusters(entries, 1e-6, 3)
    assert len(clusters) == 1
    assert clusters[0].center == pytest.approx(1e-7)
    assert clusters[0].loci_spread == pytest.approx(2.0)


def _trig_polynomial(seed: int, window, tol):
    """Redraws a*sin(k*x + phi), k = 1..3, until it is Morse with separated event heights."""
    rng = np.random.default_rng(seed)
    while True:
        terms = [f"{rng.uniform(0.2, 1.0):.2f}*sin({k}*x+{rng.uniform(0.0, 3.0):.2f})" for k in (1, 2, 3)]
        f = expression_function("+".join(terms))
        cs = find_critical_set(f, window, tol)
        if not cs.interior_items() or cs.gap < 0.05 or not morse_check(f, window, tol).holds:
            continue
        a = cs.gap / 2
        ends = [float(f(window[0])), float(f(window[1]))]
        heights = np.sort(np.array(cs.values() + ends + [h + a for h in cs.values() + ends]))
        if np.min(np.diff(heights)) < 1e-4:
            continue
        return f, cs, a


@pytest.mark.parametrize("seed", range(20))
def test_prediction_matches_sweep_for_random_trig_polynomials(tol, seed):
    # shorter than the 2pi period, so no critical value repeats
    window = (-3.0, 3.0)
    f, cs, a = _trig_polynomial(seed, window, tol)
    graph = build_reeb_graph(make_region(f, f.shifted(a), window, tol))
    comparison = ReebSweep().compare_prediction(graph, predict_mthm2(cs, a))
    assert comparison.compared > 0
    assert comparison.matches, comparison.mismatches
