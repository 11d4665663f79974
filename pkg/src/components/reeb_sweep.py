
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.components.strip_slicer import EDGE, FUNCTION_TAGS, StripSlicer
from src.constants import REEB_CW_CLUSTER_MIN
from src.entity.artifact_entity import (BandCheck, CWReport, PredictedVertex, PredictedVertices,
                                        PredictionComparison, ValueCluster)
from src.entity.config_entity import SweepConfig, Tolerances
from src.entity.reeb_graph import CRITICAL, CUT, END, ReebGraph, assemble_graph
from src.entity.region import Anchor, CriticalItem, CriticalKind, CriticalSet, LevelSlice, StripRegion
from src.exception import DegenerateEventError, HypothesisViolation, InconsistencyError
from src.logger import logging
from src.utils.main_utils import UnionFind

_MATCH_SLACK = 1e-9
_LOOSE_MATCH_SLACK = 1e-4


@dataclass
class _Event:
    height: float
    values: List[float] = field(default_factory=list)
    items: List[Tuple[str, int, CriticalItem]] = field(default_factory=list)
    bound: bool = False


def _same_value(a: float, b: float, tol: Tolerances) -> bool:
    return abs(a - b) <= tol.same * max(1.0, abs(a), abs(b))


def _same_relative(a: float, b: float, tol: Tolerances) -> bool:
    # no absolute floor: distinct tiny values near 0 stay distinct
    return abs(a - b) <= tol.same * max(abs(a), abs(b))


def value_clusters(entries: Sequence[Tuple[float, float]], gap: float, min_size: int) -> List[ValueCluster]:
    """
    Chains of (value, locus) entries whose sorted values are closer than gap.
    Only chains holding at least min_size entries are returned.
    """
    ordered = sorted(entries)
    clusters, run = [], ordered[:1]
    for entry in ordered[1:]:
        if entry[0] - run[-1][0] < gap:
            run.append(entry)
            continue
        clusters.append(run)
        run = [entry]
    if run:
        clusters.append(run)
    return [ValueCluster(center=float(np.median([v for v, _ in run])),
                         values=tuple(v for v, _ in run), loci=tuple(s for _, s in run))
            for run in clusters if len(run) >= min_size]


class ReebSweep:
    """
    Event-driven sweep of the height over the strip.

    Events are the critical values of c1 and c2, the heights of the four window corners and the
    height bounds. One slice per band midpoint gives the band's edges, one slice per event gives
    the contours the bands are glued to.
    """

    def __init__(self, sweep_config: SweepConfig = SweepConfig()):
        self.sweep_config = sweep_config
        self.tol = sweep_config.tol
        self.slicer = StripSlicer(self.tol)

    def _collect_events(self, region: StripRegion) -> Tuple[List[_Event], Tuple[float, float], bool, bool]:
        h_min, h_max = region.height_range
        lo, hi = h_min, h_max
        end_lo = end_hi = False
        if self.sweep_config.heights is not None:
            bound_lo, bound_hi = (float(h) for h in self.sweep_config.heights)
            if not bound_lo < bound_hi:
                raise ValueError(f"heights must satisfy lo < hi, got {self.sweep_config.heights}")
            end_lo, end_hi = bound_lo > h_min, bound_hi < h_max
            lo, hi = max(bound_lo, h_min), min(bound_hi, h_max)
        if not lo < hi:
            return [], (lo, hi), end_lo, end_hi

        raw: List[Tuple[float, Optional[Tuple[str, int, CriticalItem]], bool]] = []
        for tag, critical_set in zip(FUNCTION_TAGS, region.critical_sets()):
            for index, item in enumerate(critical_set.items):
                if lo <= item.value <= hi:
                    raw.append((item.value, (tag, index, item), False))
        corners = np.array(region.window)
        for f in region.functions:
            raw.extend((float(v), None, False) for v in np.atleast_1d(f.value(corners)) if lo <= v <= hi)
        raw.extend([(lo, None, True), (hi, None, True)])
        raw.sort(key=lambda entry: entry[0])

        events: List[_Event] = []
        for value, source, bound in raw:
            if not events or value - events[-1].values[-1] > self.sweep_config.event_gap:
                events.append(_Event(height=value))
            event = events[-1]
            event.values.append(value)
            event.bound = event.bound or bound
            if source is not None:
                event.items.append(source)
        for event in events:
            critical_values = [item.value for _, _, item in event.items]
            if event.bound:
                event.height = lo if lo in event.values else hi
            elif critical_values:
                event.height = float(np.mean(critical_values))
            else:
                event.height = float(np.mean(event.values))
        return events, (lo, hi), end_lo, end_hi

    def _check_event(self, event: _Event) -> None:
        distinct = []
        for tag, index, item in event.items:
            if not any(_same_value(item.value, value, self.tol) for value in distinct):
                distinct.append(item.value)
        if len(distinct) > 1:
            raise DegenerateEventError(event.height, [(tag, index, item.value) for tag, index, item in event.items])

    def _limit(self, region: StripRegion, event_slice: LevelSlice, anchor: Anchor, position: float) -> float:
        """Where a band endpoint carried by anchor ends up at the event height."""
        if anchor[0] == EDGE:
            return region.window[anchor[1]]
        roots = event_slice.piece_roots.get(anchor)
        if roots:
            return min(roots, key=lambda root: abs(root - position))
        piece = region.pieces[FUNCTION_TAGS.index(anchor[0])][anchor[1]]
        t = event_slice.level
        return piece.lo if abs(piece.value_lo - t) <= abs(piece.value_hi - t) else piece.hi

    def _match(self, region: StripRegion, band: LevelSlice, component: int, event_slice: LevelSlice) -> int:
        (a, b), (anchor_a, anchor_b) = band.intervals[component], band.anchors[component]
        left = self._limit(region, event_slice, anchor_a, a)
        right = self._limit(region, event_slice, anchor_b, b)
        middle = 0.5 * (left + right)
        for slack in (_MATCH_SLACK, _LOOSE_MATCH_SLACK):
            matched = event_slice.component_of(middle, slack * region.width)
            if matched is not None:
                return matched
        raise InconsistencyError(event_slice.level, f"band contour [{a:.12g}, {b:.12g}] at t = {band.level:.12g} "
                                                    f"has no continuation at s = {middle:.12g}")

    def _touching_items(self, event: _Event, interval: Tuple[float, float], slack: float):
        return [(tag, index, item) for tag, index, item in event.items
                if item.locus[1] >= interval[0] - slack and item.locus[0] <= interval[1] + slack]

    def build_reeb_graph(self, region: StripRegion) -> ReebGraph:
        """
        Method Name :   build_reeb_graph
        Description :   Builds the Reeb digraph of the height on the strip over the window.
                        Event contours with one band contour below and one above continue an edge,
                        the others become critical, cut or end vertices.

        Output      :   ReebGraph
        On Failure  :   InconsistencyError / DegenerateEventError
        """
        logging.info("Entered build_reeb_graph method of ReebSweep class")
        events, (lo, hi), end_lo, end_hi = self._collect_events(region)
        for event in events:
            self._check_event(event)
        event_slices = [self.slicer.slice(region, event.height) for event in events]
        band_slices = [self.slicer.slice(region, 0.5 * (below.height + above.height))
                       for below, above in zip(events, events[1:])]
        logging.debug(f"sweep over [{lo:.12g}, {hi:.12g}]: {len(events)} events, {len(band_slices)} bands")

        down = [[[] for _ in s.intervals] for s in event_slices]
        up = [[[] for _ in s.intervals] for s in event_slices]
        band_ends: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for j, band in enumerate(band_slices):
            for i in range(band.components):
                below = self._match(region, band, i, event_slices[j])
                above = self._match(region, band, i, event_slices[j + 1])
                up[j][below].append(i)
                down[j + 1][above].append(i)
                band_ends[(j, i)] = (below, above)

        slack = _MATCH_SLACK * region.width
        vertices: List[dict] = []
        vertex_of: Dict[Tuple[int, int], int] = {}
        for k, (event, event_slice) in enumerate(zip(events, event_slices)):
            is_end = event.bound and ((end_lo and event.height == lo) or (end_hi and event.height == hi))
            for p, interval in enumerate(event_slice.intervals):
                counts = (len(down[k][p]), len(up[k][p]))
                clipped = event_slice.clipped[p]
                touching = self._touching_items(event, interval, slack)
                if is_end:
                    kind = END
                elif clipped:
                    if counts == (1, 1):
                        continue
                    kind = CUT
                elif touching:
                    kind = CRITICAL
                elif counts == (1, 1):
                    continue
                else:
                    raise InconsistencyError(event.height, f"contour [{interval[0]:.12g}, {interval[1]:.12g}] has "
                                                           f"{counts[0]} band contours below and {counts[1]} above")
                vertex_of[(k, p)] = len(vertices)
                vertices.append({"height": event.height, "kind": kind, "footprint": interval,
                                 "truncated": bool(clipped or is_end),
                                 "locus": touching[0][2].point if touching else None})

        # bands glued through pass-through contours form one edge
        chains = UnionFind()
        for (j, i), (below, above) in band_ends.items():
            chains.add(("band", j, i))
            if (j, below) not in vertex_of:
                chains.union(("band", j, i), ("event", j, below))
            if (j + 1, above) not in vertex_of:
                chains.union(("band", j, i), ("event", j + 1, above))
        ends: Dict[object, set] = {}
        for (j, i), (below, above) in band_ends.items():
            root = chains.find(("band", j, i))
            attached = ends.setdefault(root, set())
            for key in ((j, below), (j + 1, above)):
                if key in vertex_of:
                    attached.add(vertex_of[key])
        edges = []
        for root, attached in ends.items():
            if len(attached) != 2:
                height = events[root[1]].height
                raise InconsistencyError(height, f"an edge chain meets {len(attached)} vertices")
            edges.append(tuple(sorted(attached)))
        edges.sort()

        bands = tuple((below.height, above.height, band.components)
                      for below, above, band in zip(events, events[1:], band_slices))
        graph = assemble_graph(vertices, edges, window=region.window, heights=(lo, hi), bands=bands)
        logging.debug(f"graph: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
        logging.info("Exited build_reeb_graph method of ReebSweep class")
        return graph

    def check_bands(self, region: StripRegion, graph: ReebGraph) -> BandCheck:
        """Samples interior levels of every band: each must show the band's contour count."""
        samples = self.sweep_config.band_samples
        failures = []
        for t_lo, t_hi, count in graph.bands:
            for k in range(1, samples + 1):
                t = t_lo + (t_hi - t_lo) * k / (samples + 1)
                found = self.slicer.slice(region, t).components
                if found != count:
                    failures.append(f"t = {t:.12g}: {found} contours, band ({t_lo:.12g}, {t_hi:.12g}) has {count}")
        return BandCheck(holds=not failures, bands_checked=len(graph.bands), failures=failures)

    def predict_mthm2(self, cs1: CriticalSet, a: float) -> PredictedVertices:
        """
        Vertices predicted for the pair (c1, c1 + a) when 0 < a is below the gap of c1's
        critical values: an extremum gives a degree-1 and a degree-3 vertex, a non-extremum
        two degree-2 vertices, at heights v and v + a.
        """
        if not a > 0:
            raise HypothesisViolation(f"a = {a} must be positive")
        if a >= cs1.gap:
            raise HypothesisViolation(f"a = {a} is not below the critical value gap {cs1.gap:.12g}")
        truncated = [item for item in cs1.items if item.kind == CriticalKind.INTERVAL_FLAT and item.truncated]
        if truncated:
            raise HypothesisViolation(f"flat critical interval [{truncated[0].locus[0]:.12g}, "
                                      f"{truncated[0].locus[1]:.12g}] is not compact inside the window")
        degrees = {CriticalKind.LOCAL_MIN: (1, 3), CriticalKind.LOCAL_MAX: (3, 1), CriticalKind.NON_EXTREMUM: (2, 2)}
        predicted = []
        for index, item in enumerate(cs1.items):
            lower, upper = degrees[item.behaves_as]
            predicted.append(PredictedVertex(item.value, lower, index, item.point, "c1"))
            predicted.append(PredictedVertex(item.value + a, upper, index, item.point, "c2"))
        predicted.sort(key=lambda v: (v.height, v.locus))
        return PredictedVertices(vertices=tuple(predicted), a=float(a))

    def compare_prediction(self, graph: ReebGraph, prediction: PredictedVertices) -> PredictionComparison:
        """
        Matches predicted (height, degree) pairs to graph vertices by height and locus, restricted
        to heights in [h_min + a, h_max - a] and to contours clear of the window edges.
        """
        a = prediction.a
        lo, hi = graph.heights[0] + a, graph.heights[1] - a
        tol = self.tol.discrete
        slack = _LOOSE_MATCH_SLACK * (graph.window[1] - graph.window[0])
        mismatches, matched, compared = [], set(), 0

        def inside(height: float) -> bool:
            return lo - tol <= height <= hi + tol

        for predicted in prediction.vertices:
            if not inside(predicted.height):
                continue
            candidates = [v for v in graph.vertices if abs(v.height - predicted.height) <= tol
                          and v.footprint[0] - slack <= predicted.locus <= v.footprint[1] + slack]
            if any(v.kind != CRITICAL or v.truncated for v in candidates):
                continue
            compared += 1
            open_candidates = [v for v in candidates if v.id not in matched]
            if not open_candidates:
                mismatches.append(f"no vertex for predicted ({predicted.height:.12g}, {predicted.degree}) "
                                  f"at s = {predicted.locus:.12g}")
                continue
            vertex = open_candidates[0]
            matched.add(vertex.id)
            if vertex.degree != predicted.degree:
                mismatches.append(f"vertex {vertex.id} at {vertex.height:.12g} has degree {vertex.degree}, "
                                  f"predicted {predicted.degree}")
        for vertex in graph.interior_vertices():
            if vertex.id not in matched and not vertex.truncated and inside(vertex.height):
                mismatches.append(f"vertex {vertex.id} at {vertex.height:.12g} (degree {vertex.degree}) "
                                  "is not predicted")
        return PredictionComparison(matches=not mismatches, compared=compared, mismatches=mismatches,
                                    height_window=(lo, hi))

    def check_cw_hypotheses(self, region: StripRegion, declared_Z_F: Sequence[float]) -> CWReport:
        """
        Method Name :   check_cw_hypotheses
        Description :   Checks that the critical values are discrete and closed away from the
                        declared exceptional heights Z_F, and that none of them is a Z_F point.

        Output      :   CWReport
        On Failure  :   never raises; failures are verdicts and warnings
        """
        logging.info("Entered check_cw_hypotheses method of ReebSweep class")
        tol = self.tol
        zf = sorted(float(z) for z in declared_Z_F)
        entries = sorted((item.value, item.point) for cs in region.critical_sets() for item in cs.items)
        values: List[float] = []
        for value, _ in entries:
            if not values or not _same_relative(values[-1], value, tol):
                values.append(value)

        def on_zf(value: float, z: float) -> bool:
            return value == z if z == 0.0 else abs(value - z) <= tol.same * abs(z)

        clean = not any(on_zf(value, z) for value in values for z in zf)
        outside = [value for value in values if all(abs(value - z) > tol.zf_ball for z in zf)]
        min_gap = float(np.min(np.diff(outside))) if len(outside) >= 2 else float("inf")
        discrete = min_gap > tol.discrete

        clusters = value_clusters([(value, 0.0) for value in values], tol.discrete, REEB_CW_CLUSTER_MIN)
        warnings = []
        for cluster in clusters:
            if not any(abs(cluster.center - z) <= tol.zf_ball for z in zf):
                warnings.append(f"possible accumulation of {len(cluster.values)} critical values near "
                                f"{cluster.center:.6g}, not a declared Z_F point")
        for warning in warnings:
            logging.warning(warning)
        logging.info("Exited check_cw_hypotheses method of ReebSweep class")
        return CWReport(critical_values=values, min_gap=min_gap, declared_Z_F=zf, discrete_in_window=discrete,
                        closed_away_from_ZF=not warnings, ZF_points_clean=clean, warnings=warnings,
                        clusters=clusters)


def build_reeb_graph(region: StripRegion, opts: Optional[SweepConfig] = None) -> ReebGraph:
    return ReebSweep(opts or SweepConfig(tol=region.tol)).build_reeb_graph(region)


def predict_mthm2(cs1: CriticalSet, a: float) -> PredictedVertices:
    return ReebSweep().predict_mthm2(cs1, a)


def check_cw_hypotheses(region: StripRegion, declared_Z_F: Sequence[float], tol: Optional[Tolerances] = None) -> CWReport:
    return ReebSweep(SweepConfig(tol=tol or region.tol)).check_cw_hypotheses(region, declared_Z_F)
