
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.constants import ORACLE_MIN_N_S, ORACLE_MIN_N_T
from src.entity.artifact_entity import EquivalenceCertificate
from src.entity.config_entity import OracleConfig
from src.entity.reeb_graph import CRITICAL, CUT, END, ReebGraph, ReebVertex, assemble_graph
from src.entity.region import StripRegion
from src.exception import ParameterRangeError
from src.logger import logging
from src.utils.main_utils import UnionFind

Run = Tuple[int, int]
Node = Tuple[int, int]


def _runs(mask: np.ndarray) -> List[Run]:
    """Maximal runs of True as inclusive (start, end) lattice indices."""
    padded = np.concatenate(([0], mask.astype(np.int8), [0]))
    steps = np.diff(padded)
    starts = np.flatnonzero(steps == 1)
    ends = np.flatnonzero(steps == -1) - 1
    return list(zip(starts.tolist(), ends.tolist()))


def _overlaps(lower: List[Run], upper: List[Run]) -> List[Tuple[int, int]]:
    links, j = [], 0
    for i, (a, b) in enumerate(lower):
        while j < len(upper) and upper[j][1] < a:
            j += 1
        k = j
        while k < len(upper) and upper[k][0] <= b:
            links.append((i, k))
            k += 1
    return links


@dataclass
class GridQuotient:
    """Per-level lattice runs of the strip, links between consecutive levels and the collapsed graph."""
    levels: np.ndarray
    s: np.ndarray
    runs: List[List[Run]]
    links: List[List[Tuple[int, int]]]
    graph: ReebGraph
    clusters: List[dict] = field(default_factory=list, repr=False)

    @property
    def dt(self) -> float:
        return float(self.levels[1] - self.levels[0]) if len(self.levels) > 1 else 0.0

    def run_table(self) -> np.ndarray:
        """Rows (level index, first lattice index, last lattice index)."""
        rows = [(k, a, b) for k, level_runs in enumerate(self.runs) for a, b in level_runs]
        return np.asarray(rows, dtype=np.int64).reshape(-1, 3)


class GridOracle:
    def __init__(self, oracle_config: OracleConfig = OracleConfig()):
        if oracle_config.n_t < ORACLE_MIN_N_T:
            raise ParameterRangeError("grid_reeb", "n_t", f"must be >= {ORACLE_MIN_N_T}, got {oracle_config.n_t}")
        if oracle_config.n_s < ORACLE_MIN_N_S:
            raise ParameterRangeError("grid_reeb", "n_s", f"must be >= {ORACLE_MIN_N_S}, got {oracle_config.n_s}")
        self.oracle_config = oracle_config

    @staticmethod
    def _height_bounds(region: StripRegion, heights) -> Tuple[float, float, bool, bool]:
        h_min, h_max = region.height_range
        if heights is None:
            return h_min, h_max, False, False
        bound_lo, bound_hi = float(heights[0]), float(heights[1])
        return max(bound_lo, h_min), min(bound_hi, h_max), bound_lo > h_min, bound_hi < h_max

    def build_quotient(self, region: StripRegion, heights: Optional[Tuple[float, float]] = None) -> GridQuotient:
        """
        Method Name :   build_quotient
        Description :   Brute-force Reeb graph: lattice runs of c1 <= t <= c2 per level, links between
                        overlapping runs of consecutive levels, union-find over bijective links for edges
                        and one vertex per cluster of non-bijective links.

        Output      :   GridQuotient whose graph has source 'grid'
        """
        logging.info("Entered build_quotient method of GridOracle class")
        n_t, n_s = self.oracle_config.n_t, self.oracle_config.n_s
        lo, hi, end_lo, end_hi = self._height_bounds(region, heights)
        s = np.linspace(region.window[0], region.window[1], n_s)
        if not lo < hi:
            empty = assemble_graph([], [], region.window, (lo, hi), source="grid")
            return GridQuotient(levels=np.empty(0), s=s, runs=[], links=[], graph=empty)

        dt = (hi - lo) / n_t
        levels = lo + (np.arange(n_t) + 0.5) * dt
        lower, upper = region.c1.value(s), region.c2.value(s)
        runs = [_runs((lower <= t) & (t <= upper)) for t in levels]
        links = [_overlaps(runs[k], runs[k + 1]) for k in range(n_t - 1)]
        logging.debug(f"grid of {n_t} levels x {n_s} points, {sum(map(len, runs))} runs")

        up_count = [Counter(i for i, _ in level_links) for level_links in links]
        down_count = [Counter(j for _, j in level_links) for level_links in links]

        chains = UnionFind()
        for k, level_runs in enumerate(runs):
            for i in range(len(level_runs)):
                chains.add((k, i))
        for k, level_links in enumerate(links):
            for i, j in level_links:
                if up_count[k][i] == 1 and down_count[k][j] == 1:
                    chains.union((k, i), (k + 1, j))

        # each cluster holds the runs below a change band ('below') and above it ('above')
        clusters: List[dict] = []
        if runs[0]:
            clusters.extend({"band": (lo, levels[0]), "below": [], "above": [(0, i)], "end": end_lo}
                            for i in range(len(runs[0])))
        for k, level_links in enumerate(links):
            local = UnionFind()
            for i, j in level_links:
                if up_count[k][i] != 1 or down_count[k][j] != 1:
                    local.union(("below", i), ("above", j))
            for i in range(len(runs[k])):
                if up_count[k][i] == 0:
                    local.add(("below", i))
            for j in range(len(runs[k + 1])):
                if down_count[k][j] == 0:
                    local.add(("above", j))
            for group in local.groups():
                clusters.append({"band": (levels[k], levels[k + 1]), "end": False,
                                 "below": [(k, i) for side, i in group if side == "below"],
                                 "above": [(k + 1, j) for side, j in group if side == "above"]})
        if runs[-1]:
            clusters.extend({"band": (levels[-1], hi), "below": [(n_t - 1, i)], "above": [], "end": end_hi}
                            for i in range(len(runs[-1])))

        graph = self._collapse(region, s, runs, chains, clusters, lo, hi)
        logging.info("Exited build_quotient method of GridOracle class")
        return GridQuotient(levels=levels, s=s, runs=runs, links=links, graph=graph, clusters=clusters)

    @staticmethod
    def _collapse(region: StripRegion, s: np.ndarray, runs, chains: UnionFind, clusters: List[dict],
                  lo: float, hi: float) -> ReebGraph:
        top_of, bottom_of = {}, {}
        for index, cluster in enumerate(clusters):
            for node in cluster["above"]:
                bottom_of[chains.find(node)] = index
            for node in cluster["below"]:
                top_of[chains.find(node)] = index

        # a chain spanning a single level joins two bands that are one level apart; merge them
        merged = UnionFind()
        for index in range(len(clusters)):
            merged.add(index)
        chain_levels = Counter(chains.find(node) for k, level_runs in enumerate(runs)
                               for node in ((k, i) for i in range(len(level_runs))))
        for chain, count in chain_levels.items():
            if count == 1 and chain in bottom_of and chain in top_of:
                merged.union(bottom_of[chain], top_of[chain])

        last = len(s) - 1
        vertex_of, vertices = {}, []
        for group in merged.groups():
            members = [clusters[i] for i in group]
            nodes = [node for c in members for node in c["below"] + c["above"]]
            extent = [runs[k][i] for k, i in nodes]
            clipped = any(a == 0 or b == last for a, b in extent)
            bands = [c["band"] for c in members]
            ends = [c for c in members if c["end"]]
            if ends:
                kind, height = END, lo if ends[0]["band"][0] == lo else hi
            else:
                kind, height = (CUT if clipped else CRITICAL), float(np.mean([0.5 * (a + b) for a, b in bands]))
            for i in group:
                vertex_of[i] = len(vertices)
            vertices.append({"height": height, "kind": kind, "truncated": clipped,
                             "footprint": (float(s[min(a for a, _ in extent)]), float(s[max(b for _, b in extent)]))})

        edges = []
        for chain in chain_levels:
            if chain in bottom_of and chain in top_of:
                a, b = vertex_of[bottom_of[chain]], vertex_of[top_of[chain]]
                if a != b:
                    edges.append((a, b))
        return assemble_graph(vertices, edges, region.window, (lo, hi), source="grid")


def grid_reeb(region: StripRegion, n_t: int = OracleConfig.n_t, n_s: int = OracleConfig.n_s,
              heights: Optional[Tuple[float, float]] = None) -> ReebGraph:
    return GridOracle(OracleConfig(n_t=n_t, n_s=n_s)).build_quotient(region, heights).graph


def _suppress_regular(g: ReebGraph) -> Tuple[Dict[int, ReebVertex], List[Tuple[int, int]]]:
    """Drops critical vertices with one edge below and one above, joining their two edges."""
    vertices = {v.id: v for v in g.vertices}
    edges = [(e.lo, e.hi) for e in g.edges]
    for v in g.vertices:
        if v.kind != CRITICAL:
            continue
        below = [e for e in edges if e[1] == v.id]
        above = [e for e in edges if e[0] == v.id]
        if len(below) == 1 and len(above) == 1 and below[0][0] != above[0][1]:
            edges.remove(below[0])
            edges.remove(above[0])
            edges.append((below[0][0], above[0][1]))
            del vertices[v.id]
    return vertices, edges


def _side(v: ReebVertex, window, slack: float) -> str:
    left = v.footprint[0] <= window[0] + slack
    right = v.footprint[1] >= window[1] - slack
    return "both" if left and right else "left" if left else "right" if right else "inner"


def graphs_equivalent(g1: ReebGraph, g2: ReebGraph, tol_h: float) -> EquivalenceCertificate:
    """
    Method Name :   graphs_equivalent
    Description :   Height-respecting isomorphism up to degree-2 vertices: vertices pair up by kind, height
                    within tol_h, overlapping footprints (cut vertices also by the window edge they touch)
                    and degree, and the pairing must carry the edge multiset onto the other one.

    Output      :   EquivalenceCertificate with the vertex mapping or the first obstruction found
    """
    logging.info("Entered graphs_equivalent method of grid_oracle module")
    window = g1.window
    slack = 1e-3 * (window[1] - window[0])
    v1, e1 = _suppress_regular(g1)
    v2, e2 = _suppress_regular(g2)

    for kind in (CRITICAL, CUT, END):
        n1 = sum(1 for v in v1.values() if v.kind == kind)
        n2 = sum(1 for v in v2.values() if v.kind == kind)
        if n1 != n2:
            return EquivalenceCertificate(False, f"{kind} vertex count {n1} != {n2}", tol_h=tol_h)
    if len(e1) != len(e2):
        return EquivalenceCertificate(False, f"edge count {len(e1)} != {len(e2)}", tol_h=tol_h)

    def degree(edges, vid):
        return sum((lo == vid) + (hi == vid) for lo, hi in edges)

    def compatible(a: ReebVertex, b: ReebVertex) -> bool:
        if a.kind != b.kind or abs(a.height - b.height) > tol_h or degree(e1, a.id) != degree(e2, b.id):
            return False
        if a.kind == CUT and _side(a, window, slack) != _side(b, window, slack):
            return False
        return a.footprint[0] <= b.footprint[1] + slack and b.footprint[0] <= a.footprint[1] + slack

    order = sorted(v1.values(), key=lambda v: (v.height, v.footprint[0]))
    candidates = {v.id: sorted((w for w in v2.values() if compatible(v, w)),
                               key=lambda w: (abs(w.height - v.height), abs(w.footprint[0] - v.footprint[0])))
                  for v in order}
    for v in order:
        if not candidates[v.id]:
            return EquivalenceCertificate(False, f"no counterpart for vertex {v.id} at height {v.height:.6g}",
                                          tol_h=tol_h)
    target = Counter(e2)

    def consistent(mapping: Dict[int, int]) -> bool:
        mapped = Counter((mapping[lo], mapping[hi]) for lo, hi in e1 if lo in mapping and hi in mapping)
        return all(target[edge] >= count for edge, count in mapped.items())

    def search(position: int, mapping: Dict[int, int], used: set) -> Optional[Dict[int, int]]:
        if position == len(order):
            return dict(mapping) if Counter((mapping[lo], mapping[hi]) for lo, hi in e1) == target else None
        v = order[position]
        for w in candidates[v.id]:
            if w.id in used:
                continue
            mapping[v.id] = w.id
            used.add(w.id)
            if consistent(mapping):
                found = search(position + 1, mapping, used)
                if found is not None:
                    return found
            used.discard(w.id)
            del mapping[v.id]
        return None

    mapping = search(0, {}, set())
    logging.info("Exited graphs_equivalent method of grid_oracle module")
    if mapping is None:
        return EquivalenceCertificate(False, "no height-respecting vertex bijection extends to the edges",
                                      tol_h=tol_h)
    return EquivalenceCertificate(True, "vertex and edge bijection found", mapping=mapping, tol_h=tol_h)
