
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import pandas as pd

CRITICAL = "critical"
CUT = "cut"
END = "end"
VERTEX_KINDS = (CRITICAL, CUT, END)


@dataclass(frozen=True)
class ReebVertex:
    id: int
    height: float
    kind: str
    footprint: Tuple[float, float]
    degree: int = 0
    truncated: bool = False
    locus: Optional[float] = None

    def to_json(self) -> dict:
        return {"id": self.id, "height": self.height, "kind": self.kind, "degree": self.degree,
                "footprint": list(self.footprint), "truncated": self.truncated}


@dataclass(frozen=True)
class ReebEdge:
    lo: int
    hi: int

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class ReebGraph:
    """
    Reeb digraph of the height on the closed strip: vertices carry the induced height,
    every edge points from its lower to its higher endpoint.
    """
    vertices: Tuple[ReebVertex, ...]
    edges: Tuple[ReebEdge, ...]
    window: Tuple[float, float]
    heights: Tuple[float, float] = (0.0, 0.0)
    bands: Tuple[Tuple[float, float, int], ...] = field(default=(), compare=False, repr=False)
    source: str = "sweep"

    def vertex(self, vertex_id: int) -> ReebVertex:
        return self._by_id[vertex_id]

    @property
    def _by_id(self) -> Dict[int, ReebVertex]:
        return {v.id: v for v in self.vertices}

    def incident(self, vertex_id: int) -> List[ReebEdge]:
        return [e for e in self.edges if vertex_id in (e.lo, e.hi)]

    def up_degree(self, vertex_id: int) -> int:
        return sum(1 for e in self.edges if e.lo == vertex_id)

    def down_degree(self, vertex_id: int) -> int:
        return sum(1 for e in self.edges if e.hi == vertex_id)

    def is_local_extremum(self, vertex_id: int) -> bool:
        """True when every incident edge leaves upward, or every one arrives from below."""
        up, down = self.up_degree(vertex_id), self.down_degree(vertex_id)
        return (up + down) > 0 and (up == 0 or down == 0)

    def interior_vertices(self) -> List[ReebVertex]:
        return [v for v in self.vertices if v.kind == CRITICAL]

    def degree_multiset(self, lo: float = float("-inf"), hi: float = float("inf")) -> List[Tuple[float, int]]:
        return sorted((v.height, v.degree) for v in self.interior_vertices() if lo <= v.height <= hi)

    def to_json(self) -> dict:
        return {"vertices": [v.to_json() for v in self.vertices],
                "edges": [e.to_json() for e in self.edges],
                "window": {"s_min": self.window[0], "s_max": self.window[1],
                           "h_min": self.heights[0], "h_max": self.heights[1]}}

    def vertex_frame(self) -> pd.DataFrame:
        columns = ["id", "height", "kind", "degree", "footprint_lo", "footprint_hi", "truncated"]
        rows = [(v.id, v.height, v.kind, v.degree, v.footprint[0], v.footprint[1], v.truncated) for v in self.vertices]
        return pd.DataFrame(rows, columns=columns)

    def edge_frame(self) -> pd.DataFrame:
        heights = {v.id: v.height for v in self.vertices}
        rows = [(e.lo, e.hi, heights[e.lo], heights[e.hi]) for e in self.edges]
        return pd.DataFrame(rows, columns=["lo", "hi", "lo_height", "hi_height"])


def assemble_graph(vertices: List[dict], edges: List[Tuple[int, int]], window, heights, bands=(),
                   source: str = "sweep") -> ReebGraph:
    """
    Builds an immutable graph from provisional vertices (dicts with height, kind, footprint,
    truncated, locus) and (lo, hi) index pairs: ids follow (height, footprint) order and
    degrees are counted from the edges.
    """
    order = sorted(range(len(vertices)), key=lambda i: (vertices[i]["height"], vertices[i]["footprint"][0]))
    new_id = {old: new for new, old in enumerate(order)}
    oriented = []
    for lo, hi in edges:
        if vertices[lo]["height"] > vertices[hi]["height"]:
            lo, hi = hi, lo
        oriented.append(ReebEdge(new_id[lo], new_id[hi]))
    oriented.sort(key=lambda e: (e.lo, e.hi))
    degree = {new: 0 for new in range(len(vertices))}
    for e in oriented:
        degree[e.lo] += 1
        degree[e.hi] += 1
    built = tuple(ReebVertex(id=new_id[old], height=float(vertices[old]["height"]), kind=vertices[old]["kind"],
                             footprint=tuple(float(x) for x in vertices[old]["footprint"]),
                             degree=degree[new_id[old]], truncated=bool(vertices[old].get("truncated", False)),
                             locus=vertices[old].get("locus"))
                  for old in order)
    return ReebGraph(vertices=built, edges=tuple(oriented), window=(float(window[0]), float(window[1])),
                     heights=(float(heights[0]), float(heights[1])), bands=tuple(bands), source=source)
