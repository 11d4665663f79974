
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.entity.config_entity import Tolerances
from src.entity.function import TSFunction

Window = Tuple[float, float]
Anchor = Tuple[str, int]


class CriticalKind(str, Enum):
    LOCAL_MIN = "local_min"
    LOCAL_MAX = "local_max"
    NON_EXTREMUM = "non_extremum"
    INTERVAL_FLAT = "interval_flat"


def kind_from_flanks(left: int, right: int) -> CriticalKind:
    if left < 0 < right:
        return CriticalKind.LOCAL_MIN
    if left > 0 > right:
        return CriticalKind.LOCAL_MAX
    return CriticalKind.NON_EXTREMUM


@dataclass(frozen=True)
class CriticalItem:
    locus: Tuple[float, float]
    value: float
    kind: CriticalKind
    nondegenerate: bool
    flank_signs: Tuple[int, int] = (0, 0)
    d2: float = 0.0
    truncated: bool = False

    @property
    def is_point(self) -> bool:
        return self.locus[0] == self.locus[1]

    @property
    def point(self) -> float:
        return 0.5 * (self.locus[0] + self.locus[1])

    @property
    def behaves_as(self) -> CriticalKind:
        """The point kind an interval item acts as, judged from the derivative signs on its flanks."""
        if self.kind != CriticalKind.INTERVAL_FLAT:
            return self.kind
        return kind_from_flanks(*self.flank_signs)

    def touches(self, window: Window) -> bool:
        return self.locus[0] <= window[0] or self.locus[1] >= window[1]

    def to_json(self) -> dict:
        record = {
            "locus": self.locus[0] if self.is_point else list(self.locus),
            "value": self.value,
            "kind": self.kind.value,
            "nondegenerate": self.nondegenerate,
        }
        if not self.is_point:
            record["truncated"] = self.truncated
        return record


@dataclass(frozen=True)
class CriticalSet:
    items: Tuple[CriticalItem, ...]
    window: Window
    gap: float
    truncated: bool
    overflow: bool = False

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def values(self) -> List[float]:
        return [item.value for item in self.items]

    def point_items(self) -> List[CriticalItem]:
        return [item for item in self.items if item.is_point]

    def interior_items(self) -> List[CriticalItem]:
        """Items whose locus stays off the window edges."""
        return [item for item in self.items if not (item.kind == CriticalKind.INTERVAL_FLAT and item.truncated)]

    def to_json(self) -> dict:
        return {"items": [item.to_json() for item in self.items],
                "gap": self.gap if np.isfinite(self.gap) else None,
                "truncated": self.truncated}


@dataclass(frozen=True)
class MonotonePiece:
    lo: float
    hi: float
    flat: bool
    value_lo: float
    value_hi: float


@dataclass
class StripRegion:
    c1: TSFunction
    c2: TSFunction
    window: Window
    separation_certificate: float
    tol: Tolerances = field(default_factory=Tolerances)
    witness: Optional[float] = None

    @property
    def functions(self) -> Tuple[TSFunction, TSFunction]:
        return (self.c1, self.c2)

    @property
    def width(self) -> float:
        return self.window[1] - self.window[0]

    def critical_sets(self):
        return (self.c1.critical_set(self.window, self.tol), self.c2.critical_set(self.window, self.tol))

    @cached_property
    def pieces(self) -> Tuple[Tuple[MonotonePiece, ...], Tuple[MonotonePiece, ...]]:
        """Per function, the window split at its critical loci into monotone or flat pieces."""
        return tuple(self._monotone_pieces(f, cs) for f, cs in zip(self.functions, self.critical_sets()))

    def _monotone_pieces(self, f: TSFunction, critical_set) -> Tuple[MonotonePiece, ...]:
        s_min, s_max = self.window
        cuts = [s_min]
        flat_spans = []
        for item in critical_set.items:
            lo, hi = max(item.locus[0], s_min), min(item.locus[1], s_max)
            cuts.extend([lo, hi])
            if not item.is_point:
                flat_spans.append((lo, hi))
        cuts.append(s_max)
        bounds = np.unique(np.asarray(cuts, dtype=float))
        if len(bounds) == 1:
            bounds = np.array([s_min, s_max])
        values = np.asarray(f.value(bounds), dtype=float)
        pieces = []
        for k in range(len(bounds) - 1):
            lo, hi = float(bounds[k]), float(bounds[k + 1])
            flat = any(a <= lo and hi <= b for a, b in flat_spans)
            pieces.append(MonotonePiece(lo, hi, flat, float(values[k]), float(values[k + 1])))
        return tuple(pieces)

    @cached_property
    def height_range(self) -> Tuple[float, float]:
        """(min c1, max c2) over the window, from edge values and critical values."""
        cs1, cs2 = self.critical_sets()
        lows = list(np.atleast_1d(self.c1.value(np.array(self.window)))) + cs1.values()
        highs = list(np.atleast_1d(self.c2.value(np.array(self.window)))) + cs2.values()
        return (float(min(lows)), float(max(highs)))

    def contains(self, s, t) -> np.ndarray:
        """Pointwise membership of (t, s) in the closed strip."""
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        return (self.c1.value(s) <= t) & (t <= self.c2.value(s))

    def to_json(self) -> dict:
        return {"c1": self.c1.to_json(), "c2": self.c2.to_json(), "window": list(self.window),
                "separation_certificate": self.separation_certificate}


@dataclass(frozen=True)
class LevelSlice:
    level: float
    intervals: Tuple[Tuple[float, float], ...]
    clipped: Tuple[bool, ...]
    critical_level: bool = False
    anchors: Tuple[Tuple[Anchor, Anchor], ...] = field(default=(), compare=False, repr=False)
    piece_roots: Dict[Anchor, Tuple[float, ...]] = field(default_factory=dict, compare=False, repr=False)

    @property
    def components(self) -> int:
        return len(self.intervals)

    def component_of(self, s: float, slack: float = 0.0) -> Optional[int]:
        """Index of the interval containing s (widened by slack), nearest one on ties."""
        best, best_distance = None, None
        for index, (a, b) in enumerate(self.intervals):
            distance = max(a - s, s - b, 0.0)
            if distance <= slack and (best_distance is None or distance < best_distance):
                best, best_distance = index, distance
        return best

    def contains(self, s: float, slack: float = 0.0) -> bool:
        return self.component_of(s, slack) is not None

    def to_json(self) -> dict:
        return {"level": self.level,
                "intervals": [list(interval) for interval in self.intervals],
                "clipped": list(self.clipped),
                "critical_level": self.critical_level}
