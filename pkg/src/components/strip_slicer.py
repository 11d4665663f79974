
from typing import Dict, List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from src.constants import STRIP_BISECTION_MAX_ITER
from src.entity.config_entity import Tolerances
from src.entity.function import TSFunction
from src.entity.region import Anchor, LevelSlice, StripRegion
from src.exception import DegenerateLevelError, SeparationError
from src.logger import logging
from src.utils.main_utils import bisect_roots

EDGE = "edge"
FUNCTION_TAGS = ("c1", "c2")
_REFINED_MINIMA = 16


class StripSlicer:
    def __init__(self, tol: Tolerances = Tolerances()):
        self.tol = tol

    def make_region(self, c1: TSFunction, c2: TSFunction, window) -> StripRegion:
        """
        Method Name :   make_region
        Description :   Certifies c1 < c2 on the window lattice, refining the smallest local minima
                        of c2 - c1 with a bounded scalar minimisation.

        Output      :   StripRegion with a positive separation certificate
        On Failure  :   SeparationError with a witness where c2 - c1 <= 0
        """
        logging.info("Entered make_region method of StripSlicer class")
        s_min, s_max = float(window[0]), float(window[1])
        if not s_min < s_max:
            raise ValueError(f"window must satisfy s_min < s_max, got {window}")
        s = np.linspace(s_min, s_max, self.tol.lattice + 1)
        gap = np.asarray(c2.value(s) - c1.value(s), dtype=float)
        finite = np.isfinite(gap)
        if not finite.all():
            logging.warning(f"separation undefined at {int((~finite).sum())} lattice points (overflow)")
            gap = np.where(finite, gap, np.inf)
        lowest = int(np.argmin(gap))
        if gap[lowest] <= 0:
            raise SeparationError(float(s[lowest]), float(gap[lowest]))

        interior = np.arange(1, len(s) - 1)
        minima = interior[(gap[interior] <= gap[interior - 1]) & (gap[interior] <= gap[interior + 1])]
        minima = minima[np.argsort(gap[minima])][:_REFINED_MINIMA]
        certificate, witness = float(gap[lowest]), float(s[lowest])

        def separation(u: float) -> float:
            return float(c2.value(u) - c1.value(u))

        for i in minima:
            result = minimize_scalar(separation, bounds=(float(s[i - 1]), float(s[i + 1])), method="bounded",
                                     options={"xatol": self.tol.root})
            if result.fun < certificate:
                certificate, witness = float(result.fun), float(result.x)
        for edge in (s_min, s_max):
            if separation(edge) < certificate:
                certificate, witness = separation(edge), edge
        if certificate <= 0:
            raise SeparationError(witness, certificate)

        logging.debug(f"separation certificate {certificate:.12g} at s = {witness:.12g}")
        logging.info("Exited make_region method of StripSlicer class")
        return StripRegion(c1=c1, c2=c2, window=(s_min, s_max), separation_certificate=certificate,
                           tol=self.tol, witness=witness)

    def _level_eps(self, t: float) -> float:
        return self.tol.level * max(1.0, abs(t))

    def _piece_roots(self, region: StripRegion, t: float) -> Dict[Anchor, Tuple[float, ...]]:
        """Roots of c_k(s) = t on each monotone piece of c_k."""
        eps = self._level_eps(t)
        found: Dict[Anchor, Tuple[float, ...]] = {}
        for k, (f, pieces) in enumerate(zip(region.functions, region.pieces)):
            tag = FUNCTION_TAGS[k]
            brackets: List[Tuple[int, float, float]] = []
            for index, piece in enumerate(pieces):
                g_lo, g_hi = piece.value_lo - t, piece.value_hi - t
                if piece.flat:
                    if abs(g_lo) <= eps:
                        found[(tag, index)] = (piece.lo, piece.hi)
                    continue
                at_lo, at_hi = abs(g_lo) <= eps, abs(g_hi) <= eps
                if at_lo and at_hi and piece.hi > piece.lo:
                    raise DegenerateLevelError(t, f"{tag} stays within {eps:.1e} of the level on "
                                                  f"[{piece.lo:.12g}, {piece.hi:.12g}]")
                if at_lo:
                    found[(tag, index)] = (piece.lo,)
                elif at_hi:
                    found[(tag, index)] = (piece.hi,)
                elif g_lo * g_hi < 0:
                    brackets.append((index, piece.lo, piece.hi))
            if brackets:
                lo = np.array([b[1] for b in brackets])
                hi = np.array([b[2] for b in brackets])
                roots = bisect_roots(lambda u: f.value(u) - t, lo, hi, self.tol.root, STRIP_BISECTION_MAX_ITER)
                for (index, _, _), root in zip(brackets, roots):
                    found[(tag, index)] = (float(root),)
        return found

    def slice(self, region: StripRegion, t: float) -> LevelSlice:
        """
        Method Name :   slice
        Description :   Components of {s in window : c1(s) <= t <= c2(s)} as closed intervals.
                        Breakpoints are the piecewise roots plus the window ends; membership is
                        decided at segment midpoints, isolated member breakpoints become point
                        components.

        Output      :   LevelSlice
        On Failure  :   DegenerateLevelError when a root cannot be isolated
        """
        t = float(t)
        s_min, s_max = region.window
        eps = self._level_eps(t)
        piece_roots = self._piece_roots(region, t)

        marks: List[Tuple[float, Anchor]] = [(s_min, (EDGE, 0)), (s_max, (EDGE, 1))]
        for anchor, roots in piece_roots.items():
            marks.extend((root, anchor) for root in roots)
        marks.sort(key=lambda mark: (mark[0], mark[1][0] != EDGE))
        merged: List[Tuple[float, Anchor]] = []
        for position, anchor in marks:
            if merged and position - merged[-1][0] <= self.tol.root:
                continue
            merged.append((position, anchor))
        positions = np.array([position for position, _ in merged])

        def member(s: np.ndarray) -> np.ndarray:
            return (region.c1.value(s) <= t + eps) & (region.c2.value(s) >= t - eps)

        segment_member = member(0.5 * (positions[:-1] + positions[1:])) if len(positions) > 1 else np.array([], bool)
        point_member = member(positions)

        intervals, anchors = [], []
        start = None
        for j in range(len(segment_member)):
            if segment_member[j] and start is None:
                start = j
            if start is not None and (not segment_member[j] or j == len(segment_member) - 1):
                stop = j + 1 if segment_member[j] else j
                intervals.append((float(positions[start]), float(positions[stop])))
                anchors.append((merged[start][1], merged[stop][1]))
                start = None
        for j, position in enumerate(positions):
            left_in = j > 0 and segment_member[j - 1]
            right_in = j < len(segment_member) and segment_member[j]
            if point_member[j] and not left_in and not right_in:
                intervals.append((float(position), float(position)))
                anchors.append((merged[j][1], merged[j][1]))

        order = sorted(range(len(intervals)), key=lambda i: intervals[i][0])
        intervals = tuple(intervals[i] for i in order)
        anchors = tuple(anchors[i] for i in order)
        clipped = tuple(bool(a <= s_min or b >= s_max) for a, b in intervals)

        critical_values = [item.value for cs in region.critical_sets() for item in cs.items]
        critical_level = any(abs(t - v) <= self.tol.flat * max(1.0, abs(v)) for v in critical_values)
        return LevelSlice(level=t, intervals=intervals, clipped=clipped, critical_level=critical_level,
                          anchors=anchors, piece_roots=piece_roots)


def make_region(c1: TSFunction, c2: TSFunction, window, tol: Tolerances = Tolerances()) -> StripRegion:
    return StripSlicer(tol).make_region(c1, c2, window)


def slice_level(region: StripRegion, t: float) -> LevelSlice:
    return StripSlicer(region.tol).slice(region, t)
