
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from src.entity.config_entity import Tolerances
from src.entity.function import TSFunction
from src.entity.region import CriticalItem, CriticalKind, CriticalSet, kind_from_flanks
from src.exception import AccumulationError
from src.logger import logging


def _sign(value: float) -> int:
    return int(np.sign(value)) if np.isfinite(value) else 0


class CriticalSetFinder:
    """
    Lattice scan of c' with root refinement.

    Sign changes of c' are refined with brentq; touching roots (c' reaching zero without a
    sign change) are found where c'' changes sign at a local minimum of |c'|; long runs where
    c' is flat relative to the local scale of (c, c', c'') become interval items.
    """

    def __init__(self, tol: Tolerances = Tolerances()):
        self.tol = tol

    def _flat_mask(self, value, d1, d2) -> np.ndarray:
        scale = np.minimum(1.0, np.maximum(np.maximum(np.abs(value), np.abs(d1)), np.abs(d2)))
        return np.abs(d1) <= self.tol.flat * scale

    def _flat_runs(self, s: np.ndarray, flat: np.ndarray) -> List[Tuple[int, int]]:
        padded = np.concatenate(([False], flat, [False])).astype(np.int8)
        edges = np.diff(padded)
        starts, stops = np.flatnonzero(edges == 1), np.flatnonzero(edges == -1) - 1
        return [(int(i), int(j)) for i, j in zip(starts, stops) if s[j] - s[i] > self.tol.flat_len]

    def _refine(self, f: TSFunction, lo: float, hi: float) -> float:
        return float(brentq(lambda u: f.jet(u).d1, lo, hi, xtol=self.tol.root, maxiter=500))

    def _touching_roots(self, f: TSFunction, s: np.ndarray, d1: np.ndarray, d2: np.ndarray,
                        blocked: np.ndarray) -> Tuple[List[float], List[Tuple[float, float]]]:
        """Roots of c' where it touches zero (returned) or dips across it between two lattice points (brackets)."""
        roots, brackets = [], []
        a = np.abs(d1)
        interior = np.arange(1, len(s) - 1)
        is_min = (a[interior] <= a[interior - 1]) & (a[interior] <= a[interior + 1])
        no_crossing = (d1[interior - 1] * d1[interior] > 0) & (d1[interior] * d1[interior + 1] > 0)
        bends = d2[interior - 1] * d2[interior + 1] < 0
        candidates = interior[is_min & no_crossing & bends & ~blocked[interior]]
        for i in candidates:
            lo, hi = float(s[i - 1]), float(s[i + 1])
            try:
                r = float(brentq(lambda u: f.jet(u).d2, lo, hi, xtol=self.tol.root, maxiter=500))
            except ValueError:
                continue
            # two lattice minima of |c'| tied around one root
            if roots and abs(r - roots[-1]) <= self.tol.root:
                continue
            jet = f.jet(r)
            scale = min(1.0, max(abs(jet.value), abs(jet.d1), abs(jet.d2)))
            if jet.d1 == 0.0 or abs(jet.d1) <= self.tol.flat * scale:
                roots.append(r)
            elif np.sign(jet.d1) != np.sign(d1[i]):
                brackets.extend([(lo, r), (r, hi)])
        return roots, brackets

    def _curvature_scale(self, f: TSFunction, r: float, step: float) -> float:
        """Second difference quotient of f over one lattice step, capped at 1."""
        values = f.jet(np.array([r - step, r, r + step])).value
        rise = float(np.max(np.abs(values[[0, 2]] - values[1])))
        return min(1.0, 2.0 * rise / (step * step))

    def _point_item(self, f: TSFunction, r: float, step: float) -> CriticalItem:
        jet = f.jet(r)
        flanks = f.jet(np.array([r - self.tol.side, r + self.tol.side])).d1
        left, right = _sign(flanks[0]), _sign(flanks[1])
        nondegenerate = abs(jet.d2) > self.tol.hess * self._curvature_scale(f, r, step)
        return CriticalItem(locus=(r, r), value=float(jet.value), kind=kind_from_flanks(left, right),
                            nondegenerate=bool(nondegenerate), flank_signs=(left, right), d2=float(jet.d2))

    def _interval_item(self, f: TSFunction, s: np.ndarray, values: np.ndarray, run: Tuple[int, int]) -> CriticalItem:
        i, j = run
        lo, hi = float(s[i]), float(s[j])
        truncated = i == 0 or j == len(s) - 1
        flanks = f.jet(np.array([lo - self.tol.side, hi + self.tol.side])).d1
        left = 0 if i == 0 else _sign(flanks[0])
        right = 0 if j == len(s) - 1 else _sign(flanks[1])
        return CriticalItem(locus=(lo, hi), value=float(np.mean(values[i:j + 1])), kind=CriticalKind.INTERVAL_FLAT,
                            nondegenerate=False, flank_signs=(left, right), truncated=truncated)

    def find_critical_set(self, f: TSFunction, window) -> CriticalSet:
        """
        Method Name :   find_critical_set
        Description :   Detects and classifies the critical items of f on window.

        Output      :   CriticalSet sorted by locus
        On Failure  :   AccumulationError when the items cannot be resolved
        """
        logging.info("Entered find_critical_set method of CriticalSetFinder class")
        s_min, s_max = float(window[0]), float(window[1])
        s = np.linspace(s_min, s_max, self.tol.lattice + 1)
        jet = f.jet(s)
        value, d1, d2 = (np.asarray(part, dtype=float) for part in jet.as_tuple())
        overflow = np.asarray(jet.overflow, dtype=bool)
        if overflow.any():
            logging.warning(f"{f.describe()}: {int(overflow.sum())} lattice points overflow on [{s_min}, {s_max}]; "
                            "they are excluded from the scan")

        flat = self._flat_mask(value, d1, d2) & ~overflow
        runs = self._flat_runs(s, flat)
        blocked = overflow.copy()
        for i, j in runs:
            blocked[i:j + 1] = True

        usable = ~blocked[:-1] & ~blocked[1:]
        crossing = np.flatnonzero(usable & (d1[:-1] * d1[1:] < 0))
        exact = np.flatnonzero(~blocked & (d1 == 0.0))

        roots = [float(s[i]) for i in exact]
        roots.extend(self._refine(f, float(s[i]), float(s[i + 1])) for i in crossing)
        touching, brackets = self._touching_roots(f, s, d1, d2, blocked)
        roots.extend(touching)
        roots.extend(self._refine(f, lo, hi) for lo, hi in brackets)
        roots.sort()

        if len(roots) + len(runs) > self.tol.max_items:
            raise AccumulationError(f"{len(roots) + len(runs)} critical items on [{s_min}, {s_max}] exceed "
                                    f"max_items={self.tol.max_items}", roots[:10])
        close = [(a, b) for a, b in zip(roots, roots[1:]) if b - a < self.tol.root]
        if close:
            raise AccumulationError(f"roots of c' closer than {self.tol.root} near s = {close[0][0]:.12g}",
                                    [a for a, _ in close])

        items = [self._point_item(f, r, float(s[1] - s[0])) for r in roots]
        items.extend(self._interval_item(f, s, value, run) for run in runs)
        items.sort(key=lambda item: item.locus[0])

        values = np.array([item.value for item in items])
        gap = float(np.min(np.abs(np.diff(values)))) if len(items) >= 2 else float("inf")
        truncated = bool(overflow.any()) or any(item.truncated for item in items)

        logging.debug(f"{f.describe()}: {len(roots)} point items, {len(runs)} flat runs, gap={gap:.6g}")
        logging.info("Exited find_critical_set method of CriticalSetFinder class")
        return CriticalSet(items=tuple(items), window=(s_min, s_max), gap=gap, truncated=truncated,
                           overflow=bool(overflow.any()))


def find_critical_set(f: TSFunction, window, tol: Tolerances = Tolerances()) -> CriticalSet:
    return f.critical_set(window, tol)


def is_extremum(item: CriticalItem) -> bool:
    return item.kind in (CriticalKind.LOCAL_MIN, CriticalKind.LOCAL_MAX)
