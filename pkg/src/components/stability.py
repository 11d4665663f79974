
from typing import List, Tuple

import numpy as np

from src.components.reeb_sweep import value_clusters
from src.components.strip_slicer import StripSlicer
from src.constants import STABILITY_TAIL_OUTERMOST, STABILITY_TAIL_SAMPLES, STABILITY_TAIL_REACH
from src.entity.artifact_entity import MorseCheck, StabilityReport, ValueCluster, Verdict
from src.entity.config_entity import Tolerances
from src.entity.function import TSFunction
from src.entity.region import CriticalItem, CriticalKind, StripRegion
from src.exception import DegenerateLevelError
from src.logger import logging

CriticalPoint = Tuple[float, float, str, CriticalItem]

SURROGATE_NOTE = ("properness and trivialisation conditions are checked on the window and on tail samples only; "
                  "positive verdicts are window-limited")


def morse_check(f: TSFunction, window, tol: Tolerances = Tolerances()) -> MorseCheck:
    """True iff every critical point is nondegenerate and no flat critical interval sits inside the window."""
    critical_set = f.critical_set(window, tol)
    degenerate = [item.point for item in critical_set.items if item.is_point and not item.nondegenerate]
    flat = [item.locus for item in critical_set.items
            if item.kind == CriticalKind.INTERVAL_FLAT and not item.truncated]
    return MorseCheck(holds=not degenerate and not flat, degenerate_loci=degenerate, flat_intervals=flat)


def critical_points(region: StripRegion) -> List[CriticalPoint]:
    """Critical points (c_i(x), x) of the height on the strip, x an interior critical locus of c_i."""
    points = []
    for tag, critical_set in zip(("c1", "c2"), region.critical_sets()):
        points.extend((item.value, item.point, tag, item) for item in critical_set.interior_items())
    points.sort(key=lambda point: (point[0], point[1]))
    return points


class StabilityClassifier:
    def __init__(self, tol: Tolerances = Tolerances()):
        self.tol = tol
        self.slicer = StripSlicer(tol)

    def _same(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.tol.inject * max(abs(a), abs(b))

    def _clashes(self, points: List[CriticalPoint]) -> List[Tuple[float, float, float, float]]:
        clashes = []
        for (v, s, _, _), (w, u, _, _) in zip(points, points[1:]):
            if self._same(v, w):
                clashes.append((v, s, w, u))
        return clashes

    def _tail_samples(self, region: StripRegion) -> np.ndarray:
        reach = max(abs(region.window[0]), abs(region.window[1]), 1.0)
        return np.logspace(np.log10(2.0 * reach), STABILITY_TAIL_REACH, STABILITY_TAIL_SAMPLES)

    def _escapes(self, region: StripRegion, value: float) -> Verdict:
        """Whether the level set of value stays bounded, judged on the outermost tail samples of both sides."""
        samples = self._tail_samples(region)[-STABILITY_TAIL_OUTERMOST:]
        for side in (-1.0, 1.0):
            s = side * samples
            lower, upper = region.c1.jet(s), region.c2.jet(s)
            unusable = np.asarray(lower.overflow, dtype=bool) | np.asarray(upper.overflow, dtype=bool)
            if unusable.any():
                return Verdict.UNDETERMINED
            member = (np.asarray(lower.value) <= value) & (value <= np.asarray(upper.value))
            if member.any():
                return Verdict.FAILS
        return Verdict.WINDOW_LIMITED_HOLDS

    def _accumulation(self, points: List[CriticalPoint], width: float) -> List[ValueCluster]:
        chains = value_clusters([(v, s) for v, s, _, _ in points], self.tol.cluster_radius, self.tol.cluster_size)
        found = []
        for chain in chains:
            inside = [(v, s) for v, s in zip(chain.values, chain.loci)
                      if abs(v - chain.center) <= self.tol.cluster_radius]
            if len(inside) < self.tol.cluster_size:
                continue
            cluster = ValueCluster(center=chain.center, values=tuple(v for v, _ in inside),
                                   loci=tuple(s for _, s in inside))
            if cluster.loci_spread > 0.5 * width:
                found.append(cluster)
        return found

    def _outside_counts(self, region: StripRegion, level: float, core: Tuple[float, float]) -> int:
        count = 0
        for a, b in self.slicer.slice(region, level).intervals:
            count += int(a < core[0]) + int(b > core[1])
            if a < core[0] and b > core[1]:
                count -= 1
        return count

    def _trivial_outside_core(self, region: StripRegion, points: List[CriticalPoint],
                              clusters: List[ValueCluster]) -> Tuple[Verdict, list, list]:
        """
        Level-set counts outside a core around each critical locus, just below, at and just above
        its value. Values inside an accumulation cluster are skipped: no regular level separates them.
        """
        values = sorted({v for v, _, _, _ in points})
        clustered = {v for cluster in clusters for v in cluster.values}
        mismatches, skipped = [], []
        for v, s, _, _ in points:
            if v in clustered:
                skipped.append((v, s))
                continue
            others = [abs(v - w) for w in values if w != v]
            delta = min([1e-3 * max(1.0, abs(v))] + [0.25 * d for d in others])
            half = 0.25 * region.width
            core = (max(region.window[0], s - half), min(region.window[1], s + half))
            try:
                counts = [self._outside_counts(region, t, core) for t in (v - delta, v, v + delta)]
            except DegenerateLevelError:
                mismatches.append((v, s, "degenerate level"))
                continue
            if len(set(counts)) > 1:
                mismatches.append((v, s, counts))
        return (Verdict.UNDETERMINED if mismatches else Verdict.WINDOW_LIMITED_HOLDS), mismatches, skipped

    def classify_stability(self, region: StripRegion) -> StabilityReport:
        """
        Method Name :   classify_stability
        Description :   Morse, injectivity and stability verdicts for the height on the strip,
                        from the critical points (c_i(x), x) of both boundary functions.

        Output      :   StabilityReport with evidence per verdict
        On Failure  :   never raises; undecidable verdicts are UNDETERMINED
        """
        logging.info("Entered classify_stability method of StabilityClassifier class")
        points = critical_points(region)
        evidence: dict = {"critical_points": len(points), "note": SURROGATE_NOTE}

        checks = [morse_check(f, region.window, self.tol) for f in region.functions]
        morse = Verdict.HOLDS if all(checks) else Verdict.FAILS
        evidence["morse"] = {"degenerate_loci": [loci for c in checks for loci in c.degenerate_loci],
                             "flat_intervals": [loci for c in checks for loci in c.flat_intervals]}
        if not points:
            logging.info("Exited classify_stability method of StabilityClassifier class")
            return StabilityReport(morse=morse, critical_values_injective=Verdict.HOLDS,
                                   stable_sufficient=Verdict.HOLDS, strongly_stable=Verdict.HOLDS,
                                   infinitesimally_stable=Verdict.HOLDS, evidence=evidence)

        clashes = self._clashes(points)
        injective = not clashes
        evidence["critical_values_injective"] = {"clashes": clashes}

        clusters = self._accumulation(points, region.width)
        evidence["infinitesimally_stable"] = {"clusters": [{"center": c.center, "size": len(c.values),
                                                           "loci_spread": c.loci_spread} for c in clusters]}
        if not injective or clusters:
            infinitesimal = Verdict.FAILS
        else:
            infinitesimal = Verdict.WINDOW_LIMITED_HOLDS

        if injective:
            verdicts = {v: self._escapes(region, v) for v in sorted({p[0] for p in points})}
            escaping = [v for v, verdict in verdicts.items() if verdict == Verdict.FAILS]
            unknown = [v for v, verdict in verdicts.items() if verdict == Verdict.UNDETERMINED]
            strongly = Verdict.FAILS if escaping else Verdict.UNDETERMINED if unknown else Verdict.WINDOW_LIMITED_HOLDS
            evidence["strongly_stable"] = {"unbounded_levels": escaping, "unresolved_levels": unknown}
            sufficient, mismatches, skipped = self._trivial_outside_core(region, points, clusters)
            evidence["stable_sufficient"] = {"count_changes": mismatches, "skipped_accumulating": skipped}
        else:
            strongly = sufficient = Verdict.FAILS
            evidence["strongly_stable"] = evidence["stable_sufficient"] = {"reason": "critical values not injective"}

        for name, verdict in (("morse", morse), ("injective", injective), ("strongly_stable", strongly),
                              ("infinitesimally_stable", infinitesimal), ("stable_sufficient", sufficient)):
            logging.debug(f"{name}: {verdict}")
        logging.info("Exited classify_stability method of StabilityClassifier class")
        return StabilityReport(morse=morse,
                               critical_values_injective=Verdict.HOLDS if injective else Verdict.FAILS,
                               stable_sufficient=sufficient, strongly_stable=strongly,
                               infinitesimally_stable=infinitesimal, evidence=evidence)


def classify_stability(region: StripRegion, tol: Tolerances = None) -> StabilityReport:
    return StabilityClassifier(tol or region.tol).classify_stability(region)
