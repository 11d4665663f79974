
import math
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from src.components.expression_parser import literal, parse, polynomial_text
from src.components.jet_evaluator import JetEvaluator
from src.components.strip_slicer import make_region
from src.constants import (CATALOGUE_FILE_PATH, CONSTRUCTION_BISECTION_TOL, CONSTRUCTION_BRACKET_EXPANSIONS,
                           CONSTRUCTION_DIVERGENCE_THRESHOLD, CONSTRUCTION_EXPANDING_WINDOWS,
                           CONSTRUCTION_LIMIT_THRESHOLD, CONSTRUCTION_MONOTONE_TAIL, CONSTRUCTION_SAMPLE_K_MAX,
                           CONSTRUCTION_SAMPLE_K_MIN, CONSTRUCTION_TABLE_NODES, CONSTRUCTION_WITNESS_MAX_TRIES,
                           CRITICAL_LATTICE_SIZE)
from src.entity.artifact_entity import AsymptoticClaim, AsymptoticReport, DivergenceWitness, PairCheck
from src.entity.config_entity import Tolerances
from src.entity.expression import Expr, Jet2
from src.entity.function import (CATALOGUE_VARIANT, COMBINATION_VARIANT, ROTATE_VARIANT, ConstructionSpec,
                                 TSFunction)
from src.exception import AccumulationError, HypothesisViolation, MonotonicityError, ParameterRangeError, \
    SeparationError
from src.logger import logging
from src.utils.main_utils import bisect_roots, read_yaml_file

THEOREMS = ("4", "5a", "5b", "5c", "6a", "6b", "6c")
WITNESS_NAMES = ("c_p0", "c_p00", "c_e1", "c_e2")


@lru_cache(maxsize=1)
def catalogue_entries() -> Dict[str, dict]:
    return read_yaml_file(CATALOGUE_FILE_PATH)["catalogue"]


def _validate(name: str, params: Optional[dict]) -> dict:
    entries = catalogue_entries()
    if name not in entries:
        raise ParameterRangeError(name, "name", f"is not in the catalogue {sorted(entries)}")
    entry = entries[name]
    declared = entry.get("params") or {}
    params = dict(params or {})
    unknown = sorted(set(params) - set(declared))
    if unknown:
        raise ParameterRangeError(name, unknown[0], f"is not a parameter of {name}")
    validated = {}
    for param, rule in declared.items():
        value = params.get(param, rule.get("default"))
        if rule.get("kind") == "polynomial":
            coefficients = [float(c) for c in np.atleast_1d(value)]
            roots = np.polynomial.polynomial.polyroots(coefficients) if len(coefficients) > 1 else np.array([])
            real_roots = roots[np.abs(np.imag(roots)) <= 1e-12]
            if not any(coefficients) or len(real_roots) or coefficients[0] <= 0:
                raise ParameterRangeError(name, param, f"= {coefficients} must be a polynomial positive everywhere")
            validated[param] = coefficients
            continue
        value = float(value)
        if not math.isfinite(value):
            raise ParameterRangeError(name, param, f"= {value} must be finite")
        if "min" in rule:
            low = float(rule["min"])
            if value < low or (rule.get("min_exclusive") and value == low):
                relation = ">" if rule.get("min_exclusive") else ">="
                raise ParameterRangeError(name, param, f"= {value} must be {relation} {low}")
        validated[param] = value
    distinct = entry.get("distinct") or []
    if len(distinct) == 2 and validated[distinct[0]] == validated[distinct[1]]:
        raise ParameterRangeError(name, distinct[1], f"must differ from {distinct[0]}")
    return validated


def catalogue_expression(name: str, params: Optional[dict] = None) -> Expr:
    """The closed form of a catalogue entry with validated parameters substituted."""
    validated = _validate(name, params)
    texts = {key: polynomial_text(value) if isinstance(value, list) else literal(value)
             for key, value in validated.items()}
    return parse(catalogue_entries()[name]["expression"].format(**texts))


def catalogue(name: str, params: Optional[dict] = None) -> TSFunction:
    """
    Method Name :   catalogue
    Description :   Named closed-form function (hyperbola branches, oscillating bumps, test functions).

    Output      :   TSFunction backed by a replayable ConstructionSpec
    On Failure  :   ParameterRangeError
    """
    validated = _validate(name, params)
    return TSFunction(ConstructionSpec(CATALOGUE_VARIANT, name=name, params=validated))


def window_caps(f: TSFunction) -> Tuple[float, float]:
    """(overflow-safe |x| cap, lattice-resolved |x| cap) of a function; inf when unrestricted."""
    backing = f.backing
    if not isinstance(backing, ConstructionSpec):
        return (math.inf, math.inf)
    if backing.variant == CATALOGUE_VARIANT:
        entry = catalogue_entries()[backing.name]
        cap = float(entry.get("window_cap", math.inf))
        return (cap, float(entry.get("resolved_window", cap)))
    if backing.variant == COMBINATION_VARIANT:
        caps = [window_caps(TSFunction.from_json(term)) for _, term in backing.params["terms"]]
        return (min(c[0] for c in caps), min(c[1] for c in caps))
    return (math.inf, math.inf)


def combine(terms: Sequence[Tuple[float, TSFunction]], name: Optional[str] = None) -> TSFunction:
    """Weighted sum of functions, kept as a construction so the summands stay on record."""
    return TSFunction(ConstructionSpec(COMBINATION_VARIANT, name=name,
                                       params={"terms": [[float(w), f.to_json()] for w, f in terms]}))


def _scaled(jet: Jet2, weight: float) -> Jet2:
    return Jet2(jet.value * weight, jet.d1 * weight, jet.d2 * weight, jet.overflow)


class CombinationEvaluator:
    def __init__(self, spec: ConstructionSpec):
        self.terms = [(float(w), TSFunction.from_json(term)) for w, term in spec.params["terms"]]
        if not self.terms:
            raise ParameterRangeError(spec.name or COMBINATION_VARIANT, "terms", "must not be empty")

    def evaluate(self, x) -> Jet2:
        total = None
        for weight, f in self.terms:
            jet = _scaled(f.jet(x), weight)
            total = jet if total is None else total + jet
        return total


class RotatedGraph:
    """
    c1 obtained by rotating the graph {(c0(x), x)} by theta = arctan(a_c) about the origin.

    u2(x) = c0(x) sin(theta) + x cos(theta) is strictly increasing; c1(u2(x)) = c0(x) cos(theta) - x sin(theta).
    A table of (x, u2(x)) on the construction window brackets each preimage, bisection refines it.
    """

    def __init__(self, spec: ConstructionSpec):
        params = spec.params
        self.c0 = TSFunction.from_json(params["c0"])
        self.a_c = float(params["a_c"])
        self.bounds = tuple(float(b) for b in params["bounds"])
        self.window = tuple(float(w) for w in params["window"])
        a_cm, a_cM = self.bounds
        if not 0 < a_cm < a_cM:
            raise ParameterRangeError(ROTATE_VARIANT, "bounds", f"= {self.bounds} must satisfy 0 < a_cm < a_cM")
        if not 0 < self.a_c < a_cM:
            raise ParameterRangeError(ROTATE_VARIANT, "a_c", f"= {self.a_c} must satisfy 0 < a_c < a_cM = {a_cM}")
        self.theta = math.atan(self.a_c)
        self.sin, self.cos = math.sin(self.theta), math.cos(self.theta)

        self.nodes = np.linspace(self.window[0], self.window[1], CONSTRUCTION_TABLE_NODES)
        jet = self.c0.jet(self.nodes)
        if jet.any_overflow or not np.all(np.isfinite(jet.value)):
            raise HypothesisViolation(f"c0 = {self.c0.describe()} is not bounded on {self.window}")
        slope = jet.d1 * self.sin + self.cos
        lowest = int(np.argmin(slope))
        if slope[lowest] <= 0:
            raise MonotonicityError(float(self.nodes[lowest]), float(slope[lowest]))
        self.table = jet.value * self.sin + self.nodes * self.cos
        # signed distance of c0' outside [-1/a_cM, a_cm]; positive where a bound fails
        d1 = np.broadcast_to(np.asarray(jet.d1, dtype=float), self.nodes.shape)
        excess = np.maximum(-1.0 / a_cM - d1, d1 - a_cm)
        worst = int(np.argmax(excess))
        self.bounds_hold = bool(excess[worst] <= 1e-12)
        self.bound_violation: Optional[Tuple[float, float]] = None
        if not self.bounds_hold:
            self.bound_violation = (float(self.nodes[worst]), float(d1[worst]))
            logging.warning(f"c0' leaves [-1/{a_cM:g}, {a_cm:g}] on {self.window}: "
                            f"c0'({self.bound_violation[0]:.6g}) = {self.bound_violation[1]:.6g}")

    @property
    def mapped_window(self) -> Tuple[float, float]:
        return (float(self.table[0]), float(self.table[-1]))

    def u2(self, x):
        return self.c0.value(x) * self.sin + np.asarray(x, dtype=float) * self.cos

    def _bracket_outside(self, u: float) -> Tuple[float, float]:
        step = max(1.0, self.window[1] - self.window[0])
        if u < self.table[0]:
            hi, lo = self.window[0], self.window[0] - step
            for _ in range(CONSTRUCTION_BRACKET_EXPANSIONS):
                if self.u2(lo) <= u:
                    return lo, hi
                hi, lo, step = lo, lo - 2 * step, 2 * step
        else:
            lo, hi = self.window[1], self.window[1] + step
            for _ in range(CONSTRUCTION_BRACKET_EXPANSIONS):
                if self.u2(hi) >= u:
                    return lo, hi
                lo, hi, step = hi, hi + 2 * step, 2 * step
        raise MonotonicityError(float(lo), float("nan"))

    def preimage(self, u) -> np.ndarray:
        """x with u2(x) = u."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        index = np.clip(np.searchsorted(self.table, u), 1, len(self.table) - 1)
        lo, hi = self.nodes[index - 1].copy(), self.nodes[index].copy()
        for k in np.flatnonzero((u < self.table[0]) | (u > self.table[-1])):
            lo[k], hi[k] = self._bracket_outside(float(u[k]))
        return bisect_roots(lambda x: self.u2(x) - u, lo, hi, CONSTRUCTION_BISECTION_TOL)

    def graph_point(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """Rotated image (c1, u) of the graph point (c0(x), x)."""
        x = np.asarray(x, dtype=float)
        c = self.c0.value(x)
        return (c * self.cos - x * self.sin, c * self.sin + x * self.cos)

    def evaluate(self, u) -> Jet2:
        scalar = np.ndim(u) == 0
        x = self.preimage(u)
        jet = self.c0.jet(x)
        h = jet.d1 * self.sin + self.cos
        with np.errstate(all="ignore"):
            rotated = Jet2(jet.value * self.cos - x * self.sin, (jet.d1 * self.cos - self.sin) / h,
                           jet.d2 / (h * h * h), np.asarray(jet.overflow, dtype=bool) | (h <= 0))
        return rotated.at(0) if scalar else rotated


def build_evaluator(spec: ConstructionSpec):
    if spec.variant == CATALOGUE_VARIANT:
        return JetEvaluator(catalogue_expression(spec.name, spec.params))
    if spec.variant == ROTATE_VARIANT:
        return RotatedGraph(spec)
    return CombinationEvaluator(spec)


def rotate_graph(c0: TSFunction, a_c: float, bounds: Tuple[float, float], window) -> TSFunction:
    """
    Method Name :   rotate_graph
    Description :   Rotates the graph of c0 by arctan(a_c); the critical points of the result sit
                    over the preimages where c0' = a_c.

    Output      :   TSFunction backed by a rotate ConstructionSpec
    On Failure  :   MonotonicityError when u2 is not strictly increasing, ParameterRangeError
    """
    logging.info("Entered rotate_graph method of constructions")
    spec = ConstructionSpec(ROTATE_VARIANT, name=f"rotate({c0.describe()})",
                            params={"c0": c0.to_json(), "a_c": float(a_c),
                                    "bounds": [float(b) for b in bounds],
                                    "window": [float(window[0]), float(window[1])]})
    rotated = TSFunction(spec)
    rotated.evaluator  # builds the lookup table, raising on a non-monotone u2
    logging.info("Exited rotate_graph method of constructions")
    return rotated


def sup_derivative(f: TSFunction, window, nodes: int = CRITICAL_LATTICE_SIZE) -> float:
    """Supremum of f' on window: lattice maximum refined by bounded minimisation."""
    s = np.linspace(float(window[0]), float(window[1]), nodes + 1)
    d1 = np.asarray(f.derivative(s), dtype=float)
    best = int(np.nanargmax(d1))
    lo, hi = s[max(best - 1, 0)], s[min(best + 1, len(s) - 1)]
    result = minimize_scalar(lambda u: -f.derivative(u), bounds=(lo, hi), method="bounded",
                             options={"xatol": CONSTRUCTION_BISECTION_TOL})
    return float(max(d1[best], -result.fun))


def build_pair(theorem: str, params: Optional[dict] = None) -> Tuple[TSFunction, TSFunction]:
    """
    Method Name :   build_pair
    Description :   The pair (c1, c2) of a numbered construction:
                    4   hyperbola branch over +-inf with c_p0 added
                    5a  c_H_p1_p2 and c_H_p1_p2 + c_p0
                    5b  c_H_p1_p2 + c_p0 / 2 and c_H_p1_p2 + c_p0
                    5c  as 5b with c_p00
                    6a  c_e_p1_p2 and c_e_p1_p2 + w c_e1, w = |p2 - p1| / 8
                    6b  c_e_p1_p2 + w c_e1 / 2 and c_e_p1_p2 + w c_e1
                    6c  as 6b with c_e2

    Output      :   (c1, c2)
    On Failure  :   ParameterRangeError
    """
    params = dict(params or {})
    theorem = str(theorem)
    if theorem not in THEOREMS:
        raise ParameterRangeError("build_pair", "theorem", f"= {theorem!r} must be one of {THEOREMS}")
    allowed = {"4": {"r", "p"}}.get(theorem, {"p1", "p2", "p"} if theorem.startswith("5") else {"p1", "p2"})
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ParameterRangeError(f"pair {theorem}", unknown[0], f"is not used (expected {sorted(allowed)})")
    poly = {"p": params["p"]} if "p" in params else {}

    if theorem == "4":
        base = catalogue("c_H_plus_inf_r", {"r": params.get("r", 1.0)})
        bump = catalogue("c_p0", poly)
        return base, combine([(1.0, base), (1.0, bump)], name=f"pair {theorem} c2")

    hyperbola = {key: params[key] for key in ("p1", "p2") if key in params}
    if theorem.startswith("5"):
        base = catalogue("c_H_p1_p2", hyperbola)
        bump = catalogue("c_p00" if theorem == "5c" else "c_p0", poly)
        weight = 1.0
    else:
        base = catalogue("c_e_p1_p2", hyperbola)
        validated = _validate("c_e_p1_p2", hyperbola)
        bump = catalogue("c_e2" if theorem == "6c" else "c_e1")
        weight = abs(validated["p2"] - validated["p1"]) / 8.0
    c2 = combine([(1.0, base), (weight, bump)], name=f"pair {theorem} c2")
    if theorem in ("5a", "6a"):
        return base, c2
    return combine([(1.0, base), (0.5 * weight, bump)], name=f"pair {theorem} c1"), c2


def _sample_points(side: int, k_min: int) -> np.ndarray:
    return side * np.power(2.0, np.arange(k_min, CONSTRUCTION_SAMPLE_K_MAX + 1))


def verify_asymptotics(f: TSFunction, claim: AsymptoticClaim) -> AsymptoticReport:
    """
    Method Name :   verify_asymptotics
    Description :   Samples f at side * 2^k. Consistent when the samples past the last sign change
                    move monotonically toward the claim and the last sample is past the threshold
                    (|f| > 1e3 for divergence, |f - L| < 1e-3 for a limit) or scales at least like
                    |x|^(1/2) toward it.

    Output      :   AsymptoticReport; confidence "reduced" when overflowing samples were dropped
    On Failure  :   never raises
    """
    side = 1 if claim.side > 0 else -1
    confidence = "full"
    x = _sample_points(side, CONSTRUCTION_SAMPLE_K_MIN)
    jet = f.jet(x)
    usable = np.isfinite(jet.value) & ~np.asarray(jet.overflow, dtype=bool)
    if not usable.all():
        confidence = "reduced"
        if usable.sum() < CONSTRUCTION_MONOTONE_TAIL:
            x = _sample_points(side, 0)
            jet = f.jet(x)
            usable = np.isfinite(jet.value) & ~np.asarray(jet.overflow, dtype=bool)
        logging.warning(f"{f.describe()}: {int((~usable).sum())} overflowing samples dropped")
    samples = [(float(p), float(v) if ok else None) for p, v, ok in zip(x, jet.value, usable)]
    xs, values = x[usable], np.asarray(jet.value, dtype=float)[usable]
    if len(values) < 2:
        return AsymptoticReport(claim, False, samples, "reduced", "fewer than two usable samples")

    if claim.kind == "limit":
        gauge = values - claim.target
    else:
        gauge = values * (1.0 if claim.target >= 0 else -1.0)
    signs = np.sign(gauge)
    changes = np.flatnonzero((signs[:-1] * signs[1:]) < 0)
    start = int(changes[-1]) + 1 if len(changes) else 0
    tail_x, tail = xs[start:], np.abs(gauge[start:])
    recent = tail[-CONSTRUCTION_MONOTONE_TAIL:]
    scale = math.sqrt(abs(tail_x[-1] / tail_x[0])) if len(tail) >= 2 else None

    if claim.kind == "limit":
        monotone = bool(np.all(np.diff(recent) <= 0))
        reached = tail[-1] < CONSTRUCTION_LIMIT_THRESHOLD or (
            scale is not None and tail[0] > 0 and tail[-1] <= tail[0] / scale)
        detail = f"|f - {claim.target:g}| = {tail[-1]:.3g} at x = {tail_x[-1]:g}"
    else:
        monotone = bool(gauge[-1] > 0 and np.all(np.diff(recent) > 0))
        reached = gauge[-1] > CONSTRUCTION_DIVERGENCE_THRESHOLD or (
            scale is not None and tail[0] > 0 and tail[-1] >= tail[0] * scale)
        detail = f"f = {values[-1]:.6g} at x = {tail_x[-1]:g}"
    return AsymptoticReport(claim, bool(monotone and reached), samples, confidence, detail)


def _witness_locus(name: str, j: int, side: int) -> Optional[float]:
    """Point where the inner exponential equals j*pi, so the sine term vanishes and its cosine is (-1)^j."""
    level = math.log(j * math.pi)
    if name == "c_p0":
        return side * math.sqrt(level)
    if name == "c_p00":
        return level if side > 0 else None
    if name == "c_e1":
        return side * level ** 0.25
    return level ** (1.0 / 3.0) if side > 0 else None


def divergence_witnesses(name: str, count: int, side: int = 1, sign: int = 1,
                         params: Optional[dict] = None) -> DivergenceWitness:
    """
    Method Name :   divergence_witnesses
    Description :   Points where |c'| of an oscillating catalogue entry grows without bound, taken
                    at the analytic loci where the cosine factor is +-1 with the requested sign.
                    Sides on which c' tends to 0 instead give limit witnesses at x = -2^k.

    Output      :   DivergenceWitness with |x| increasing
    On Failure  :   ParameterRangeError; overflow truncates the sequence
    """
    if name not in WITNESS_NAMES:
        raise ParameterRangeError(name, "name", f"has no witness sequence; expected one of {WITNESS_NAMES}")
    side = 1 if side > 0 else -1
    sign = 1 if sign > 0 else -1
    f = catalogue(name, params)
    cap = window_caps(f)[0]
    if count <= 0:
        return DivergenceWitness(name, side, sign, "divergence", [])

    if _witness_locus(name, 1, side) is None:
        points = []
        for k in range(CONSTRUCTION_SAMPLE_K_MIN, CONSTRUCTION_SAMPLE_K_MIN + count):
            x = side * 2.0 ** k
            jet = f.jet(x)
            if jet.overflow or not math.isfinite(jet.d1):
                break
            points.append((x, float(jet.d1)))
        return DivergenceWitness(name, side, sign, "limit", points)

    # cos(j*pi) * side must carry the requested sign of c'
    parity = 0 if sign * side > 0 else 1
    points: List[Tuple[float, float]] = []
    j = 2 if parity == 0 else 1
    for _ in range(CONSTRUCTION_WITNESS_MAX_TRIES * count):
        if len(points) >= count:
            break
        x = _witness_locus(name, j, side)
        if abs(x) > cap:
            break
        jet = f.jet(x)
        if jet.overflow or not math.isfinite(jet.d1):
            break
        if np.sign(jet.d1) == sign and (not points or abs(jet.d1) > abs(points[-1][1])):
            points.append((x, float(jet.d1)))
        j += 2
    if len(points) < count:
        logging.warning(f"{name}: only {len(points)} of {count} witnesses before |x| = {cap:g}")
    return DivergenceWitness(name, side, sign, "divergence", points)


_CLAIMS = {
    "4": {"-inf": ("diverge", 1.0, None), "+inf": ("diverge", 1.0, None)},
    "5": {"-inf": ("limit", None, "p1"), "+inf": ("diverge", 1.0, None)},
    "6": {"-inf": ("limit", None, "p2"), "+inf": ("limit", None, "p1")},
}
_CRITICAL_SETS = {
    "4": ("nonempty", "nonempty"), "5a": ("empty", "nonempty"), "5b": ("nonempty", "nonempty"),
    "5c": ("nonempty", "nonempty"), "6a": ("empty", "nonempty"), "6b": ("nonempty", "nonempty"),
    "6c": ("nonempty", "nonempty"),
}


def _expanding_windows(c1: TSFunction, c2: TSFunction, windows: Iterable[float]) -> List[float]:
    cap = min(window_caps(c1)[1], window_caps(c2)[1])
    widths = sorted({min(float(w), cap) for w in windows})
    return widths


def verify_pair(theorem: str, c1: TSFunction, c2: TSFunction, params: Optional[dict] = None,
                windows: Iterable[float] = CONSTRUCTION_EXPANDING_WINDOWS,
                tol: Tolerances = Tolerances()) -> PairCheck:
    """
    Method Name :   verify_pair
    Description :   Window-scale checks of a build_pair output: separation and critical-set
                    emptiness on expanding windows [-W, W] (capped where oscillation outruns the
                    lattice), image bounds on a wide sample, asymptotic claims at both ends.

    Output      :   PairCheck
    On Failure  :   never raises for failed checks; they are recorded
    """
    logging.info("Entered verify_pair method of constructions")
    theorem = str(theorem)
    family = theorem[0]
    params = dict(params or {})
    hyperbola = _validate("c_e_p1_p2" if family == "6" else "c_H_p1_p2",
                          {k: params[k] for k in ("p1", "p2") if k in params}) if family != "4" else {}
    checks: Dict[str, bool] = {}
    detail: Dict[str, object] = {}

    widths = _expanding_windows(c1, c2, windows)
    detail["windows"] = widths
    expected = _CRITICAL_SETS[theorem]
    for width in widths:
        window = (-width, width)
        try:
            region = make_region(c1, c2, window, tol)
            checks[f"separation[{width:g}]"] = True
            sets = region.critical_sets()
        except SeparationError as e:
            checks[f"separation[{width:g}]"] = False
            detail[f"separation[{width:g}]"] = str(e)
            continue
        except AccumulationError as e:
            checks[f"critical_sets[{width:g}]"] = False
            detail[f"critical_sets[{width:g}]"] = str(e)
            continue
        for tag, critical_set, claim in zip(("c1", "c2"), sets, expected):
            found = len(critical_set.interior_items())
            checks[f"S({tag}) {claim}[{width:g}]"] = (found == 0) == (claim == "empty")
            detail[f"S({tag})[{width:g}]"] = found

    overflow_cap = min(window_caps(c1)[0], window_caps(c2)[0])
    sample_width = min(max(float(w) for w in windows), overflow_cap)
    s = np.linspace(-sample_width, sample_width, 4097)
    values = []
    for f in (c1, c2):
        jet = f.jet(s)
        values.append(np.asarray(jet.value)[np.isfinite(jet.value) & ~np.asarray(jet.overflow, dtype=bool)])
    lowest, highest = min(float(v.min()) for v in values), max(float(v.max()) for v in values)
    if family == "4":
        checks["image_bounds"] = lowest >= 1.0
    elif family == "5":
        checks["image_bounds"] = lowest > hyperbola["p1"]
    else:
        checks["image_bounds"] = min(hyperbola.values()) < lowest and highest < max(hyperbola.values())
    detail["image"] = [lowest, highest]

    for side_name, (kind, target, target_key) in _CLAIMS[family].items():
        side = -1 if side_name == "-inf" else 1
        claim = AsymptoticClaim(side, kind, hyperbola[target_key] if target_key else target)
        for tag, f in (("c1", c1), ("c2", c2)):
            report = verify_asymptotics(f, claim)
            checks[f"{tag} {kind} at {side_name}"] = report.consistent
            detail[f"{tag} {kind} at {side_name}"] = report.to_json()
    logging.info("Exited verify_pair method of constructions")
    return PairCheck(theorem=theorem, checks=checks, detail=detail)
