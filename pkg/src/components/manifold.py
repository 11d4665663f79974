
import json
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.components.stability import critical_points
from src.constants import MANIFOLD_BOUNDARY_FRACTION
from src.entity.artifact_entity import HessianVerdict, RegularityReport
from src.entity.region import StripRegion
from src.exception import ImplicitSolveError, OffZeroSetError, ParameterRangeError
from src.logger import logging


@dataclass(frozen=True)
class ManifoldSpec:
    """
    The hypersurface F = 0 in R^{m+1} with coordinates (x1, x2, y_1..y_{m-1}), where
    F = (x1 - c1(x2)) (c2(x2) - x1) - sum(y_j^2). The height is the projection to x1.
    """
    m: int
    region: StripRegion

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ParameterRangeError("manifold", "m", f"must be an integer >= 2, got {self.m}")

    @property
    def dim(self) -> int:
        return self.m + 1


@dataclass(frozen=True)
class ZeroSample:
    point: Tuple[float, ...]
    on_boundary: bool

    def to_json(self) -> dict:
        return {"p": list(self.point), "boundary": self.on_boundary}


def _points(spec: ManifoldSpec, points) -> np.ndarray:
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], ZeroSample):
        points = [sample.point for sample in points]
    array = np.atleast_2d(np.asarray(points, dtype=float))
    if array.size == 0:
        return np.empty((0, spec.dim))
    if array.shape[1] != spec.dim:
        raise ValueError(f"expected points with {spec.dim} coordinates, got {array.shape[1]}")
    return array


def _boundary_jets(spec: ManifoldSpec, x2: np.ndarray):
    return spec.region.c1.jet(x2), spec.region.c2.jet(x2)


def defining_function(spec: ManifoldSpec, points) -> np.ndarray:
    p = _points(spec, points)
    lower, upper = _boundary_jets(spec, p[:, 1])
    x1 = p[:, 0]
    return (x1 - lower.value) * (upper.value - x1) - np.sum(p[:, 2:] ** 2, axis=1)


def gradient(spec: ManifoldSpec, points) -> np.ndarray:
    """Rows (dF/dx1, dF/dx2, dF/dy_1, ...)."""
    p = _points(spec, points)
    lower, upper = _boundary_jets(spec, p[:, 1])
    x1 = p[:, 0]
    grad = np.empty_like(p)
    grad[:, 0] = lower.value + upper.value - 2.0 * x1
    grad[:, 1] = -lower.d1 * (upper.value - x1) + upper.d1 * (x1 - lower.value)
    grad[:, 2:] = -2.0 * p[:, 2:]
    return grad


def _sphere_directions(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    if dim == 1:
        return rng.choice([-1.0, 1.0], size=(count, 1))
    directions = rng.standard_normal((count, dim))
    return directions / np.linalg.norm(directions, axis=1, keepdims=True)


def sample_zero_set(spec: ManifoldSpec, n: int, seed: int = 0,
                    boundary_fraction: float = MANIFOLD_BOUNDARY_FRACTION) -> List[ZeroSample]:
    """
    Method Name :   sample_zero_set
    Description :   Exact points of F = 0: (x1, x2) uniform in the strip over the window, y uniform on the
                    (m-2)-sphere of radius sqrt((x1 - c1)(c2 - x1)), followed by boundary_fraction * n
                    points with y = 0 on the graphs of c1 and c2. Deterministic under seed.

    Output      :   list of ZeroSample
    """
    logging.info("Entered sample_zero_set method of manifold module")
    if n <= 0:
        return []
    rng = np.random.default_rng(seed)
    region = spec.region
    lo, hi = region.window
    lattice = np.linspace(lo, hi, 4097)
    widest = float(np.max(region.c2.value(lattice) - region.c1.value(lattice))) * 1.1

    x2 = np.empty(0)
    while x2.size < n:
        candidates = rng.uniform(lo, hi, size=2 * n)
        widths = region.c2.value(candidates) - region.c1.value(candidates)
        keep = rng.uniform(0.0, widest, size=candidates.size) < widths
        x2 = np.concatenate([x2, candidates[keep]])
    x2 = x2[:n]
    lower, upper = region.c1.value(x2), region.c2.value(x2)
    x1 = lower + rng.uniform(0.0, 1.0, size=n) * (upper - lower)
    rho = np.sqrt(np.maximum((x1 - lower) * (upper - x1), 0.0))
    y = rho[:, None] * _sphere_directions(rng, n, spec.m - 1)
    interior = np.column_stack([x1, x2, y])

    n_boundary = int(round(boundary_fraction * n))
    b2 = rng.uniform(lo, hi, size=n_boundary)
    on_upper = rng.uniform(size=n_boundary) < 0.5
    b1 = np.where(on_upper, region.c2.value(b2), region.c1.value(b2))
    boundary = np.column_stack([b1, b2, np.zeros((n_boundary, spec.m - 1))])

    threshold = region.tol.zero_set
    samples = [ZeroSample(tuple(float(c) for c in row), bool(np.sum(row[2:] ** 2) <= threshold))
               for row in np.vstack([interior, boundary])]
    logging.debug(f"sampled {n} interior and {n_boundary} boundary points for m = {spec.m}")
    logging.info("Exited sample_zero_set method of manifold module")
    return samples


def verify_regularity(spec: ManifoldSpec, samples: Sequence[ZeroSample]) -> RegularityReport:
    """0 is a regular value: grad F never vanishes, and at y = 0 the x1-partial is +-(c2 - c1)."""
    region = spec.region
    if not samples:
        return RegularityReport(min_grad_norm=float("inf"), min_boundary_margin=None,
                                separation_certificate=region.separation_certificate, samples=0,
                                boundary_samples=0, holds=True)
    grad = gradient(spec, samples)
    norms = np.linalg.norm(grad, axis=1)
    on_boundary = np.array([sample.on_boundary for sample in samples])
    margin = float(np.min(np.abs(grad[on_boundary, 0]))) if on_boundary.any() else None
    holds = bool(np.min(norms) > 0.0)
    if margin is not None:
        holds = holds and margin >= region.separation_certificate - region.tol.residual
    return RegularityReport(min_grad_norm=float(np.min(norms)), min_boundary_margin=margin,
                            separation_certificate=region.separation_certificate, samples=len(samples),
                            boundary_samples=int(on_boundary.sum()), holds=holds)


def _check_on_zero_set(spec: ManifoldSpec, point) -> np.ndarray:
    p = _points(spec, [point])
    residual = float(abs(defining_function(spec, p)[0]))
    scale = max(1.0, float(spec.region.c2.value(p[0, 1]) - spec.region.c1.value(p[0, 1])) ** 2)
    if residual > spec.region.tol.zero_set * scale:
        raise OffZeroSetError(residual)
    return p


def critical_residual(spec: ManifoldSpec, point) -> float:
    """Norm of the gradient components other than dF/dx1; zero exactly at critical points of the height."""
    p = _check_on_zero_set(spec, point)
    return float(np.linalg.norm(gradient(spec, p)[0, 1:]))


def restricted_hessian(spec: ManifoldSpec, point) -> HessianVerdict:
    """
    Hessian of x1 = phi(x2, y) solving F = 0 near the point, by second order implicit differentiation:
    phi_ij = -(F_ij + F_1i phi_j + F_1j phi_i + F_11 phi_i phi_j) / F_1.
    """
    p = _check_on_zero_set(spec, point)[0]
    region = spec.region
    lower, upper = region.c1.jet(p[1]), region.c2.jet(p[1])
    x1 = p[0]
    grad = gradient(spec, p[None, :])[0]
    f1 = grad[0]
    if abs(f1) <= region.tol.residual:
        raise ImplicitSolveError(p, f1)

    k = spec.dim - 1
    f_zz = np.zeros((k, k))
    f_zz[0, 0] = -lower.d2 * (upper.value - x1) + upper.d2 * (x1 - lower.value) - 2.0 * lower.d1 * upper.d1
    f_zz[1:, 1:] = -2.0 * np.eye(k - 1)
    f_1z = np.zeros(k)
    f_1z[0] = lower.d1 + upper.d1
    f_11 = -2.0

    phi = -grad[1:] / f1
    hessian = -(f_zz + np.outer(f_1z, phi) + np.outer(phi, f_1z) + f_11 * np.outer(phi, phi)) / f1
    eigenvalues = np.linalg.eigvalsh(hessian)
    smallest = float(np.min(np.abs(eigenvalues)))
    return HessianVerdict(eigenvalues=[float(v) for v in eigenvalues], index=int(np.sum(eigenvalues < 0)),
                          min_abs_eigenvalue=smallest, nondegenerate=smallest > region.tol.hess)


def implicit_height(spec: ManifoldSpec, x2: float, y, branch: str = "c1") -> float:
    """Closed-form branch of F = 0 solved for x1; the 'c1' branch is the one through the graph of c1."""
    region = spec.region
    lower, upper = float(region.c1.value(x2)), float(region.c2.value(x2))
    discriminant = (upper - lower) ** 2 - 4.0 * float(np.sum(np.square(y)))
    if discriminant < 0.0:
        raise ImplicitSolveError([np.nan, x2, *np.atleast_1d(y)], 0.0)
    root = np.sqrt(discriminant)
    return 0.5 * (lower + upper - root) if branch == "c1" else 0.5 * (lower + upper + root)


def check_slice_spheres(spec: ManifoldSpec, samples: Sequence[ZeroSample]) -> Dict[str, object]:
    """Each x2-slice is the (m-1)-sphere of radius (c2 - c1)/2 centred at x1 = (c1 + c2)/2, y = 0."""
    if not samples:
        return {"holds": True, "max_relative_deviation": 0.0}
    p = _points(spec, samples)
    lower, upper = spec.region.c1.value(p[:, 1]), spec.region.c2.value(p[:, 1])
    radius = 0.5 * (upper - lower)
    distance = np.sqrt((p[:, 0] - 0.5 * (lower + upper)) ** 2 + np.sum(p[:, 2:] ** 2, axis=1))
    deviation = float(np.max(np.abs(distance - radius) / radius))
    return {"holds": deviation <= np.sqrt(spec.region.tol.zero_set), "max_relative_deviation": deviation}


def critical_point_sweep(spec: ManifoldSpec, samples: Sequence[ZeroSample]) -> Dict[str, object]:
    """
    Residuals at the points (c_i(x), x, 0) for x in S(c_i) against residuals at the samples,
    and the restricted Hessian at every enumerated critical point.
    """
    region = spec.region
    zeros = (0.0,) * (spec.m - 1)
    records = []
    for value, locus, tag, _ in critical_points(region):
        point = (value, locus) + zeros
        verdict = restricted_hessian(spec, point)
        records.append({"point": list(point), "function": tag, "residual": critical_residual(spec, point),
                        "hessian": verdict.to_json()})

    loci = {tag: np.array([r["point"][1] for r in records if r["function"] == tag]) for tag in ("c1", "c2")}
    clearance = 1e-3 * region.width
    min_other = float("inf")
    if samples:
        p = _points(spec, samples)
        residuals = np.linalg.norm(gradient(spec, p)[:, 1:], axis=1)
        lower, upper = region.c1.value(p[:, 1]), region.c2.value(p[:, 1])
        for row, residual, a, b in zip(p, residuals, lower, upper):
            if np.sum(row[2:] ** 2) <= region.tol.zero_set:
                tag = "c1" if abs(row[0] - a) <= abs(row[0] - b) else "c2"
                if loci[tag].size and np.min(np.abs(loci[tag] - row[1])) < clearance:
                    continue
            min_other = min(min_other, float(residual))

    max_critical = max((r["residual"] for r in records), default=0.0)
    return {"critical_points": records, "max_critical_residual": max_critical,
            "min_noncritical_residual": min_other,
            "all_nondegenerate": all(r["hessian"]["nondegenerate"] for r in records),
            "holds": max_critical < region.tol.residual and min_other > region.tol.residual}


def dump_samples(spec: ManifoldSpec, samples: Sequence[ZeroSample]) -> str:
    """JSON lines, one per sample: point, F, grad F and the boundary flag."""
    if not samples:
        return ""
    values = defining_function(spec, samples)
    grads = gradient(spec, samples)
    lines = [json.dumps({"p": list(sample.point), "F": float(value), "gradF": [float(g) for g in grad],
                         "boundary": sample.on_boundary}, sort_keys=True)
             for sample, value, grad in zip(samples, values, grads)]
    return "\n".join(lines) + "\n"
