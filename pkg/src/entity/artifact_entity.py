
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from src.utils.main_utils import to_plain


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    WINDOW_LIMITED_HOLDS = "window_limited_holds"
    UNDETERMINED = "undetermined"

    @property
    def positive(self) -> bool:
        return self in (Verdict.HOLDS, Verdict.WINDOW_LIMITED_HOLDS)


@dataclass(frozen=True)
class ValueCluster:
    center: float
    values: Tuple[float, ...]
    loci: Tuple[float, ...]

    @property
    def loci_spread(self) -> float:
        return max(self.loci) - min(self.loci) if self.loci else 0.0


@dataclass
class CWReport:
    critical_values: List[float]
    min_gap: float
    declared_Z_F: List[float]
    discrete_in_window: bool
    closed_away_from_ZF: bool
    ZF_points_clean: bool
    warnings: List[str] = field(default_factory=list)
    clusters: List[ValueCluster] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.discrete_in_window and self.closed_away_from_ZF and self.ZF_points_clean

    def to_json(self) -> dict:
        return to_plain({"critical_values": self.critical_values, "min_gap": self.min_gap,
                         "declared_Z_F": self.declared_Z_F,
                         "verdicts": {"discrete_in_window": self.discrete_in_window,
                                      "closed_away_from_ZF": self.closed_away_from_ZF,
                                      "ZF_points_clean": self.ZF_points_clean},
                         "warnings": self.warnings})


@dataclass(frozen=True)
class PredictedVertex:
    height: float
    degree: int
    item_index: int
    locus: float
    copy: str

    def to_json(self) -> dict:
        return {"height": self.height, "degree": self.degree,
                "provenance": {"item": self.item_index, "locus": self.locus, "copy": self.copy}}


@dataclass(frozen=True)
class PredictedVertices:
    vertices: Tuple[PredictedVertex, ...]
    a: float

    def __len__(self) -> int:
        return len(self.vertices)

    def multiset(self) -> List[Tuple[float, int]]:
        return sorted((v.height, v.degree) for v in self.vertices)

    def to_json(self) -> dict:
        return {"a": self.a, "vertices": [v.to_json() for v in self.vertices]}


@dataclass
class PredictionComparison:
    matches: bool
    compared: int
    mismatches: List[str] = field(default_factory=list)
    height_window: Tuple[float, float] = (0.0, 0.0)

    def to_json(self) -> dict:
        return to_plain(asdict(self))


@dataclass
class BandCheck:
    holds: bool
    bands_checked: int
    failures: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return to_plain(asdict(self))


@dataclass
class StabilityReport:
    morse: Verdict
    critical_values_injective: Verdict
    stable_sufficient: Verdict
    strongly_stable: Verdict
    infinitesimally_stable: Verdict
    evidence: Dict[str, object] = field(default_factory=dict)

    VERDICT_NAMES = ("morse", "critical_values_injective", "stable_sufficient", "strongly_stable",
                     "infinitesimally_stable")

    def verdicts(self) -> Dict[str, Verdict]:
        return {name: getattr(self, name) for name in self.VERDICT_NAMES}

    def to_json(self) -> dict:
        return to_plain({"verdicts": {name: verdict.value for name, verdict in self.verdicts().items()},
                         "evidence": self.evidence})


@dataclass
class MorseCheck:
    holds: bool
    degenerate_loci: List[float] = field(default_factory=list)
    flat_intervals: List[Tuple[float, float]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return to_plain(asdict(self))


@dataclass
class RegularityReport:
    min_grad_norm: float
    min_boundary_margin: Optional[float]
    separation_certificate: float
    samples: int
    boundary_samples: int
    holds: bool

    def to_json(self) -> dict:
        return to_plain(asdict(self))


@dataclass
class HessianVerdict:
    eigenvalues: List[float]
    index: int
    min_abs_eigenvalue: float
    nondegenerate: bool

    @property
    def sign_pattern(self) -> str:
        return "".join("+" if value > 0 else "-" if value < 0 else "0" for value in self.eigenvalues)

    def to_json(self) -> dict:
        record = to_plain(asdict(self))
        record["sign_pattern"] = self.sign_pattern
        return record


@dataclass(frozen=True)
class AsymptoticClaim:
    """side is -1 or +1; kind 'limit' with a target, or 'diverge' with sign +1/-1 of the divergence."""
    side: int
    kind: str
    target: float = 0.0

    def to_json(self) -> dict:
        return {"side": "+inf" if self.side > 0 else "-inf", "kind": self.kind, "target": self.target}


@dataclass
class AsymptoticReport:
    claim: AsymptoticClaim
    consistent: bool
    samples: List[Tuple[float, Optional[float]]]
    confidence: str = "full"
    detail: str = ""

    def to_json(self) -> dict:
        return to_plain({"claim": self.claim.to_json(), "consistent": self.consistent, "samples": self.samples,
                         "confidence": self.confidence, "detail": self.detail})


@dataclass
class DivergenceWitness:
    name: str
    side: int
    sign: int
    mode: str
    points: List[Tuple[float, float]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return to_plain(asdict(self))


@dataclass
class PairCheck:
    theorem: str
    checks: Dict[str, bool]
    detail: Dict[str, object] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return to_plain({"theorem": self.theorem, "checks": self.checks, "detail": self.detail, "holds": self.holds})


@dataclass
class EquivalenceCertificate:
    equivalent: bool
    reason: str
    mapping: Dict[int, int] = field(default_factory=dict)
    tol_h: float = 0.0

    def __bool__(self) -> bool:
        return self.equivalent

    def to_json(self) -> dict:
        return to_plain({"equivalent": self.equivalent, "reason": self.reason, "tol_h": self.tol_h,
                         "mapping": {str(k): v for k, v in sorted(self.mapping.items())}})


@dataclass
class CommandOutcome:
    """Result of one pipeline command: the JSON-ready result, its verdict and the rendered output document."""
    command: str
    result: Dict[str, object]
    success: bool
    document: bytes = b""
