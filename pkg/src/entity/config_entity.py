
import os
from src.constants import *
from dataclasses import dataclass, field, fields, replace, asdict
from typing import Optional, Tuple


@dataclass(frozen=True)
class Tolerances:
    root: float = CRITICAL_ROOT_TOL
    flat: float = CRITICAL_FLAT_TOL
    side: float = CRITICAL_SIDE_TOL
    flat_len: float = CRITICAL_FLAT_LEN
    hess: float = CRITICAL_HESS_TOL
    lattice: int = CRITICAL_LATTICE_SIZE
    max_items: int = CRITICAL_MAX_ITEMS
    level: float = STRIP_LEVEL_TOL
    discrete: float = REEB_DISCRETE_TOL
    zf_ball: float = REEB_ZF_BALL
    same: float = REEB_SAME_VALUE_TOL
    inject: float = STABILITY_INJECT_TOL
    cluster_size: int = STABILITY_CLUSTER_SIZE
    cluster_radius: float = STABILITY_CLUSTER_RADIUS
    residual: float = MANIFOLD_RESIDUAL_TOL
    zero_set: float = MANIFOLD_ZERO_SET_TOL

    @classmethod
    def from_dict(cls, values: Optional[dict]) -> "Tolerances":
        values = dict(values or {})
        known = {f.name: f.type for f in fields(cls)}
        unknown = sorted(set(values) - set(known))
        if unknown:
            raise ValueError(f"unknown tolerance keys: {unknown}")
        defaults = cls()
        cast = {name: type(getattr(defaults, name))(value) for name, value in values.items()}
        return replace(defaults, **cast)

    @classmethod
    def from_yaml(cls, file_path: str) -> "Tolerances":
        from src.utils.main_utils import read_yaml_file

        content = read_yaml_file(file_path) or {}
        return cls.from_dict(content.get("tolerances", content))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SweepConfig:
    tol: Tolerances = field(default_factory=Tolerances)
    event_gap: float = REEB_EVENT_GAP
    heights: Optional[Tuple[float, float]] = None
    band_samples: int = REEB_BAND_SAMPLES


@dataclass(frozen=True)
class OracleConfig:
    n_t: int = ORACLE_N_T
    n_s: int = ORACLE_N_S

    @property
    def tol_factor(self) -> float:
        return 2.0


@dataclass(frozen=True)
class ManifoldConfig:
    m: int = MANIFOLD_DEFAULT_M
    boundary_fraction: float = MANIFOLD_BOUNDARY_FRACTION


@dataclass(frozen=True)
class ArtifactConfig:
    artifact_dir: str = ARTIFACT_DIR
    run_config_file_name: str = RUN_CONFIG_FILE_NAME
    report_file_name: str = REPORT_FILE_NAME
    graph_object_file_name: str = GRAPH_OBJECT_FILE_NAME
    vertex_table_file_name: str = VERTEX_TABLE_FILE_NAME
    edge_table_file_name: str = EDGE_TABLE_FILE_NAME
    critical_table_file_name: str = CRITICAL_TABLE_FILE_NAME
    samples_file_name: str = SAMPLES_FILE_NAME
    lattice_file_name: str = LATTICE_FILE_NAME

    def command_dir(self, command: str) -> str:
        return os.path.join(self.artifact_dir, command)


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs; serialised verbatim into its outputs."""
    command: str
    c1: Optional[str] = None
    c2: Optional[str] = None
    c1_spec: Optional[str] = None
    c2_spec: Optional[str] = None
    expr: Optional[str] = None
    points: Tuple[float, ...] = ()
    window: Optional[Tuple[float, float]] = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    event_gap: float = REEB_EVENT_GAP
    heights: Optional[Tuple[float, float]] = None
    a: Optional[float] = None
    zf: Tuple[float, ...] = ()
    theorem: Optional[str] = None
    name: Optional[str] = None
    params: Tuple[Tuple[str, object], ...] = ()
    m: int = MANIFOLD_DEFAULT_M
    n: int = 1000
    seed: int = 0
    count: int = 5
    n_t: int = ORACLE_N_T
    n_s: int = ORACLE_N_S
    format: str = "json"
    out: Optional[str] = None
    artifact_dir: Optional[str] = None

    @property
    def sweep_config(self) -> SweepConfig:
        return SweepConfig(tol=self.tolerances, event_gap=self.event_gap, heights=self.heights)

    @property
    def oracle_config(self) -> OracleConfig:
        return OracleConfig(n_t=self.n_t, n_s=self.n_s)

    def to_dict(self) -> dict:
        content = asdict(self)
        content["params"] = {key: value for key, value in self.params}
        # output location is not part of the provenance
        content.pop("out")
        content.pop("artifact_dir")
        return content
