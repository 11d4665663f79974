
import os

TOOL_NAME: str = "reebstrip"
TOOL_VERSION: str = "0.1.0"

ARTIFACT_DIR: str = "artifact"
LOG_DIR: str = "logs"
LOG_DIR_ENV_KEY: str = "REEBSTRIP_LOG_DIR"

CATALOGUE_FILE_PATH: str = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
                                        "config", "catalogue.yaml")
TOLERANCES_FILE_PATH: str = os.path.join(os.path.dirname(CATALOGUE_FILE_PATH), "tolerances.yaml")


"""
Critical set detection related constants start with CRITICAL var name
"""
CRITICAL_ROOT_TOL: float = 1e-12
CRITICAL_FLAT_TOL: float = 1e-9
CRITICAL_SIDE_TOL: float = 1e-6
CRITICAL_FLAT_LEN: float = 1e-4
CRITICAL_HESS_TOL: float = 1e-6
CRITICAL_LATTICE_SIZE: int = 2 ** 14
CRITICAL_MAX_ITEMS: int = 10000

"""
Strip slicing related constants start with STRIP var name
"""
STRIP_LEVEL_TOL: float = 1e-12
STRIP_BISECTION_MAX_ITER: int = 200

"""
Reeb sweep related constants start with REEB var name
"""
REEB_EVENT_GAP: float = 1e-7
REEB_BAND_SAMPLES: int = 3
REEB_DISCRETE_TOL: float = 1e-6
REEB_ZF_BALL: float = 1e-3
REEB_SAME_VALUE_TOL: float = 1e-12
REEB_CW_CLUSTER_MIN: int = 3

"""
Stability related constants start with STABILITY var name
"""
STABILITY_INJECT_TOL: float = 1e-8
STABILITY_CLUSTER_SIZE: int = 5
STABILITY_CLUSTER_RADIUS: float = 1e-3
STABILITY_TAIL_SAMPLES: int = 60
STABILITY_TAIL_OUTERMOST: int = 3
STABILITY_TAIL_REACH: float = 150.0

"""
Constructions related constants start with CONSTRUCTION var name
"""
CONSTRUCTION_TABLE_NODES: int = 2 ** 12
CONSTRUCTION_SAMPLE_K_MIN: int = 3
CONSTRUCTION_SAMPLE_K_MAX: int = 9
CONSTRUCTION_DIVERGENCE_THRESHOLD: float = 1e3
CONSTRUCTION_LIMIT_THRESHOLD: float = 1e-3
CONSTRUCTION_EXPANDING_WINDOWS: tuple = (10.0, 20.0, 40.0)
CONSTRUCTION_MONOTONE_TAIL: int = 3
CONSTRUCTION_BISECTION_TOL: float = 1e-12
CONSTRUCTION_BRACKET_EXPANSIONS: int = 64
CONSTRUCTION_WITNESS_MAX_TRIES: int = 50

"""
Manifold related constants start with MANIFOLD var name
"""
MANIFOLD_DEFAULT_M: int = 2
MANIFOLD_ZERO_SET_TOL: float = 1e-10
MANIFOLD_RESIDUAL_TOL: float = 1e-8
MANIFOLD_BOUNDARY_FRACTION: float = 0.1

"""
Grid oracle related constants start with ORACLE var name
"""
ORACLE_N_T: int = 4096
ORACLE_N_S: int = 8192
ORACLE_MIN_N_T: int = 256
ORACLE_MIN_N_S: int = 1024

"""
Overflow guard shared by jets and samples
"""
EXP_OVERFLOW_ARG: float = 700.0

"""
Artifact file names written by the analysis pipeline
"""
RUN_CONFIG_FILE_NAME: str = "run_config.yaml"
REPORT_FILE_NAME: str = "report.json"
GRAPH_OBJECT_FILE_NAME: str = "graph.pkl"
VERTEX_TABLE_FILE_NAME: str = "vertices.csv"
EDGE_TABLE_FILE_NAME: str = "edges.csv"
CRITICAL_TABLE_FILE_NAME: str = "critical_items.csv"
SAMPLES_FILE_NAME: str = "samples.jsonl"
LATTICE_FILE_NAME: str = "lattice.npy"
