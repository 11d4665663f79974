import json
import math
import os

import pandas as pd
import pytest

from src.components.reeb_sweep import build_reeb_graph
from src.entity.config_entity import RunConfig
from src.pipline.analysis_pipeline import AnalysisPipeline
from src.pipline.cli import EXIT_ERROR, EXIT_OK, EXIT_VERDICT_FAILED, run
from src.utils.main_utils import load_numpy_array_data, load_object, read_yaml_file

SIN_PAIR = ["--c1", "sin(x)", "--c2", "sin(x)+1", "--window", "-7", "7"]


def _run(tmp_path, *argv):
    out = tmp_path / "out.doc"
    code = run(list(argv) + ["--out", str(out)])
    return code, (out.read_bytes() if out.exists() else b"")


def test_eval_reports_jets(tmp_path):
    code, document = _run(tmp_path, "eval", "--expr", "sin(x)", "--points", "0", "1.5")
    assert code == EXIT_OK
    content = json.loads(document)
    first = content["result"]["points"][0]
    assert (first["value"], first["d1"], first["d2"]) == (0.0, 1.0, 0.0)
    assert content["tool"]["name"] == "reebstrip"
    assert content["config"]["command"] == "eval"


def test_reeb_dot_is_reproducible(tmp_path):
    code, first = _run(tmp_path, "reeb", *SIN_PAIR, "--format", "dot")
    assert code == EXIT_OK
    assert first.startswith(b"digraph")
    _, second = _run(tmp_path, "reeb", *SIN_PAIR, "--format", "dot")
    assert first == second


def test_reeb_json_carries_graph_and_band_check(tmp_path):
    code, document = _run(tmp_path, "reeb", *SIN_PAIR)
    assert code == EXIT_OK
    result = json.loads(document)["result"]
    assert result["band_check"]["holds"]
    assert len(result["graph"]["vertices"]) >= 8


def test_overlapping_graphs_are_a_domain_error(tmp_path):
    code, _ = _run(tmp_path, "reeb", "--c1", "sin(x)", "--c2", "sin(x)", "--window", "-7", "7")
    assert code == EXIT_ERROR


@pytest.mark.parametrize("argv", [[], ["reeb", "--bogus"], ["eval", "--expr", "sin(x)"], ["frobnicate"]])
def test_usage_errors(argv):
    assert run(argv) == EXIT_ERROR


def test_malformed_expression_is_a_domain_error(tmp_path):
    code, _ = _run(tmp_path, "eval", "--expr", "sin(x", "--points", "0")
    assert code == EXIT_ERROR


def test_version_flag():
    assert run(["--version"]) == EXIT_OK


def test_failed_verdict_exit_code(tmp_path):
    code, document = _run(tmp_path, "stability", "--c1", "sin(x)", "--c2", "sin(x)+2", "--window", "-7", "7")
    assert code == EXIT_VERDICT_FAILED
    verdicts = json.loads(document)["result"]["report"]["verdicts"]
    assert verdicts["critical_values_injective"] == "fails"


def test_predict_for_shifted_sine(tmp_path):
    code, document = _run(tmp_path, "predict", "--c1", "sin(x)", "--a", "1", "--window", "-7", "7")
    assert code == EXIT_OK
    assert json.loads(document)["result"]["comparison"]["matches"]


def test_check_cw_for_periodic_pair(tmp_path):
    code, _ = _run(tmp_path, "check-cw", "--c1", "sin(x)", "--c2", "sin(x)+3", "--window", "-7", "7")
    assert code == EXIT_OK


def test_construct_named_bump_lists_witnesses(tmp_path):
    code, document = _run(tmp_path, "construct", "--name", "c_p0", "--count", "3")
    assert code == EXIT_OK
    witnesses = json.loads(document)["result"]["witnesses"]
    assert len(witnesses) == 4
    assert {(w["side"], w["sign"]) for w in witnesses} == {(-1, 1), (-1, -1), (1, 1), (1, -1)}


def test_construct_rotation(tmp_path):
    code, document = _run(tmp_path, "construct", "--name", "rotate", "--c1", "1/(x^2+1)", "--window", "-10", "10",
                          "--param", "a_c=0.5", "--param", "a_cm=0.7", "--param", "a_cM=1.5")
    assert code == EXIT_OK
    result = json.loads(document)["result"]
    assert result["bounds_hold"]
    assert result["bound_violation"] is None


def test_construct_rotation_reports_the_failing_slope(tmp_path):
    code, document = _run(tmp_path, "construct", "--name", "rotate", "--c1", "sin(x)", "--window", "-10", "10",
                          "--param", "a_c=0.5", "--param", "a_cm=1", "--param", "a_cM=1.5")
    result = json.loads(document)["result"]
    assert not result["bounds_hold"]
    x, slope = result["bound_violation"]
    assert slope < -1.0 / 1.5 and abs(slope - math.cos(x)) < 1e-9


def test_construct_rejects_bad_parameter(tmp_path):
    code, _ = _run(tmp_path, "construct", "--name", "c_H_p1_p2", "--param", "p2=0")
    assert code == EXIT_ERROR


def test_config_with_unknown_tolerance_is_rejected(tmp_path):
    config = tmp_path / "profile.yaml"
    config.write_text("tolerances:\n  bogus: 1.0\n")
    code, _ = _run(tmp_path, "reeb", *SIN_PAIR, "--config", str(config))
    assert code == EXIT_ERROR


def test_config_profile_is_recorded(tmp_path):
    config = tmp_path / "profile.yaml"
    config.write_text("tolerances:\n  lattice: 8192\n")
    code, document = _run(tmp_path, "reeb", *SIN_PAIR, "--config", str(config))
    assert code == EXIT_OK
    assert json.loads(document)["config"]["tolerances"]["lattice"] == 8192


def test_reeb_artifacts(tmp_path, sin_region):
    artifact_dir = tmp_path / "artifact"
    code, _ = _run(tmp_path, "reeb", *SIN_PAIR, "--artifact-dir", str(artifact_dir))
    assert code == EXIT_OK
    directory = artifact_dir / "reeb"
    assert sorted(os.listdir(directory)) == ["edges.csv", "graph.pkl", "report.json", "run_config.yaml",
                                             "vertices.csv"]
    assert load_object(str(directory / "graph.pkl")) == build_reeb_graph(sin_region)
    assert read_yaml_file(str(directory / "run_config.yaml"))["config"]["window"] == [-7.0, 7.0]
    vertices = pd.read_csv(directory / "vertices.csv")
    assert list(vertices.columns) == ["id", "height", "kind", "degree", "footprint_lo", "footprint_hi", "truncated"]


def test_critical_items_table(tmp_path):
    outcome = AnalysisPipeline(RunConfig(command="critical", c1="sin(x)", window=(-7.0, 7.0),
                                         artifact_dir=str(tmp_path))).run_pipeline()
    assert outcome.success
    table = pd.read_csv(tmp_path / "critical" / "critical_items.csv")
    assert list(table["kind"]) == ["local_max", "local_min", "local_max", "local_min"]


def test_manifold_check_writes_samples(tmp_path):
    outcome = AnalysisPipeline(RunConfig(command="manifold-check", c1="sin(x)", c2="sin(x)+1", window=(-7.0, 7.0),
                                         n=200, seed=5, artifact_dir=str(tmp_path))).run_pipeline()
    assert outcome.success, outcome.result
    lines = (tmp_path / "manifold-check" / "samples.jsonl").read_text().splitlines()
    assert len(lines) == 220


def test_oracle_compare_on_constant_strip(tmp_path):
    outcome = AnalysisPipeline(RunConfig(command="oracle-compare", c1="-1", c2="1", window=(-5.0, 5.0), n_t=256,
                                         n_s=1024, artifact_dir=str(tmp_path))).run_pipeline()
    assert outcome.success
    table = load_numpy_array_data(str(tmp_path / "oracle-compare" / "lattice.npy"))
    assert table.shape == (256, 3)
    assert (table[:, 1] == 0).all() and (table[:, 2] == 1023).all()


def test_construct_writes_function_specs(tmp_path):
    AnalysisPipeline(RunConfig(command="construct", name="runge", artifact_dir=str(tmp_path))).run_pipeline()
    spec = json.loads((tmp_path / "construct" / "c1.json").read_text())
    assert spec["construction"]["variant"] == "catalogue"
    assert spec["construction"]["name"] == "runge"


def test_unknown_command_is_rejected():
    with pytest.raises(ValueError):
        AnalysisPipeline(RunConfig(command="train"))


def test_missing_window_is_reported():
    with pytest.raises(ValueError):
        AnalysisPipeline(RunConfig(command="reeb", c1="sin(x)", c2="sin(x)+1")).run_pipeline()
