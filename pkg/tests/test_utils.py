import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.constants import TOLERANCES_FILE_PATH
from src.entity.artifact_entity import Verdict
from src.entity.config_entity import RunConfig, Tolerances
from src.exception import ReebStripException
from src.utils.main_utils import (UnionFind, bisect_roots, dump_json, load_object, read_yaml_file, save_object,
                                  to_plain)


def test_union_find_groups():
    sets = UnionFind()
    for key in "abcde":
        sets.add(key)
    sets.union("a", "c")
    sets.union("d", "e")
    sets.union("c", "e")
    assert sets.find("a") == sets.find("d")
    assert sets.find("b") != sets.find("a")
    assert sorted(map(sorted, sets.groups())) == [["a", "c", "d", "e"], ["b"]]


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), max_size=40))
def test_union_find_matches_connected_components(pairs):
    sets = UnionFind()
    for a, b in pairs:
        sets.union(a, b)
    for a, b in pairs:
        assert sets.find(a) == sets.find(b)
    assert sum(len(group) for group in sets.groups()) == len({k for pair in pairs for k in pair})


def test_bisect_roots_vectorised():
    roots = bisect_roots(lambda x: x ** 2 - 2.0, np.array([0.0, -2.0]), np.array([2.0, 0.0]), 1e-13)
    np.testing.assert_allclose(roots, [math.sqrt(2.0), -math.sqrt(2.0)], atol=1e-12)


def test_bisect_roots_exact_endpoint():
    roots = bisect_roots(lambda x: x - 1.0, np.array([1.0]), np.array([3.0]), 1e-12)
    assert roots[0] == 1.0
    assert bisect_roots(np.sin, np.array([]), np.array([]), 1e-12).size == 0


def test_dump_json_is_sorted_with_trailing_newline():
    text = dump_json({"b": 1, "a": (1.5, np.float64(2.0)), "c": math.inf})
    assert text == '{\n  "a": [\n    1.5,\n    2.0\n  ],\n  "b": 1,\n  "c": null\n}\n'


def test_to_plain_converts_numpy_and_enums():
    assert to_plain({"v": Verdict.HOLDS, "n": np.int64(3), "b": np.bool_(True), "x": np.arange(2)}) == \
        {"v": "holds", "n": 3, "b": True, "x": [0, 1]}
    assert to_plain(math.nan) is None


def test_tolerance_profile_matches_defaults():
    assert Tolerances.from_yaml(TOLERANCES_FILE_PATH) == Tolerances()
    assert read_yaml_file(TOLERANCES_FILE_PATH)["tolerances"]["lattice"] == 2 ** 14


def test_tolerance_overrides_are_cast():
    tol = Tolerances.from_dict({"lattice": 4096.0, "hess": "1e-5"})
    assert tol.lattice == 4096 and isinstance(tol.lattice, int)
    assert tol.hess == 1e-5
    with pytest.raises(ValueError):
        Tolerances.from_dict({"unknown": 1})


def test_run_config_provenance_drops_output_locations():
    content = RunConfig(command="reeb", params=(("p1", 1.0),), out="x.json", artifact_dir="artifact").to_dict()
    assert "out" not in content and "artifact_dir" not in content
    assert content["params"] == {"p1": 1.0}


def test_object_round_trip(tmp_path):
    path = str(tmp_path / "nested" / "object.pkl")
    save_object(path, {"heights": (0.0, 1.0)})
    assert load_object(path) == {"heights": (0.0, 1.0)}
    with pytest.raises(ReebStripException):
        load_object(str(tmp_path / "missing.pkl"))
