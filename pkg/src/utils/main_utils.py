
import json
import math
import os
import sys
from enum import Enum
from typing import Callable, Dict, Hashable, List

import numpy as np
import dill
import yaml

from src.exception import ReebStripException
from src.logger import logging


def read_yaml_file(file_path: str) -> dict:
    try:
        with open(file_path, "rb") as yaml_file:
            return yaml.safe_load(yaml_file)

    except Exception as e:
        raise ReebStripException(e, sys) from e


def write_yaml_file(file_path: str, content: object, replace: bool = False) -> None:
    try:
        if replace:
            if os.path.exists(file_path):
                os.remove(file_path)
        os.makedirs(os.path.dirname(file_path) or ".", exist_ok=True)
        with open(file_path, "w") as file:
            yaml.safe_dump(to_plain(content), file, sort_keys=True)
    except Exception as e:
        raise ReebStripException(e, sys) from e


def to_plain(content: object) -> object:
    """
    Converts numpy scalars/arrays, tuples and non-finite floats into JSON-safe builtins.
    Infinite and NaN floats become None.
    """
    if isinstance(content, Enum):
        return to_plain(content.value)
    if isinstance(content, dict):
        return {str(key): to_plain(value) for key, value in content.items()}
    if isinstance(content, (list, tuple)):
        return [to_plain(value) for value in content]
    if isinstance(content, np.ndarray):
        return [to_plain(value) for value in content.tolist()]
    if isinstance(content, (np.bool_, bool)):
        return bool(content)
    if isinstance(content, (np.integer,)):
        return int(content)
    if isinstance(content, (np.floating, float)):
        value = float(content)
        return value if math.isfinite(value) else None
    return content


def dump_json(content: object) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_plain(content), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json_file(file_path: str, content: object) -> None:
    try:
        os.makedirs(os.path.dirname(file_path) or ".", exist_ok=True)
        with open(file_path, "w") as file:
            file.write(dump_json(content))
    except Exception as e:
        raise ReebStripException(e, sys) from e


def read_json_file(file_path: str) -> object:
    try:
        with open(file_path, "r") as file:
            return json.load(file)
    except Exception as e:
        raise ReebStripException(e, sys) from e


def load_object(file_path: str) -> object:
    """
    Returns a persisted object (graph, region) from the artifact directory.
    file_path: str location of file to load
    """
    try:
        with open(file_path, "rb") as file_obj:
            obj = dill.load(file_obj)
        return obj
    except Exception as e:
        raise ReebStripException(e, sys) from e


def save_numpy_array_data(file_path: str, array: np.ndarray):
    """
    Save numpy array data to file
    file_path: str location of file to save
    array: np.ndarray data to save
    """
    try:
        dir_path = os.path.dirname(file_path)
        os.makedirs(dir_path or ".", exist_ok=True)
        with open(file_path, 'wb') as file_obj:
            np.save(file_obj, array)
    except Exception as e:
        raise ReebStripException(e, sys) from e


def load_numpy_array_data(file_path: str) -> np.ndarray:
    try:
        with open(file_path, 'rb') as file_obj:
            return np.load(file_obj)
    except Exception as e:
        raise ReebStripException(e, sys) from e


def save_object(file_path: str, obj: object) -> None:
    logging.info("Entered the save_object method of utils")

    try:
        os.makedirs(os.path.dirname(file_path) or ".", exist_ok=True)
        with open(file_path, "wb") as file_obj:
            dill.dump(obj, file_obj)

        logging.info("Exited the save_object method of utils")

    except Exception as e:
        raise ReebStripException(e, sys) from e


def bisect_roots(fn: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray,
                 xtol: float, max_iter: int = 200) -> np.ndarray:
    """
    Vectorised bracketing bisection.

    Every bracket [lo_i, hi_i] must carry a sign change of fn (or an exact zero at an end).
    fn is evaluated on whole arrays, so the brackets are refined in lock-step until every
    width is below xtol or max_iter halvings have been spent.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    if lo.size == 0:
        return lo
    f_lo = np.asarray(fn(lo), dtype=float)
    f_hi = np.asarray(fn(hi), dtype=float)
    done = (f_lo == 0.0) | (f_hi == 0.0)
    hi = np.where(f_lo == 0.0, lo, hi)
    lo = np.where((f_hi == 0.0) & (f_lo != 0.0), hi, lo)
    for _ in range(max_iter):
        if np.all(done | (hi - lo <= xtol)):
            break
        mid = 0.5 * (lo + hi)
        f_mid = np.asarray(fn(mid), dtype=float)
        exact = f_mid == 0.0
        same_side = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(done, lo, np.where(exact, mid, np.where(same_side, mid, lo)))
        f_lo = np.where(done | ~same_side, f_lo, f_mid)
        hi = np.where(done, hi, np.where(exact, mid, np.where(same_side, hi, mid)))
        done = done | exact
    return 0.5 * (lo + hi)


class UnionFind:
    """Disjoint sets over hashable keys with path halving and union by size."""

    def __init__(self):
        self._parent: Dict[Hashable, Hashable] = {}
        self._size: Dict[Hashable, int] = {}

    def add(self, key: Hashable) -> None:
        if key not in self._parent:
            self._parent[key] = key
            self._size[key] = 1

    def find(self, key: Hashable) -> Hashable:
        self.add(key)
        while self._parent[key] != key:
            self._parent[key] = self._parent[self._parent[key]]
            key = self._parent[key]
        return key

    def union(self, a: Hashable, b: Hashable) -> Hashable:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return root_a
        if self._size[root_a] < self._size[root_b]:
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a
        self._size[root_a] += self._size[root_b]
        return root_a

    def groups(self) -> List[List[Hashable]]:
        """Classes in order of their first-added member, members in insertion order."""
        by_root: Dict[Hashable, List[Hashable]] = {}
        for key in self._parent:
            by_root.setdefault(self.find(key), []).append(key)
        return list(by_root.values())
