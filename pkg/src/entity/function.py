
import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from src.entity.expression import Expr, Jet2

CATALOGUE_VARIANT = "catalogue"
ROTATE_VARIANT = "rotate"
COMBINATION_VARIANT = "combination"
VARIANTS = (CATALOGUE_VARIANT, ROTATE_VARIANT, COMBINATION_VARIANT)


@dataclass(frozen=True)
class ConstructionSpec:
    """
    Replayable recipe for a function without (or beyond) a single closed form.

    catalogue:   name + params of a named closed form
    rotate:      params c0 (backing JSON), a_c, bounds [a_cm, a_cM], window [x_min, x_max]
    combination: params terms = [[weight, backing JSON], ...]
    """
    variant: str
    name: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown construction variant {self.variant!r}")

    def to_json(self) -> dict:
        record = {"variant": self.variant, "params": self.params}
        if self.name is not None:
            record["name"] = self.name
        return record

    @classmethod
    def from_json(cls, record: dict) -> "ConstructionSpec":
        params = {key: value for key, value in record.items() if key not in ("variant", "name", "params")}
        params.update(record.get("params") or {})
        return cls(variant=record["variant"], name=record.get("name"), params=params)

    def canonical(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


Backing = Union[Expr, ConstructionSpec]


class TSFunction:
    """
    A real function of one variable backed by an expression or a construction spec,
    plus a constant height offset. Evaluation returns order-2 jets.
    """

    def __init__(self, backing: Backing, offset: float = 0.0):
        if not isinstance(backing, (Expr, ConstructionSpec)):
            raise TypeError(f"TSFunction backing must be an Expr or ConstructionSpec, got {type(backing).__name__}")
        self.backing = backing
        self.offset = float(offset)
        self._evaluator = None
        self._critical_cache: Dict[Tuple, object] = {}

    @property
    def evaluator(self):
        if self._evaluator is None:
            if isinstance(self.backing, Expr):
                from src.components.jet_evaluator import JetEvaluator

                self._evaluator = JetEvaluator(self.backing)
            else:
                from src.components.constructions import build_evaluator

                self._evaluator = build_evaluator(self.backing)
        return self._evaluator

    def jet(self, s) -> Jet2:
        result = self.evaluator.evaluate(s)
        return result.shifted(self.offset) if self.offset else result

    def value(self, s):
        return self.jet(s).value

    def derivative(self, s):
        return self.jet(s).d1

    def __call__(self, s):
        return self.value(s)

    def shifted(self, k: float) -> "TSFunction":
        return TSFunction(self.backing, self.offset + k)

    def critical_set(self, window, tol):
        """Critical set on window, cached per (window, tolerances)."""
        key = (float(window[0]), float(window[1]), tol)
        if key not in self._critical_cache:
            from src.components.critical_detection import CriticalSetFinder

            self._critical_cache[key] = CriticalSetFinder(tol).find_critical_set(self, window)
        return self._critical_cache[key]

    def backing_json(self) -> dict:
        if isinstance(self.backing, Expr):
            from src.components.expression_parser import ExpressionParser

            return {"expr": ExpressionParser.to_json(self.backing)}
        return {"construction": self.backing.to_json()}

    def to_json(self) -> dict:
        record = self.backing_json()
        if self.offset:
            record["offset"] = self.offset
        return record

    @classmethod
    def from_json(cls, record: dict) -> "TSFunction":
        from src.components.expression_parser import ExpressionParser, parse

        offset = float(record.get("offset", 0.0))
        if "expr" in record:
            expr = record["expr"]
            backing = parse(expr) if isinstance(expr, str) else ExpressionParser.from_json(expr)
            return cls(backing, offset)
        if "construction" in record:
            return cls(ConstructionSpec.from_json(record["construction"]), offset)
        if "variant" in record:
            return cls(ConstructionSpec.from_json(record), offset)
        raise ValueError("function record needs an 'expr', 'construction' or 'variant' key")

    def describe(self) -> str:
        if isinstance(self.backing, Expr):
            text = str(self.backing)
        else:
            text = self.backing.name or self.backing.variant
        if self.offset:
            text = f"{text} + ({self.offset:g})"
        return text

    def __repr__(self) -> str:
        return f"TSFunction({self.describe()})"

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_evaluator"] = None
        return state

    def sample(self, window, n: int) -> Tuple[np.ndarray, Jet2]:
        s = np.linspace(float(window[0]), float(window[1]), int(n))
        return s, self.jet(s)
