
"""
Expression trees in the single variable x and their order-2 jets.

Nodes are frozen dataclasses, so structural equality is ordinary ``==``.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from src.constants import EXP_OVERFLOW_ARG

FUNCTION_NAMES = ("sin", "cos", "exp", "sqrt", "atan")
NAMED_CONSTANTS = {"pi": np.pi, "e": np.e}


class Expr:
    """Base class of expression nodes."""

    def __str__(self) -> str:
        from src.components.expression_parser import ExpressionParser

        return ExpressionParser.print(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value < 0:
            raise ValueError(f"Const holds a finite non-negative literal, got {self.value!r}; use Neg")


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class NamedConst(Expr):
    name: str


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


Number = Union[float, np.ndarray]


@dataclass(frozen=True)
class Jet2:
    """
    (value, d1, d2) of a function at one point or at an array of points.

    Arithmetic follows the order-2 product, quotient and chain rules. overflow marks entries
    whose evaluation left the finite range and is carried through every operation.
    """
    value: Number
    d1: Number
    d2: Number
    overflow: Union[bool, np.ndarray] = False

    @classmethod
    def constant(cls, value: float, like: np.ndarray) -> "Jet2":
        zeros = np.zeros_like(like, dtype=float)
        return cls(zeros + value, zeros, zeros.copy(), np.zeros_like(like, dtype=bool))

    @classmethod
    def variable(cls, x: np.ndarray) -> "Jet2":
        x = np.asarray(x, dtype=float)
        return cls(x.copy(), np.ones_like(x), np.zeros_like(x), np.zeros_like(x, dtype=bool))

    def _make(self, value, d1, d2, other: "Jet2" = None) -> "Jet2":
        overflow = self.overflow if other is None else (self.overflow | other.overflow)
        overflow = overflow | ~np.isfinite(value) | ~np.isfinite(d1) | ~np.isfinite(d2)
        return Jet2(value, d1, d2, overflow)

    def __add__(self, other: "Jet2") -> "Jet2":
        return self._make(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2, other)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return self._make(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2, other)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.d1, -self.d2, self.overflow)

    def __mul__(self, other: "Jet2") -> "Jet2":
        a, a1, a2 = self.as_tuple()
        b, b1, b2 = other.as_tuple()
        return self._make(a * b, a1 * b + a * b1, a2 * b + 2.0 * a1 * b1 + a * b2, other)

    def __truediv__(self, other: "Jet2") -> "Jet2":
        a, a1, a2 = self.as_tuple()
        b, b1, b2 = other.as_tuple()
        q = a / b
        q1 = (a1 - q * b1) / b
        q2 = (a2 - 2.0 * q1 * b1 - q * b2) / b
        return self._make(q, q1, q2, other)

    def __pow__(self, n: int) -> "Jet2":
        a, a1, a2 = self.as_tuple()
        if n == 0:
            return Jet2.constant(1.0, a)
        if n == 1:
            return self
        p1 = n * a ** (n - 1)
        p2 = n * (n - 1) * a ** (n - 2)
        return self._make(a ** n, p1 * a1, p2 * a1 * a1 + p1 * a2)

    def chain(self, g, g1, g2) -> "Jet2":
        """Composition with an outer function whose jet at self.value is (g, g1, g2)."""
        return self._make(g, g1 * self.d1, g2 * self.d1 * self.d1 + g1 * self.d2)

    def sin(self) -> "Jet2":
        s, c = np.sin(self.value), np.cos(self.value)
        return self.chain(s, c, -s)

    def cos(self) -> "Jet2":
        s, c = np.sin(self.value), np.cos(self.value)
        return self.chain(c, -s, -c)

    def exp(self) -> "Jet2":
        too_large = self.value > EXP_OVERFLOW_ARG
        e = np.where(too_large, np.inf, np.exp(np.minimum(self.value, EXP_OVERFLOW_ARG)))
        result = self.chain(e, e, e)
        return Jet2(result.value, result.d1, result.d2, result.overflow | too_large)

    def sqrt(self) -> "Jet2":
        r = np.sqrt(self.value)
        return self.chain(r, 0.5 / r, -0.25 / (r * r * r))

    def atan(self) -> "Jet2":
        u = self.value
        w = 1.0 + u * u
        return self.chain(np.arctan(u), 1.0 / w, -2.0 * u / (w * w))

    @property
    def any_overflow(self) -> bool:
        return bool(np.any(self.overflow))

    def at(self, index) -> "Jet2":
        return Jet2(float(np.asarray(self.value)[index]), float(np.asarray(self.d1)[index]),
                    float(np.asarray(self.d2)[index]), bool(np.asarray(self.overflow)[index]))

    def as_tuple(self):
        return (self.value, self.d1, self.d2)

    def shifted(self, k: float) -> "Jet2":
        return Jet2(self.value + k, self.d1, self.d2, self.overflow)
