
from typing import Union

import numpy as np

from src.components.expression_parser import to_text
from src.entity.expression import NAMED_CONSTANTS, BinOp, Const, Expr, Func, Jet2, NamedConst, Neg, Pow, Var
from src.exception import ExprDomainError


class JetEvaluator:
    """Evaluates an expression together with its first two derivatives, vectorised over x."""

    def __init__(self, expression: Expr):
        self.expression = expression

    def evaluate(self, x: Union[float, np.ndarray]) -> Jet2:
        """
        Method Name :   evaluate
        Description :   Forward-mode order-2 evaluation of the expression at x.

        Output      :   Jet2 of floats for scalar x, of arrays otherwise
        On Failure  :   ExprDomainError naming the offending node
        """
        scalar = np.ndim(x) == 0
        points = np.atleast_1d(np.asarray(x, dtype=float))
        with np.errstate(all="ignore"):
            jet = self._visit(self.expression, points)
        if scalar:
            return jet.at(0)
        return jet

    def _visit(self, node: Expr, x: np.ndarray) -> Jet2:
        match node:
            case Const(value=value):
                return Jet2.constant(value, x)
            case Var():
                return Jet2.variable(x)
            case NamedConst(name=name):
                return Jet2.constant(NAMED_CONSTANTS[name], x)
            case Neg(arg=arg):
                return -self._visit(arg, x)
            case BinOp(op="+", left=left, right=right):
                return self._visit(left, x) + self._visit(right, x)
            case BinOp(op="-", left=left, right=right):
                return self._visit(left, x) - self._visit(right, x)
            case BinOp(op="*", left=left, right=right):
                return self._visit(left, x) * self._visit(right, x)
            case BinOp(op="/", left=left, right=right):
                numerator, denominator = self._visit(left, x), self._visit(right, x)
                self._check(node, x, (denominator.value == 0.0) & ~denominator.overflow, "division by zero")
                return numerator / denominator
            case Pow(base=base, exponent=exponent):
                inner = self._visit(base, x)
                if exponent < 0:
                    self._check(node, x, (inner.value == 0.0) & ~inner.overflow, "negative power of zero")
                return inner ** exponent
            case Func(name=name, arg=arg):
                inner = self._visit(arg, x)
                if name == "sqrt":
                    self._check(node, x, (inner.value <= 0.0) & ~inner.overflow, "sqrt of a non-positive argument")
                return getattr(inner, name)()
        raise TypeError(f"not an expression node: {node!r}")

    @staticmethod
    def _check(node: Expr, x: np.ndarray, bad: np.ndarray, message: str) -> None:
        if np.any(bad):
            first = float(x[np.argmax(bad)])
            raise ExprDomainError(message, to_text(node), first)


def eval_jet2(e: Expr, x: Union[float, np.ndarray]) -> Jet2:
    return JetEvaluator(e).evaluate(x)
