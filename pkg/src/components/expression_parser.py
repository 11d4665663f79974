
import math
from functools import lru_cache
from typing import List

from pyparsing import (Forward, Literal, ParseBaseException, ParseFatalException, ParserElement, Regex,
                       StringEnd, Suppress, Word, ZeroOrMore, alphanums, alphas, one_of)

from src.entity.expression import (FUNCTION_NAMES, NAMED_CONSTANTS, BinOp, Const, Expr, Func, NamedConst, Neg, Pow,
                                   Var)
from src.exception import ExprSyntaxError, UnknownIdentifierError
from src.logger import logging

ParserElement.enable_packrat()

VARIABLE_NAME = "x"

_PRECEDENCE_ADD = 1
_PRECEDENCE_MUL = 2
_PRECEDENCE_NEG = 3
_PRECEDENCE_POW = 4
_PRECEDENCE_ATOM = 5

_BINARY_OPS = {"+": "add", "-": "sub", "*": "mul", "/": "div"}
_BINARY_SYMBOLS = {name: symbol for symbol, name in _BINARY_OPS.items()}


def _fold_left(tokens) -> Expr:
    items = list(tokens)
    node = items[0]
    for symbol, right in zip(items[1::2], items[2::2]):
        node = BinOp(symbol, node, right)
    return node


def _fold_power(tokens) -> Expr:
    items = list(tokens)
    node = items[0]
    for exponent in items[1:]:
        node = Pow(node, exponent)
    return node


class ExpressionParser:
    """
    Grammar (x is the only variable):

    number  :: digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
    intexp  :: ['+'|'-'] digits | '(' ['+'|'-'] digits ')'
    atom    :: number | fn '(' expr ')' | 'x' | 'pi' | 'e' | '(' expr ')'
    power   :: atom [ '^' intexp ]*          left associative
    unary   :: '-' unary | power
    term    :: unary [ ('*'|'/') unary ]*
    expr    :: term [ ('+'|'-') term ]*
    """

    def __init__(self):
        expr = Forward()
        lpar, rpar = Suppress("("), Suppress(")")

        number = Regex(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?").set_parse_action(lambda t: Const(float(t[0])))
        signed_int = Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0]))
        intexp = signed_int | (lpar + signed_int + rpar)

        call = (one_of(list(FUNCTION_NAMES)) + Literal("(").suppress() - expr + rpar).set_parse_action(
            lambda t: Func(t[0], t[1]))
        name = Word(alphas, alphanums + "_").set_parse_action(self._resolve_name)
        atom = number | call | name | (lpar - expr + rpar)

        power = (atom + ZeroOrMore(Suppress("^") - intexp)).set_parse_action(_fold_power)
        unary = Forward()
        unary <<= (Suppress("-") - unary).set_parse_action(lambda t: Neg(t[0])) | power
        term = (unary + ZeroOrMore(one_of("* /") - unary)).set_parse_action(_fold_left)
        expr <<= (term + ZeroOrMore(one_of("+ -") - term)).set_parse_action(_fold_left)

        self.bnf = expr + StringEnd()

    @staticmethod
    def _resolve_name(text: str, loc: int, tokens) -> Expr:
        identifier = tokens[0]
        if identifier == VARIABLE_NAME:
            return Var()
        if identifier in NAMED_CONSTANTS:
            return NamedConst(identifier)
        raise ParseFatalException(text, loc, f"unknown identifier '{identifier}'")

    def parse(self, text: str) -> Expr:
        """
        Method Name :   parse
        Description :   Parses expression text into an Expr tree.

        Output      :   Expr
        On Failure  :   ExprSyntaxError carrying the offset of the failure
        """
        if not text or not text.strip():
            raise ExprSyntaxError("empty expression", 0)
        try:
            return self.bnf.parse_string(text, parse_all=True)[0]
        except ParseBaseException as e:
            if "unknown identifier" in str(e.msg):
                identifier = str(e.msg).split("'")[1]
                raise UnknownIdentifierError(identifier, e.loc) from None
            logging.debug(f"syntax error in {text!r}: {e}")
            raise ExprSyntaxError(f"syntax error in {text!r}: {e.msg}", e.loc) from None

    @staticmethod
    def format_number(value: float) -> str:
        if float(value).is_integer() and abs(value) < 1e16:
            return str(int(value))
        return repr(float(value))

    @staticmethod
    def precedence(node: Expr) -> int:
        if isinstance(node, BinOp):
            return _PRECEDENCE_ADD if node.op in "+-" else _PRECEDENCE_MUL
        if isinstance(node, Neg):
            return _PRECEDENCE_NEG
        if isinstance(node, Pow):
            return _PRECEDENCE_POW
        return _PRECEDENCE_ATOM

    @classmethod
    def print(cls, node: Expr) -> str:
        """Text form with the minimal parentheses that re-parse to the same tree."""

        def wrap(child: Expr, minimum: int) -> str:
            text = cls.print(child)
            return text if cls.precedence(child) >= minimum else f"({text})"

        match node:
            case Const(value=value):
                return cls.format_number(value)
            case Var():
                return VARIABLE_NAME
            case NamedConst(name=name):
                return name
            case Func(name=name, arg=arg):
                return f"{name}({cls.print(arg)})"
            case Neg(arg=arg):
                return "-" + wrap(arg, _PRECEDENCE_NEG)
            case Pow(base=base, exponent=exponent):
                exponent_text = str(exponent) if exponent >= 0 else f"({exponent})"
                return f"{wrap(base, _PRECEDENCE_POW)}^{exponent_text}"
            case BinOp(op=op, left=left, right=right):
                level = cls.precedence(node)
                return f"{wrap(left, level)}{op}{wrap(right, level + 1)}"
        raise TypeError(f"not an expression node: {node!r}")

    @classmethod
    def to_json(cls, node: Expr) -> dict:
        match node:
            case Const(value=value):
                return {"op": "const", "args": [value]}
            case Var():
                return {"op": "var", "args": []}
            case NamedConst(name=name):
                return {"op": "named", "args": [name]}
            case Func(name=name, arg=arg):
                return {"op": name, "args": [cls.to_json(arg)]}
            case Neg(arg=arg):
                return {"op": "neg", "args": [cls.to_json(arg)]}
            case Pow(base=base, exponent=exponent):
                return {"op": "pow", "args": [cls.to_json(base), exponent]}
            case BinOp(op=op, left=left, right=right):
                return {"op": _BINARY_OPS[op], "args": [cls.to_json(left), cls.to_json(right)]}
        raise TypeError(f"not an expression node: {node!r}")

    @classmethod
    def from_json(cls, record: dict) -> Expr:
        op, args = record["op"], record.get("args", [])
        if op == "const":
            return Const(float(args[0]))
        if op == "var":
            return Var()
        if op == "named":
            return NamedConst(args[0])
        if op == "neg":
            return Neg(cls.from_json(args[0]))
        if op == "pow":
            return Pow(cls.from_json(args[0]), int(args[1]))
        if op in _BINARY_SYMBOLS:
            return BinOp(_BINARY_SYMBOLS[op], cls.from_json(args[0]), cls.from_json(args[1]))
        if op in FUNCTION_NAMES:
            return Func(op, cls.from_json(args[0]))
        raise ValueError(f"unknown expression op {op!r}")


@lru_cache(maxsize=1)
def default_parser() -> ExpressionParser:
    return ExpressionParser()


def parse(text: str) -> Expr:
    return default_parser().parse(text)


def to_text(node: Expr) -> str:
    return ExpressionParser.print(node)


def literal(value: float) -> str:
    """Number text usable inside a larger expression (negatives parenthesised)."""
    text = ExpressionParser.format_number(value)
    return f"({text})" if value < 0 or math.copysign(1.0, value) < 0 else text


def polynomial_text(coefficients: List[float]) -> str:
    """Text of sum_k coefficients[k] * x^k, zero coefficients skipped."""
    terms = []
    for power, coefficient in enumerate(coefficients):
        if coefficient == 0:
            continue
        if power == 0:
            terms.append(literal(coefficient))
        elif power == 1:
            terms.append(f"{literal(coefficient)}*x")
        else:
            terms.append(f"{literal(coefficient)}*x^{power}")
    return "+".join(terms) if terms else "0"
