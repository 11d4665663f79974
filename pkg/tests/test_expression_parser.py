import pytest
from hypothesis import given, strategies as st

from src.components.expression_parser import ExpressionParser, literal, parse, polynomial_text, to_text
from src.components.jet_evaluator import eval_jet2
from src.entity.expression import BinOp, Const, Func, NamedConst, Neg, Pow, Var
from src.exception import ExprSyntaxError, UnknownIdentifierError

leaves = st.one_of(
    st.just(Var()),
    st.builds(Const, st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)),
    st.builds(NamedConst, st.sampled_from(["pi", "e"])),
)

expressions = st.recursive(
    leaves,
    lambda children: st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/"]), children, children),
        st.builds(Pow, children, st.integers(min_value=-3, max_value=4)),
        st.builds(Func, st.sampled_from(["sin", "cos", "exp", "sqrt", "atan"]), children),
    ),
    max_leaves=12,
)


def test_parse_single_function():
    assert parse("sin(x)") == Func("sin", Var())


def test_parse_bump_quotient():
    tree = parse("(2+sin(exp(x^2)))/(x^2+1)")
    assert tree == BinOp("/",
                         BinOp("+", Const(2.0), Func("sin", Func("exp", Pow(Var(), 2)))),
                         BinOp("+", Pow(Var(), 2), Const(1.0)))


def test_unary_minus_binds_weaker_than_power():
    assert parse("-x^2") == Neg(Pow(Var(), 2))
    assert parse("(-x)^2") == Pow(Neg(Var()), 2)


def test_left_associativity():
    assert parse("8-3-2") == BinOp("-", BinOp("-", Const(8.0), Const(3.0)), Const(2.0))
    assert parse("x^2^3") == Pow(Pow(Var(), 2), 3)


def test_negative_integer_exponent():
    assert parse("x^(-2)") == Pow(Var(), -2)
    assert parse("x^-2") == Pow(Var(), -2)


def test_named_constants_and_scientific_literals():
    assert parse("pi*e") == BinOp("*", NamedConst("pi"), NamedConst("e"))
    assert parse("1.5e-3") == Const(1.5e-3)


def test_trailing_operator_reports_offset():
    with pytest.raises(ExprSyntaxError) as excinfo:
        parse("x^")
    assert excinfo.value.offset == 2


@pytest.mark.parametrize("text", ["", "   ", "sin x", "(x+1", "x**2", "2x"])
def test_malformed_text_is_rejected(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as excinfo:
        parse("y+1")
    assert excinfo.value.name == "y"
    assert excinfo.value.offset == 0


def test_print_examples():
    assert to_text(Func("sin", Var())) == "sin(x)"
    assert to_text(Const(2.5)) == "2.5"
    assert to_text(parse("x^2+1")) == "x^2+1"
    assert to_text(parse("(x+1)*(x-1)")) == "(x+1)*(x-1)"
    assert to_text(parse("x-(x-1)")) == "x-(x-1)"


def test_const_rejects_negative_literals():
    with pytest.raises(ValueError):
        Const(-1.0)


@given(expressions)
def test_printed_text_parses_back_to_the_same_tree(tree):
    assert parse(to_text(tree)) == tree


@given(expressions)
def test_json_form_restores_the_tree(tree):
    assert ExpressionParser.from_json(ExpressionParser.to_json(tree)) == tree


def test_literal_parenthesises_negatives():
    assert literal(2.0) == "2"
    assert literal(-0.5) == "(-0.5)"
    assert parse(f"x*{literal(-0.5)}") == BinOp("*", Var(), Neg(Const(0.5)))


def test_polynomial_text_skips_zero_coefficients():
    assert polynomial_text([1.0, 0.0, 1.0]) == "1+1*x^2"
    assert polynomial_text([0.0, -2.0]) == "(-2)*x"
    assert polynomial_text([]) == "0"


def test_grammar_has_no_logarithm_or_real_exponents():
    with pytest.raises(UnknownIdentifierError) as excinfo:
        parse("log(x)")
    assert excinfo.value.name == "log"
    with pytest.raises(ExprSyntaxError):
        parse("x^0.5")
    assert eval_jet2(parse("x^(-2)"), 2.0).value == pytest.approx(0.25)
