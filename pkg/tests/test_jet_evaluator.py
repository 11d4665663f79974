import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from src.components.constructions import catalogue_expression
from src.components.expression_parser import parse
from src.components.jet_evaluator import JetEvaluator, eval_jet2
from src.exception import ExprDomainError

# |x| bounds inside which a central difference with h = 1e-5 stays accurate
FINITE_DIFFERENCE_RANGES = {
    "c_H_plus_inf_r": 5.0,
    "c_H_p1_p2": 5.0,
    "c_e_p1_p2": 5.0,
    "c_p0": 1.0,
    "c_p00": 1.5,
    "c_e1": 0.8,
    "c_e2": 0.8,
    "gauss_sin": 4.0,
    "runge": 4.0,
    "sin": 6.0,
}


def test_sin_at_zero():
    jet = eval_jet2(parse("sin(x)"), 0.0)
    assert (jet.value, jet.d1, jet.d2) == (0.0, 1.0, 0.0)
    assert not jet.overflow


def test_bump_derivative_matches_closed_form():
    x = 1.0
    p, dp = x * x + 1.0, 2.0 * x
    inner = math.exp(x * x)
    expected = (2.0 * x * inner * math.cos(inner) * p - (2.0 + math.sin(inner)) * dp) / p ** 2
    jet = eval_jet2(catalogue_expression("c_p0"), x)
    assert jet.d1 == pytest.approx(expected, rel=1e-10)


def test_logistic_step_derivative_at_zero():
    jet = eval_jet2(catalogue_expression("c_e_p1_p2", {"p1": 0.0, "p2": 1.0}), 0.0)
    assert jet.d1 == pytest.approx(-0.25, rel=1e-12)


def test_product_quotient_and_power_rules():
    x = np.array([-1.3, 0.4, 2.2])
    jet = eval_jet2(parse("x^3/(x^2+1)"), x)
    q = x ** 3 / (x ** 2 + 1)
    d1 = (3 * x ** 2 * (x ** 2 + 1) - 2 * x ** 4) / (x ** 2 + 1) ** 2
    np.testing.assert_allclose(jet.value, q, rtol=1e-13)
    np.testing.assert_allclose(jet.d1, d1, rtol=1e-12)


def test_atan_and_sqrt_second_derivatives():
    x = 0.7
    assert eval_jet2(parse("atan(x)"), x).d2 == pytest.approx(-2 * x / (1 + x * x) ** 2, rel=1e-13)
    assert eval_jet2(parse("sqrt(x)"), x).d2 == pytest.approx(-0.25 * x ** -1.5, rel=1e-13)


def test_named_constants():
    jet = eval_jet2(parse("pi*x+e"), 2.0)
    assert jet.value == pytest.approx(2 * math.pi + math.e)
    assert jet.d1 == pytest.approx(math.pi)


def test_vectorised_evaluation_keeps_shape():
    x = np.linspace(-2.0, 2.0, 7)
    jet = JetEvaluator(parse("cos(x)")).evaluate(x)
    assert jet.value.shape == x.shape
    np.testing.assert_allclose(jet.d2, -np.cos(x))


@pytest.mark.parametrize("text, x", [("1/x", 0.0), ("sqrt(x)", -1.0), ("x^(-2)", 0.0)])
def test_domain_errors_name_the_node(text, x):
    with pytest.raises(ExprDomainError) as excinfo:
        eval_jet2(parse(text), x)
    assert excinfo.value.x == x


def test_domain_error_reports_first_offending_point():
    with pytest.raises(ExprDomainError) as excinfo:
        eval_jet2(parse("1/(x-1)"), np.array([0.0, 1.0, 2.0]))
    assert excinfo.value.x == 1.0
    assert excinfo.value.node == "1/(x-1)"


def test_exp_overflow_is_flagged_not_raised():
    jet = eval_jet2(parse("exp(x^2)"), np.array([1.0, 30.0]))
    assert list(jet.overflow) == [False, True]
    assert eval_jet2(parse("exp(x)"), 800.0).overflow


@given(st.sampled_from(sorted(FINITE_DIFFERENCE_RANGES)), st.floats(min_value=-1.0, max_value=1.0))
def test_first_derivative_matches_central_difference(name, fraction):
    x = fraction * FINITE_DIFFERENCE_RANGES[name]
    expr = catalogue_expression(name)
    h = 1e-5
    jet = eval_jet2(expr, x)
    difference = (eval_jet2(expr, x + h).value - eval_jet2(expr, x - h).value) / (2 * h)
    assert abs(jet.d1 - difference) <= 1e-6 * (1 + abs(jet.d1))


def _closed_form_terms(name, x):
    """The two summands of the printed derivative formula, before division by the common denominator."""
    if name == "c_p00":
        inner, p = math.exp(x), x * x + 1.0
        return inner * math.cos(inner) * p / p ** 2, -(2.0 + math.sin(inner)) * 2.0 * x / p ** 2
    power = 4 if name == "c_e1" else 3
    inner = math.exp(x ** power)
    damping = math.exp(x * x)
    return (power * x ** (power - 1) * inner * math.cos(inner) / damping,
            -2.0 * x * (2.0 + math.sin(inner)) / damping)


@given(st.sampled_from(["c_p00", "c_e1", "c_e2"]), st.floats(min_value=-1.5, max_value=1.5))
def test_first_derivative_matches_closed_form(name, x):
    assume(x == 0.0 or abs(x) > 1e-100)
    growth, decay = _closed_form_terms(name, x)
    jet = eval_jet2(catalogue_expression(name), x)
    assert abs(jet.d1 - (growth + decay)) <= 1e-10 * (abs(growth) + abs(decay) + 1e-300)
