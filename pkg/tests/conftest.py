import os
import tempfile

import pytest
from hypothesis import HealthCheck, settings

os.environ.setdefault("REEBSTRIP_LOG_DIR", os.path.join(tempfile.gettempdir(), "reebstrip-test-logs"))

from src.components.constructions import catalogue
from src.components.expression_parser import parse
from src.components.strip_slicer import make_region
from src.entity.config_entity import Tolerances
from src.entity.function import TSFunction

settings.register_profile("reebstrip", derandomize=True, deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("reebstrip")


def expression_function(text: str) -> TSFunction:
    return TSFunction(parse(text))


@pytest.fixture(scope="session")
def tol():
    return Tolerances()


@pytest.fixture(scope="session")
def sin_region(tol):
    return make_region(expression_function("sin(x)"), expression_function("sin(x)+1"), (-7.0, 7.0), tol)


@pytest.fixture(scope="session")
def constant_region(tol):
    return make_region(expression_function("-1"), expression_function("1"), (-5.0, 5.0), tol)


@pytest.fixture(scope="session")
def gauss_runge_region(tol):
    return make_region(catalogue("gauss_sin"), catalogue("runge", {"a1": 5.0, "a2": 0.0}), (-12.0, 12.0), tol)
