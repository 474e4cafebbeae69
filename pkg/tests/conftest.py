import numpy as np
import pytest

from gwimm import tail_series
from gwimm.limits import LimitConfig
from gwimm.pgf import REFERENCE_PARAMS, quadratic_model, validate_model

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def quad03():
    return quadratic_model(0.3, 0.5)


@pytest.fixture(scope="session")
def no_imm():
    """Classical case ``Q = 1``."""
    return validate_model([0.0, 0.5, 0.5], [1.0])


@pytest.fixture(scope="session", params=REFERENCE_PARAMS, ids=lambda p: f"p1={p[0]},q0={p[1]}")
def ref_model(request):
    return quadratic_model(*request.param)


@pytest.fixture(scope="session")
def cfg():
    return LimitConfig()


_TAILS = {}


def tail_pieces(model):
    key = (model.p.coeffs, model.q.coeffs)
    if key not in _TAILS:
        _TAILS[key] = tail_series.prepare(model)
    return _TAILS[key]


@pytest.fixture(scope="session")
def quad03_tail(quad03):
    return tail_pieces(quad03)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
