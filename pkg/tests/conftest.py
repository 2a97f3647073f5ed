import numpy as np
import pytest

from legendrian import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    previous = _backend.current()
    _backend.use_backend(request.param)
    yield request.param
    _backend.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
