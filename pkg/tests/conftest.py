import numpy as np
import pytest

from orlicz_sampling.nfunction import make_nfunction


def catalogue():
    return [make_nfunction("power", 1.5), make_nfunction("power", 2.0),
            make_nfunction("power", 4.0), make_nfunction("power_log", 2.0, 1.0)]


@pytest.fixture(scope="session")
def phis():
    return catalogue()


@pytest.fixture(scope="session")
def square():
    return make_nfunction("power", 2.0)


@pytest.fixture(scope="session")
def plog():
    return make_nfunction("power_log", 2.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_criteria = {}


@pytest.fixture
def record_criterion():
    """Print and keep one ``PASS``/``FAIL`` line per acceptance criterion."""
    def record(number, passed, message):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number:>2}: {message}"
        _criteria[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_criteria):
            terminalreporter.write_line(_criteria[k])
