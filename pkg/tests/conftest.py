import numpy as np
import pytest

from epr_reduction import scenario_io

_CRITERIA: list[tuple[str, bool]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig1():
    return scenario_io.load_scenario(scenario_io.fixture_path("paper_fig1.json"))


@pytest.fixture
def fig1_nob():
    return scenario_io.load_scenario(scenario_io.fixture_path("paper_fig1_noB.json"))


@pytest.fixture
def fig1_d():
    return scenario_io.load_scenario(scenario_io.fixture_path("paper_fig1_D.json"))


class _Criterion:
    def __init__(self, number, text):
        self.name = f"criterion {number:>2}: {text}"

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        _CRITERIA.append((self.name, exc_type is None))
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")
