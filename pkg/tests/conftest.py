import pytest

from kgraph.io import FIXTURES, load_fixture


@pytest.fixture(scope="session")
def graphs():
    return {name: load_fixture(name) for name in FIXTURES}


@pytest.fixture(scope="session")
def R(graphs):
    return graphs["wedge"]


@pytest.fixture(scope="session")
def Q(graphs):
    return graphs["square"]


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
