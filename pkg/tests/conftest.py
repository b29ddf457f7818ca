import pytest

from cubiczeta.orbits import enumerate_orbits
from cubiczeta.relations import ZetaData

FULL_X = 50000
SMALL_X = 12000

# filled by test_acceptance; echoed at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def orbits_full():
    return enumerate_orbits(FULL_X)


@pytest.fixture(scope="session")
def data_full(orbits_full):
    return ZetaData(orbits_full, FULL_X)


@pytest.fixture(scope="session")
def data_small(orbits_full):
    return ZetaData([r for r in orbits_full if abs(r.disc) <= SMALL_X], SMALL_X)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
