import pytest

from maxplus.io import load_matrix, load_vector
from oracles import DATA

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def gamma6():
    return load_matrix(DATA / "gamma6.mp")[0]


@pytest.fixture(scope="session")
def twin3():
    return load_matrix(DATA / "twin3.mp")[0]


@pytest.fixture(scope="session")
def tri6():
    return load_matrix(DATA / "tri6.mp")[0]


@pytest.fixture(scope="session")
def orbit_vectors():
    return [load_vector(DATA / f"x{k}.mp")[0] for k in range(1, 5)]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")
