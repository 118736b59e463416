import numpy as np
import pytest

from casimir_polder.atoms import AtomModel, Transition

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE = {}


@pytest.fixture
def two_level():
    return AtomModel.two_level(1.0, 1.0)


@pytest.fixture
def other_two_level():
    return AtomModel.two_level(1.3, 0.7)


@pytest.fixture
def three_level():
    return AtomModel("three-level", (Transition(0.7, 0.5), Transition(1.0, 1.0), Transition(2.3, 0.8)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
