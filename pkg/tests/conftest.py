import numpy as np
import pytest

from starergodic.sampling import corpus

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def system_corpus():
    return corpus(seed=0, count=200)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
