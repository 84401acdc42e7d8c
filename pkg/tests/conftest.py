import math

import pytest

from diffractkit.fixtures import a_defect, lattice
from diffractkit.windows import VanHoveFamily

A_DEF = math.sqrt(2.0) - 1.0


@pytest.fixture
def sym():
    return VanHoveFamily.symmetric()


@pytest.fixture
def lam_a():
    return a_defect(A_DEF)


@pytest.fixture
def Z():
    return lattice()


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance checks")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
