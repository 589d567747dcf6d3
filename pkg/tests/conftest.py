import os
import sys

import pytest

from leraykit import fixtures

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture
def c3():
    return fixtures.complex("c3")


@pytest.fixture
def arcs():
    return fixtures.covering("c3_arcs")


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.LINES:
            terminalreporter.write_line(line)
