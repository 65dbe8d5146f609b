import sys
from pathlib import Path

import pytest

from kvsched.model import Instance

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def worked():
    return Instance.from_lengths(0, 15, [5] * 15)


@pytest.fixture
def uniform():
    return Instance.from_lengths(0, 256, [16] * 200)


@pytest.fixture
def two_point():
    return Instance.from_lengths(96, 256, [160] * 6 + [1] * 194)


@pytest.fixture
def trace_path():
    return FIXTURES / "trace_1000.txt"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
