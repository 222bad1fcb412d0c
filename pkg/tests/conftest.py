"""Shared fixtures for the test suite."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes `import helpers` work

import helpers  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion, shown even when capture
    swallowed the in-test prints."""
    if not helpers.ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in helpers.ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
