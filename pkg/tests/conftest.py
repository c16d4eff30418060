import numpy as np
import pytest

from epscx.metric import build_from_matrix

_ACCEPTANCE = []


def record(criterion, ok, detail=""):
    """Log one acceptance line; printed in the terminal summary."""
    _ACCEPTANCE.append((criterion, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {criterion}  {detail}")


@pytest.fixture
def line5():
    return build_from_matrix([[abs(i - j) for j in range(5)] for i in range(5)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
