import pytest

from lognormal_gpv.distributions import LogSummary
from lognormal_gpv.pvalues import TestRequest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record an acceptance line, then assert it."""

    def _check(name, ok, detail):
        _CRITERIA.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, f"{name}: {detail}"

    return _check


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture
def seeded():
    return LogSummary(26, 5.134, 2.46)


@pytest.fixture
def unseeded():
    return LogSummary(26, 3.990, 2.60)


@pytest.fixture
def rainfall(seeded, unseeded):
    return TestRequest(seeded, unseeded)
