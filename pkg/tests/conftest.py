"""Shared fixtures: the three reference degree distributions used across
the analytic and simulation tests, plus pass/fail reporting for the
acceptance criteria."""
from contextlib import contextmanager

import pytest

from clustered_sir import DegreeDistribution


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture
def criterion(request):
    """Context manager recording one pass/fail line per acceptance
    criterion; lines are echoed in the terminal summary."""

    @contextmanager
    def _criterion(num, desc):
        try:
            yield
        except Exception:
            request.config._criterion_lines.append(
                f"criterion {num} ({desc}): FAIL"
            )
            raise
        request.config._criterion_lines.append(f"criterion {num} ({desc}): PASS")

    return _criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def dist_triangles_only():
    """Every node: two single half-edges and one triangle pair."""
    return DegreeDistribution({(2, 1): 1.0})


@pytest.fixture
def dist_mostly_single():
    """Mostly (4, 0) nodes with a 5% clustered minority."""
    return DegreeDistribution({(4, 0): 0.95, (2, 1): 0.05})


@pytest.fixture
def dist_mostly_triangle():
    """Mostly (0, 2) nodes with a 5% minority carrying single edges."""
    return DegreeDistribution({(0, 2): 0.95, (2, 1): 0.05})
