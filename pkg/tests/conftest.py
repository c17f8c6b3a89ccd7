import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import _report  # noqa: E402
from sinlets import SinletBasis  # noqa: E402


@pytest.fixture(params=["erf", "logistic"])
def family(request):
    return request.param


@pytest.fixture
def basis(family):
    return SinletBasis.create(family, 0.0, 2.0)


def pytest_terminal_summary(terminalreporter):
    if _report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in _report.LINES:
            terminalreporter.write_line(line)
