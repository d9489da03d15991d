from __future__ import annotations

import sys

import pytest

from natanzon.params import derive

# half-line scattering families with known, nonempty spectra
SINGLE_LEVEL = derive(8.0, 0.0, -1.0, 0.0, 0.0, 1.0)
TWO_LEVELS = derive(24.0, -0.75, -1.0, 0.0, 0.0, 4.0)
QUADRATIC_R = derive(12.0, 3.0, -1.0, 1.0, 0.0, 2.0)
THREE_LEVELS = derive(35.0, -0.75, -1.0, 1.0, 0.0, 3.0)
FULL_LINE = derive(5.0, 0.5, -1.0, 0.7, 0.3, 2.0)

HALF_LINE_FAMILIES = [SINGLE_LEVEL, TWO_LEVELS, QUADRATIC_R, THREE_LEVELS]


@pytest.fixture(params=HALF_LINE_FAMILIES, ids=["single", "two", "quadR", "three"])
def half_line(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
