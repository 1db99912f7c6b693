from __future__ import annotations

import sys

import pytest

from qseries.qcore import QContext
from qseries.series import SeriesSpec

ACCEPTANCE_QS = (0.5, 0.3 + 0.2j, 0.6)


@pytest.fixture
def ctx() -> QContext:
    return QContext(0.5)


@pytest.fixture
def spec2() -> SeriesSpec:
    return SeriesSpec([2.0, 3.0], [0.1, 0.15])


@pytest.fixture
def spec3() -> SeriesSpec:
    return SeriesSpec([2.0, 3.0, 1.5], [0.1, 0.15, 0.2])


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


def pytest_terminal_summary(terminalreporter) -> None:
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
