import math

import pytest

from brightdark import SlitGeometry

BETA_03 = 0.3 * math.pi

_CRITERIA_KEY = pytest.StashKey[dict]()


@pytest.fixture
def unit_slit():
    return SlitGeometry(1.0, 1.0)


def pytest_configure(config):
    config.stash[_CRITERIA_KEY] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance-criterion verdict for the end-of-run summary."""
    results = request.config.stash[_CRITERIA_KEY]

    def record(number: int, passed: bool, detail: str) -> bool:
        results[number] = (bool(passed), detail)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_CRITERIA_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        passed, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
