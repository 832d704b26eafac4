import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "picodim",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("picodim")

GOLDEN = Path(__file__).parent / "golden" / "values.json"


@pytest.fixture(scope="session")
def golden():
    return json.loads(GOLDEN.read_text())


# acceptance criteria report one PASS/FAIL line each, gathered here
CRITERIA: dict = {}


def pytest_runtest_makereport(item, call):
    crit = item.get_closest_marker("criterion")
    if crit is None or call.when != "call":
        return
    num, title = crit.args
    ok = call.excinfo is None
    prev = CRITERIA.get(num, (title, True, 0.0))
    CRITERIA[num] = (title, prev[1] and ok, prev[2] + call.duration)
    print(f"\n[criterion {num}] {'PASS' if ok else 'FAIL'}: {title}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        title, ok, secs = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.1f}s)")
