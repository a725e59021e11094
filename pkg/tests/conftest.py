import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def note(request):
    """Attach a short measurement to the criterion line of the running test."""
    def add(text):
        _CRITERIA.setdefault(request.node.nodeid, {}).setdefault("notes", []).append(str(text))
    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    entry = _CRITERIA.setdefault(item.nodeid, {})
    entry["number"], entry["title"] = mark.args
    entry["passed"] = rep.passed and entry.get("passed", True)


def pytest_terminal_summary(terminalreporter):
    rows = sorted((e for e in _CRITERIA.values() if "number" in e), key=lambda e: e["number"])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for e in rows:
        status = "PASS" if e["passed"] else "FAIL"
        notes = "; ".join(e.get("notes", []))
        terminalreporter.write_line(f"criterion {e['number']:>2} {status}  {e['title']}"
                                    + (f"  [{notes}]" if notes else ""))
