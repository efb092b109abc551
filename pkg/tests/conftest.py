import os
import random

import pytest

EXTENDED = os.environ.get("POLYBOX_EXTENDED") == "1"


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="extended tier; set POLYBOX_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return random.Random(20240501)


_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.skipped and not rep.failed):
        return
    entry = _CRITERIA.setdefault(mark.args[0], {"title": mark.args[1], "states": []})
    entry["states"].append("skip" if rep.skipped else "fail" if rep.failed else "pass")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        states = _CRITERIA[n]["states"]
        verdict = "FAIL" if "fail" in states else "SKIP" if "pass" not in states else (
            "PASS" if "skip" not in states else "PARTIAL")
        terminalreporter.write_line(f"criterion {n:2d}: {verdict:7s} {_CRITERIA[n]['title']}")
