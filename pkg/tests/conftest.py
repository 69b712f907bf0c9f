import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record ``(number, title)`` and measured values for the summary table."""
    entry = {"details": []}

    def register(number, title):
        entry.update(number=number, title=title)
        _CRITERIA[request.node.nodeid] = entry

    def detail(text):
        entry["details"].append(text)

    register.detail = detail
    return register


def pytest_runtest_logreport(report):
    if report.nodeid in _CRITERIA and (report.when == "call" or report.failed):
        entry = _CRITERIA[report.nodeid]
        if report.when == "call" or "outcome" not in entry:
            entry["outcome"] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for entry in sorted(_CRITERIA.values(), key=lambda e: e["number"]):
        status = "PASS" if entry.get("outcome") == "passed" else "FAIL"
        details = "; ".join(entry["details"])
        tr.write_line(f"[{status}] {entry['number']:>2}. {entry['title']}" + (f" ({details})" if details else ""))
