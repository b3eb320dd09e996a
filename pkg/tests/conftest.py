"""Shared pytest wiring: a one-line verdict per shipping criterion."""

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_results = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None:
        return
    k = int(m.group(1))
    if report.when == "call":
        _results[k] = report.outcome == "passed" and _results.get(k, True)
    elif report.failed:
        _results[k] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        terminalreporter.write_line(
            "ACCEPTANCE CRITERION %d: %s"
            % (k, "PASS" if _results[k] else "FAIL"))
