"""Collects the acceptance outcomes and prints one line per criterion."""
import re

_CRITERION = re.compile(r"test_criterion_(\d+)")
_outcomes: dict = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        _outcomes[n] = _outcomes.get(n, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance")
    for n in sorted(_outcomes):
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {'PASS' if _outcomes[n] else 'FAIL'}")
