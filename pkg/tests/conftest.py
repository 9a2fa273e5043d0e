from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> (title, [outcome of each contributing test item])
ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    num, title = crit
    ACCEPTANCE.setdefault(num, (title, []))[1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, outcomes = ACCEPTANCE[num]
        status = "PASS" if outcomes and all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title} ({sum(outcomes)}/{len(outcomes)} items)")
