"""Pytest wiring: one visible pass/fail line per acceptance criterion."""

from __future__ import annotations

import sys


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    sys.stdout.write(f"\n[acceptance] {name}: {status}\n")
    sys.stdout.flush()
