"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

from collections import defaultdict

import pytest

CRITERIA = {
    1: "cohomology dimensions equal floor(2b/p) - ceil(b/p)",
    2: "elementary class is a nonzero cocycle",
    3: "order condition: composition versus geometric sum",
    4: "obstruction defect, vanishing criterion, inequality",
    5: "Chebyshev identities, Bezout certificate, psi, versal ring",
    6: "H^1 module structure and top exponent branch",
    7: "deformation direction valuations and independence",
    8: "polar normal form and Harbater census",
    9: "genus, Krull and global dimension calculators",
    10: "byte-stable verify report with zero failures",
}

_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.outcome == "skipped":
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[crit].append(report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        count = f"({sum(results or [])}/{len(results or [])} tests)"
        terminalreporter.write_line(f"criterion {n:2d} {status:7s} {count:14s} {title}")
