"""Shared test fixtures and the acceptance-criteria report.

Acceptance tests record one verdict line per criterion through the
`criterion` fixture; the terminal-summary hook prints the collected
lines in one block at the end of the run so the pass/fail table is
visible even when unrelated tests fail.
"""

from __future__ import annotations

import pytest

ACCEPTANCE_LINES: list[tuple[int, str, str]] = []


@pytest.fixture
def criterion():
    """Record a criterion verdict, then assert it.

    Usage: criterion(4, ok, "computed 0.2337, band [0.225, 0.255]").
    """

    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append((number, "PASS" if ok else "FAIL", detail))
        assert ok, f"criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"[{verdict}] criterion {number:2d}: {detail}")
