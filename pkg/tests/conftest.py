from __future__ import annotations

import pytest

_LINES: list[str] = []


@pytest.fixture(scope="session")
def criterion():
    """record(k, ok, detail): log one acceptance line, then assert it."""

    def record(k: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
        _LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
