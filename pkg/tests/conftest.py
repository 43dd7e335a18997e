import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """Record ``(number, ok, line)`` for the end-of-run summary."""
    def record(number: int, ok: bool, line: str) -> None:
        _RESULTS[number] = (ok, line)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, line = _RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {line}")
    passed = sum(ok for ok, _ in _RESULTS.values())
    terminalreporter.write_line(f"{passed}/{len(_RESULTS)} criteria passed")
