import pytest

_RESULTS = {}


@pytest.fixture
def record():
    """Register one acceptance line: record(number, passed, detail)."""
    def _record(number, passed, detail):
        _RESULTS.setdefault(number, []).append((bool(passed), detail))
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        parts = _RESULTS[number]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
