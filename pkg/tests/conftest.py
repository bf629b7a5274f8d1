import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on ``ok``."""

    def record(n, title, tolerance, ok, detail=""):
        line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}  [tolerance: {tolerance}]"
        if detail:
            line += f"  {detail}"
        _LINES.append((n, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
