import pytest

_ACCEPTANCE: dict = {}


@pytest.fixture
def report():
    """Record one acceptance line; the test still asserts on its own."""

    def _report(number: int, title: str, passed: bool, detail: str):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} | {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
