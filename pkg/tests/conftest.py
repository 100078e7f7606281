import pytest

ACCEPTANCE_LINES = {}


@pytest.fixture
def record_criterion():
    """Store a one-line verdict for the terminal summary."""
    def record(number, ok, detail, variant=""):
        line = f"criterion {number:2d}{variant:>2s} {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[(number, variant)] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
