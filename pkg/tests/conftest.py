import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``with criterion("3 theory check") as note: ...; note("detail")``.
    """
    from contextlib import contextmanager

    @contextmanager
    def _run(name):
        details = []
        try:
            yield details.append
        except BaseException:
            ACCEPTANCE_LINES.append(f"FAIL  {name}  {'; '.join(details)}")
            raise
        ACCEPTANCE_LINES.append(f"PASS  {name}  {'; '.join(details)}")

    return _run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
