import pytest

from onecounter.gadgets import figure7

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fig7():
    return figure7()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
