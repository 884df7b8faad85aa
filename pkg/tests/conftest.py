import pytest

from raux.numerics import ctx_new


@pytest.fixture(scope="session")
def ctx25():
    return ctx_new(25)


@pytest.fixture(scope="session")
def ctx15():
    return ctx_new(15)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
