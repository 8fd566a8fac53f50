import pytest

from wedgelab.catalog import load_form


@pytest.fixture(scope="session")
def delta():
    return load_form("delta", 2001)


@pytest.fixture(scope="session")
def eta11():
    return load_form("eta11", 2001)


@pytest.fixture(scope="session")
def eta4_6():
    return load_form("eta4_6", 2001)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """record(criterion, ok, detail): prints a PASS/FAIL line and keeps it for the summary."""

    def record(criterion: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}".rstrip()
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
