import pytest

from vcprune import Session

_ACCEPTANCE: list[str] = []


@pytest.fixture
def session():
    return Session()


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""
    def _record(line: str) -> None:
        _ACCEPTANCE.append(line)
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
