import pytest

from combicache.topology import build

_ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""

    def _record(criterion: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def net42():
    return build(4, 2)


@pytest.fixture
def net53():
    return build(5, 3)
