import pytest

from saddle_squeeze import ModelParams, SqueezedState


@pytest.fixture
def quadratic():
    return ModelParams(lam=1.0, omega=(1.0,), hbar=1.0)


@pytest.fixture
def anharmonic():
    return ModelParams(lam=1.0, omega=(1.0,), alpha=0.05, b2=0.2, hbar=1.0)


@pytest.fixture
def vacuum():
    return SqueezedState(0.0, 1.0)


_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one acceptance criterion outcome and fail the test if it did not hold."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((label, bool(ok), detail))
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
