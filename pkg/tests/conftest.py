import pytest

_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks (acceptance scale)")


@pytest.fixture(autouse=True)
def _no_step_override(monkeypatch):
    # keep the integrator budget deterministic regardless of the caller's shell
    monkeypatch.delenv("PWCYCLE_MAX_STEPS", raising=False)


@pytest.fixture
def criterion():
    """record(number, ok, detail): store a one-line verdict printed at the end of the run."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _RESULTS.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_RESULTS):
        terminalreporter.write_line(line)
