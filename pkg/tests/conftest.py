import pytest

# (criterion id, description, passed) rows filled in by test_acceptance.py
ACCEPTANCE_RESULTS: list[tuple[str, str, bool]] = []


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", help="rewrite tests/golden/*.json")


@pytest.fixture
def update_golden(request):
    return request.config.getoption("--update-golden")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, desc, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {cid:<5} {desc}")
