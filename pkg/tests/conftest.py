import pytest

# (criterion number, title, passed, detail) filled in by test_acceptance.py
ACCEPTANCE_RESULTS = []


@pytest.fixture
def record():
    def _record(number, title, passed, detail=""):
        ACCEPTANCE_RESULTS.append((number, title, bool(passed), detail))
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number}. {title}" + (f"  ({detail})" if detail else ""))
