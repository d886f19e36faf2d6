import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(key, ok, detail=""):
        ACCEPTANCE[key] = (ok, detail)
        print(f"[acceptance] {key}: {'PASS' if ok else 'FAIL'} {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
