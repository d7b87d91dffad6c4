import pytest

# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(number, title, checks):
        """Store a criterion outcome; ``checks`` maps a description to a bool."""
        failed = [name for name, ok in checks.items() if not ok]
        detail = "; ".join(f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in checks.items())
        ACCEPTANCE[number] = (title, not failed, detail)
        print(f"criterion {number} {'PASS' if not failed else 'FAIL'} - {title}")
        return failed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE, key=str):
        title, ok, detail = ACCEPTANCE[number]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
        tr.write_line(f"       {detail}")
