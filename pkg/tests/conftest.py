import pytest

# criterion number -> list of (label, passed, detail)
_ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one acceptance check; the summary prints one line per criterion."""
    def _record(criterion, label, passed, detail=""):
        _ACCEPTANCE.setdefault(criterion, []).append((label, bool(passed), detail))
        status = "PASS" if passed else "FAIL"
        print(f"[acceptance {criterion}] {status} {label}: {detail}")
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        checks = _ACCEPTANCE[crit]
        ok = all(p for _, p, _ in checks)
        parts = "; ".join(f"{label} {'ok' if p else 'FAILED'} ({detail})"
                          for label, p, detail in checks)
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {crit}: {parts}")
