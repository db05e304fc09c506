import re

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_(a\d\d)_", report.nodeid)
    if not m:
        return
    key = "A" + str(int(m.group(1)[1:]))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _ACCEPTANCE.get(key, True)
        _ACCEPTANCE[key] = prev and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k[1:])):
        terminalreporter.write_line(f"{key}: {'PASS' if _ACCEPTANCE[key] else 'FAIL'}")
