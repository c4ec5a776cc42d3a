import re

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_results = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed:
        key = int(m.group(1))
        if report.failed or key not in _results:
            _results[key] = (m.group(2).replace("_", " "), report.passed and report.when == "call")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        label, ok = _results[key]
        terminalreporter.write_line(f"criterion {key} {'PASS' if ok else 'FAIL'}  {label}")
