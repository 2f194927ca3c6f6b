"""Collects one PASS/FAIL line per acceptance criterion for the run summary."""

_LINES: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    criterion = props.get("criterion")
    if criterion is None:
        return
    if report.when == "call" or report.failed:
        status = "PASS" if report.passed else "FAIL"
        if criterion not in _LINES or status == "FAIL":
            _LINES[criterion] = (status, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_LINES, key=lambda c: int(c[1:])):
        status, detail = _LINES[criterion]
        terminalreporter.write_line(f"{criterion:<4} {status}  {detail}")
