import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, summary): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label, summary = marker.args
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        prev = _RESULTS.get(label, (summary, True))
        _RESULTS[label] = (summary, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_RESULTS, key=lambda s: (int(s.rstrip("ab")), s)):
        summary, passed = _RESULTS[label]
        terminalreporter.write_line(f"criterion {label:>3}: {'PASS' if passed else 'FAIL'}  {summary}")
