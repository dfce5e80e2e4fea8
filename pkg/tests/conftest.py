import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")
    config.addinivalue_line("markers", "slow: long-running statistical check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    prev = _CRITERIA.get(n, (title, "PASS", 0.0))
    status = prev[1]
    if rep.failed:
        status = "FAIL"
    elif rep.skipped and status == "PASS" and rep.when == "setup":
        status = "SKIP"
    _CRITERIA[n] = (title, status, prev[2] + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status, secs = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2} {status}: {title} ({secs:.1f}s)")
