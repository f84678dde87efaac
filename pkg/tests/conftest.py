"""Per-criterion summary for the acceptance suite.

Tests marked ``criterion(n, title)`` are grouped; a criterion passes only if
every one of its checks passed (an expected failure counts as a failure).
"""
import pytest

_RESULTS: dict[int, list] = {}
_SETUP: dict[str, float] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this check belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "setup" and rep.passed:
        _SETUP[item.nodeid] = rep.duration  # module fixtures are billed to their first user
    elif rep.when == "call" or rep.when == "setup":
        n, title = mark.args
        ok = rep.passed and not hasattr(rep, "wasxfail")
        secs = rep.duration + _SETUP.pop(item.nodeid, 0.0)
        _RESULTS.setdefault(n, [title, []])[1].append((item.name, ok, secs))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, checks = _RESULTS[n]
        failed = [name for name, ok, _ in checks if not ok]
        secs = sum(d for *_, d in checks)
        if failed:
            status = f"FAIL  {len(failed)}/{len(checks)} checks failed: {', '.join(failed)}"
        else:
            status = f"PASS  {len(checks)} checks"
        terminalreporter.write_line(f"criterion {n:2d} [{title}] {status} ({secs:.1f} s)")
