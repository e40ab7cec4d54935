from __future__ import annotations

import functools

import pytest

from kkextremal import oracle

# criterion number -> (title, list of outcomes of its tests)
_ACCEPTANCE: dict[int, tuple[str, list[bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): test backing one acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            number, title = mark.args
            _ACCEPTANCE.setdefault(number, (title, []))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    mark = next((m for m in getattr(report, "_acceptance", ())), None)
    if mark is None:
        return
    number, _ = mark
    _ACCEPTANCE[number][1].append(report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report._acceptance = (tuple(mark.args),)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcomes = _ACCEPTANCE[number]
        if not outcomes:
            status = "NOT RUN"
        else:
            status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"acceptance {number:02d}: {status}  {title}")


@functools.lru_cache(maxsize=None)
def _sweep(n: int, k: int):
    return oracle.run_sweep(n, k)


@pytest.fixture(scope="session")
def sweep_result():
    """Memoised oracle.run_sweep, shared by every test in the session."""
    return _sweep
