from __future__ import annotations

import pytest

from uavlink.config import EXAMPLE_MEASUREMENTS, EXAMPLE_SCENARIO, load_run_config

_acceptance: list[tuple[str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _acceptance.append((marker.args[0], "PASS" if rep.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _acceptance:
        terminalreporter.write_line(f"{status}  {label}")


@pytest.fixture(scope="session")
def scenario_path():
    return EXAMPLE_SCENARIO


@pytest.fixture(scope="session")
def measurements_path():
    return EXAMPLE_MEASUREMENTS


@pytest.fixture(scope="session")
def scenario_config():
    return load_run_config(EXAMPLE_SCENARIO)
