import pytest

from bridgestep.structural import BridgeSpec, TrainSpec

AXLE_20T = 20 * 1000.0 * 9.81


@pytest.fixture
def bridge15():
    return BridgeSpec(span_m=15.0, f1_hz=8.0)


@pytest.fixture
def train10():
    return TrainSpec(AXLE_20T, 10, 13.0)


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}  {detail}")
