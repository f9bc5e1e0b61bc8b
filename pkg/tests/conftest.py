import sys
from pathlib import Path

import pytest

from quadbetti import instance as inst
from quadbetti.qform import QForm, QuadricSystem

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> QuadricSystem:
    return inst.load(FIXTURES / f"{name}.json").system


def diag_system(n, *diags) -> QuadricSystem:
    return QuadricSystem(n, tuple(QForm.diag(d) for d in diags))


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / name


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[num])
