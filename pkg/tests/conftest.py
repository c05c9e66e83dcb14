from pathlib import Path

import pytest

from zfcprover.tptp import parse_formula, parse_problem

DATA = Path(__file__).resolve().parents[1] / "src" / "zfcprover" / "data"
SUITE = DATA / "suite"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the prover for minutes")


@pytest.fixture
def F():
    return parse_formula


@pytest.fixture
def problem():
    return parse_problem


def pytest_terminal_summary(terminalreporter):
    import acceptance_log
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
