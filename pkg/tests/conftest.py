from pathlib import Path

import pytest

from hypersplit.formats import parse_instance, parse_solution

DATA = Path(__file__).parent / "data"


def load_instance(name):
    return parse_instance((DATA / f"{name}_instance.json").read_text())


def load_solution(name):
    return parse_solution((DATA / f"{name}_solution.json").read_text())


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
