import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import edgeless, graph_E, graph_F, line_graph, single_loop  # noqa: E402

_criteria = {}


@pytest.fixture
def E():
    return graph_E()


@pytest.fixture
def F():
    return graph_F()


@pytest.fixture
def loop():
    return single_loop()


@pytest.fixture
def A2():
    return line_graph(2)


@pytest.fixture
def edgeless2():
    return edgeless(2)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1].split("[")[0]
        number = int(name.split("_")[2])
        label = name.split("_", 3)[3].replace("_", " ")
        ok = _criteria.get(number, (label, True))[1] and report.outcome == "passed"
        _criteria[number] = (label, ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        label, ok = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {label}")
