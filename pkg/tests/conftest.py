import pytest

from abcycle import Hypergraph
from abcycle.oracle import complete_hypergraph

FOUR_EDGES = [(1, 2, 3), (2, 3, 4), (4, 5, 6), (5, 6, 1)]


@pytest.fixture
def four_edge():
    return Hypergraph(6, 3, FOUR_EDGES)


@pytest.fixture
def k63():
    return complete_hypergraph(6, 3)


@pytest.fixture
def empty63():
    return Hypergraph(6, 3, [])


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        detail = dict(report.user_properties).get("detail", "")
        ACCEPTANCE[crit] = (report.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, (ok, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {crit}  {detail}")
