import re

import pytest

from helpers import CHAIN, MINIMAL, SELF_LOOP, TWO_SUMMANDS, surf


@pytest.fixture
def minimal():
    return surf(MINIMAL)


@pytest.fixture
def chain():
    return surf(CHAIN)


@pytest.fixture
def self_loop():
    return surf(SELF_LOOP)


@pytest.fixture
def two_summands():
    return surf(TWO_SUMMANDS)


# -- acceptance summary --------------------------------------------------------

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_results = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    key = int(m.group(1))
    name = report.nodeid.split("::")[-1]
    failed = report.failed or (report.when == "call" and report.skipped)
    prev = _results.get(key, (name, True))
    _results[key] = (prev[0], prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        name, ok = _results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {key}: {name}")
