from collections import defaultdict
from fractions import Fraction
from pathlib import Path

import pytest

from fuzzyreason import StageFuzzySet

DATA = Path(__file__).parent / "data"

Q = Fraction(1, 4)
H = Fraction(1, 2)

# Stage fuzzy sets of the two classroom groups, stages in order.
GROUP1 = (
    StageFuzzySet((0, 0, H, Q, Q)),
    StageFuzzySet((0, 0, H, Q, 0)),
    StageFuzzySet((Q, Q, Q, 0, 0)),
)
GROUP2 = (
    StageFuzzySet((0, Q, H, Q, 0)),
    StageFuzzySet((Q, Q, H, 0, 0)),
    StageFuzzySet((Q, Q, Q, 0, 0)),
)


@pytest.fixture
def group1():
    return GROUP1


@pytest.fixture
def group2():
    return GROUP2


@pytest.fixture
def data_dir():
    return DATA


_criteria = defaultdict(list)
_titles = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[marker].append((report.head_line, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        number, title = m.args
        _titles.setdefault(number, title)
        rep.criterion = number


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        checks = _criteria[number]
        failed = [name for name, outcome in checks if outcome != "passed"]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {number:>2}: {status}  {_titles[number]} ({len(checks)} checks)"
        if failed:
            line += "; failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
