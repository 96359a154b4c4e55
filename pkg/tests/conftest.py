import math
from fractions import Fraction

import pytest

from abstat import corpus


@pytest.fixture(scope="session")
def entries():
    cache = {}

    def get(id, **kw):
        key = (id, tuple(sorted(kw.items())))
        if key not in cache:
            cache[key] = corpus.build(id, **kw)
        return cache[key]

    return get


def brute_count(values, lo, hi, level):
    """Independent per-index count: values(k) >= level over [lo, hi]."""
    return sum(1 for k in range(lo, hi + 1) if values(k) >= level)


def is_square(k):
    r = math.isqrt(k)
    return r * r == k


HALF = Fraction(1, 2)


ACCEPTANCE: list[tuple[int, str, str, str]] = []


class _Criterion:
    def __init__(self, num: int, title: str):
        self.num, self.title, self.notes = num, title, []

    def note(self, text: str) -> None:
        self.notes.append(text)


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion as PASS or FAIL for the terminal summary."""
    marker = request.node.get_closest_marker("criterion")
    num, title = marker.args
    c = _Criterion(num, title)
    yield c
    failed = getattr(request.node, "rep_call", None) is None or request.node.rep_call.failed
    ACCEPTANCE.append((num, "FAIL" if failed else "PASS", title, "; ".join(c.notes)))


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, status, title, notes in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{status} {num}. {title}" + (f" ({notes})" if notes else ""))
