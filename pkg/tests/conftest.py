from fractions import Fraction as F

import pytest

from momhist import fixtures
from momhist.levelset import enumerate_level_sets

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def tiny():
    return fixtures.load("tiny")


@pytest.fixture(scope="session")
def data1():
    return fixtures.load("data1")


@pytest.fixture(scope="session")
def data3():
    return fixtures.load("data3")


@pytest.fixture(scope="session")
def sym20():
    return fixtures.load("symmetric20")


@pytest.fixture(scope="session")
def tiny_catalog(tiny):
    return enumerate_level_sets(tiny, 4)


@pytest.fixture(scope="session")
def data3_catalog(data3):
    return enumerate_level_sets(data3, 6)


@pytest.fixture(scope="session")
def sym20_catalog(sym20):
    return enumerate_level_sets(sym20, 6)


@pytest.fixture
def record():
    """Record one acceptance line; printed in the terminal summary."""

    def _record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((label, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE:
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


def pt(t, h):
    return (F(t), F(h))
