from __future__ import annotations

import time
from pathlib import Path

import pytest

from pcbench.circuit import LOGICAL, PHYSICAL, parse_circuit
from pcbench.harness import load_dataset

from builders import clean_logical_data, clean_physical_data, doc

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def projects():
    return load_dataset()


@pytest.fixture(scope="session")
def by_id(projects):
    return {p.id: p for p in projects}


@pytest.fixture
def ntc_physical():
    return parse_circuit((FIXTURES / "ntc_physical.json").read_text(), PHYSICAL)


@pytest.fixture
def clean_physical():
    return doc(clean_physical_data(), PHYSICAL)


@pytest.fixture
def clean_logical():
    return doc(clean_logical_data(), LOGICAL)


# -- acceptance reporting ----------------------------------------------------------

WALL_CLOCK_LIMIT_S = 60.0
_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}
_SESSION_START = [0.0]


def pytest_sessionstart(session):
    _SESSION_START[0] = time.perf_counter()


@pytest.fixture
def acceptance():
    """Record the outcome of one acceptance criterion for the summary."""

    def record(number: int, name: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE[number] = (name, bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    elapsed = time.perf_counter() - _SESSION_START[0]
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        name, ok, detail = _ACCEPTANCE[number]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}"
                      + (f" ({detail})" if detail else ""))
    ok = elapsed < WALL_CLOCK_LIMIT_S
    tr.write_line(f"[{'PASS' if ok else 'FAIL'}] 10. full suite wall clock "
                  f"({elapsed:.1f} s, limit {WALL_CLOCK_LIMIT_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _SESSION_START[0]
    if _ACCEPTANCE and elapsed >= WALL_CLOCK_LIMIT_S and exitstatus == 0:
        session.exitstatus = 1
