from __future__ import annotations

import numpy as np
import pytest

from quasiperfect.field import build_field, field_of_size
from quasiperfect.geometry import AffineSpace
from quasiperfect.grm import build_target_code
from quasiperfect.switching import CosetIndex, build_ri, coset_partition

_CRITERIA: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = mark.args
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _CRITERIA.append((number, title, f"{status} ({item.name})"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {number:2d} {title}: {status}")


class Setup:
    """Base code, R_i, coset representatives and lookup index for one (q, m, i)."""

    def __init__(self, q: int, m: int, i: int = 0):
        self.field = field_of_size(q)
        self.space = AffineSpace(self.field, m)
        self.code = build_target_code(self.space)
        self.ri = build_ri(self.code, self.space, i)
        self.reps = coset_partition(self.code, self.ri)
        self.index = CosetIndex(self.ri, self.reps)
        self.q, self.m, self.n, self.i = q, m, self.space.n, i
        self.T = self.reps.shape[0]


_SETUPS: dict[tuple[int, int, int], Setup] = {}


def setup_for(q: int, m: int, i: int = 0) -> Setup:
    key = (q, m, i)
    if key not in _SETUPS:
        _SETUPS[key] = Setup(q, m, i)
    return _SETUPS[key]


@pytest.fixture(scope="session")
def gf3():
    return build_field(3)


@pytest.fixture(scope="session")
def s32() -> Setup:
    return setup_for(3, 2, 0)


@pytest.fixture(scope="session")
def all_f3_9() -> np.ndarray:
    """Every vector of F_3^9, coordinate 0 least significant."""
    idx = np.arange(3**9)
    return ((idx[:, None] // 3 ** np.arange(9)) % 3).astype(np.uint8)
