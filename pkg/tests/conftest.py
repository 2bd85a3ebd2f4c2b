import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from ivpmopt import fixture_path, load_problem, load_reduced
from ivpmopt.uncertainty import IntervalSet, Piece, Shape

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex1():
    return load_problem(fixture_path("ex1.ivpm"))


@pytest.fixture(scope="session")
def ex2():
    return load_problem(fixture_path("ex2.ivpm"))


@pytest.fixture(scope="session")
def ex1_printed():
    return load_reduced(fixture_path("ex1_reference.json"))


@pytest.fixture(scope="session")
def ex2_printed():
    return load_reduced(fixture_path("ex2_reference.json"))


# ---- strategies -------------------------------------------------------------

def _sorted4(draw, lo=-10.0, hi=10.0, allow_flat=True):
    xs = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=4, max_size=4)))
    if not allow_flat and (xs[1] - xs[0] < 1e-3 or xs[3] - xs[2] < 1e-3):
        xs = [xs[0], xs[0] + 0.5 + abs(xs[1] - xs[0]), 0.0, 0.0]
        xs[2] = xs[1] + abs(draw(st.floats(0, 3)))
        xs[3] = xs[2] + 0.5 + abs(draw(st.floats(0, 3)))
    return xs


@st.composite
def shapes(draw, max_degree=5, proper=False):
    a, b, c, d = _sorted4(draw, allow_flat=not proper)
    return Shape(a, b, c, d, draw(st.integers(1, max_degree)))


@st.composite
def interval_sets(draw):
    k = draw(st.integers(0, 3))
    cuts = sorted(draw(st.lists(st.floats(-12, 12, allow_nan=False), min_size=2 * k, max_size=2 * k)))
    pieces = []
    for i in range(k):
        lo, hi = cuts[2 * i], cuts[2 * i + 1]
        pieces.append(Piece(lo, hi, draw(st.booleans()), draw(st.booleans())))
    if draw(st.booleans()):
        pieces.append(Piece(-math.inf, draw(st.floats(-12, 12)), False, draw(st.booleans())))
    if draw(st.booleans()):
        pieces.append(Piece(draw(st.floats(-12, 12)), math.inf, draw(st.booleans()), False))
    return IntervalSet(pieces)


def random_shape(rng, max_degree=5, proper=True):
    a = rng.uniform(-10, 10)
    b = a + rng.uniform(0.1 if proper else 0.0, 4)
    c = b + rng.uniform(0, 3)
    d = c + rng.uniform(0.1 if proper else 0.0, 4)
    return Shape(a, b, c, d, int(rng.integers(1, max_degree + 1)))


def random_interval_set(rng, shape=None):
    lo, hi = (shape.a - 2, shape.d + 2) if shape else (-12, 12)
    k = int(rng.integers(0, 4))
    cuts = np.sort(rng.uniform(lo, hi, 2 * k))
    pieces = [Piece(cuts[2 * i], cuts[2 * i + 1], bool(rng.integers(2)), bool(rng.integers(2)))
              for i in range(k)]
    if rng.random() < 0.3:
        pieces.append(Piece(-math.inf, rng.uniform(lo, hi), False, bool(rng.integers(2))))
    if rng.random() < 0.3:
        pieces.append(Piece(rng.uniform(lo, hi), math.inf, bool(rng.integers(2)), False))
    return IntervalSet(pieces)


# ---- acceptance report ---------------------------------------------------------

_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the outcome is printed in the terminal summary."""
    def record(number, title):
        _ACCEPTANCE[number] = (title, request.node)
    return record


def pytest_runtest_makereport(item, call):
    if call.when == "call":
        for number, entry in list(_ACCEPTANCE.items()):
            if len(entry) == 2 and entry[1] is item:
                title = entry[0]
                detail = "" if call.excinfo is None else str(call.excinfo.value).splitlines()[0]
                _ACCEPTANCE[number] = (title, call.excinfo is None, detail)


def pytest_terminal_summary(terminalreporter):
    done = {k: v for k, v in _ACCEPTANCE.items() if len(v) == 3}
    if not done:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(done):
        title, ok, detail = done[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  -- {detail}" if detail else ""))
