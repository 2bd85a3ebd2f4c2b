import pytest
from hypothesis import given, strategies as st

from ivpmopt.interval import Interval, interval_arith, interval_features

finite = st.floats(-1e6, 1e6, allow_nan=False)
dyadic = st.integers(-4096, 4096).map(lambda k: k / 64)


@st.composite
def intervals(draw, elems=finite):
    x, y = draw(elems), draw(elems)
    return Interval(min(x, y), max(x, y))


def test_add():
    assert interval_arith("add", Interval(1, 2), Interval(3, 5)) == Interval(4, 7)


def test_neg_of_expected_value():
    assert interval_arith("neg", Interval(29 / 4, 35 / 4)) == Interval(-35 / 4, -29 / 4)


def test_mul_mixed_signs():
    assert interval_arith("mul", Interval(-1, 2), Interval(3, 4)) == Interval(-4, 8)


def test_sub_and_scale():
    assert interval_arith("sub", Interval(1, 2), Interval(3, 5)) == Interval(-4, -1)
    assert interval_arith("scale", Interval(1, 3), -2) == Interval(-6, -2)
    assert interval_arith("scale", Interval(1, 3), 0.5) == Interval(0.5, 1.5)


def test_operators_match_functions():
    x, y = Interval(-1, 2), Interval(3, 4)
    assert x + y == interval_arith("add", x, y)
    assert x - y == interval_arith("sub", x, y)
    assert x * y == interval_arith("mul", x, y)
    assert -x == Interval(-2, 1)
    assert x * -3 == Interval(-6, 3)


def test_rejects_reversed_and_nan():
    with pytest.raises(ValueError):
        Interval(2, 1)
    with pytest.raises(ValueError):
        Interval(float("nan"), 1)


def test_unknown_op():
    with pytest.raises(ValueError):
        interval_arith("div", Interval(1, 2), Interval(1, 2))


@pytest.mark.parametrize("x, expected", [
    (Interval(3, 5), (4, 2, 3, 5)),
    (Interval(1.25, 1.25), (1.25, 0, 1.25, 1.25)),
    (Interval(-2, 0), (-1, 2, -2, 0)),
])
def test_features(x, expected):
    assert tuple(interval_features(x)) == expected


def test_degenerate():
    assert Interval.point(6).is_degenerate
    assert not Interval(0, 1).is_degenerate


@given(intervals(), intervals())
def test_sub_of_add_contains(x, y):
    assert (x + y - y).contains(x, tol=1e-9 * (1 + abs(x.lo) + abs(x.hi) + abs(y.lo) + abs(y.hi)))


@given(intervals())
def test_double_negation(x):
    assert -(-x) == x


@given(intervals(), intervals())
def test_mul_commutes_and_unit(x, y):
    assert x * y == y * x
    assert x * Interval(1, 1) == x


@given(intervals(dyadic))
def test_midpoint_width_reconstruct(x):
    f = interval_features(x)
    assert f.midpoint - f.width / 2 == x.lo
    assert f.midpoint + f.width / 2 == x.hi


@given(intervals(), intervals())
def test_mul_encloses_products(x, y):
    z = x * y
    for a in (x.lo, x.hi, (x.lo + x.hi) / 2):
        for b in (y.lo, y.hi, (y.lo + y.hi) / 2):
            assert z.contains(a * b, tol=1e-9 * (1 + abs(a * b)))
