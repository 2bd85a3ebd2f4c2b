"""Closed real intervals with Moore arithmetic.

No outward rounding is performed; endpoints are plain binary floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

Real = Union[int, float]


class IntervalFeatures(NamedTuple):
    midpoint: float
    width: float
    left: float
    right: float


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; ``lo == hi`` represents an exact real."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"invalid interval: lo={lo!r} > hi={hi!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value: Real) -> "Interval":
        return cls(value, value)

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, other: Union["Interval", Real], tol: float = 0.0) -> bool:
        if isinstance(other, Interval):
            return self.lo - tol <= other.lo and other.hi <= self.hi + tol
        return self.lo - tol <= other <= self.hi + tol

    def features(self) -> IntervalFeatures:
        return interval_features(self)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        if isinstance(other, Interval):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


def _coerce(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(value)


def add(x: Interval, y: Interval) -> Interval:
    return Interval(x.lo + y.lo, x.hi + y.hi)


def sub(x: Interval, y: Interval) -> Interval:
    return Interval(x.lo - y.hi, x.hi - y.lo)


def neg(x: Interval) -> Interval:
    return Interval(-x.hi, -x.lo)


def mul(x: Interval, y: Interval) -> Interval:
    products = (x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi)
    return Interval(min(products), max(products))


def scale(x: Interval, k: Real) -> Interval:
    k = float(k)
    if k < 0:
        return Interval(k * x.hi, k * x.lo)
    return Interval(k * x.lo, k * x.hi)


_OPS = {
    "add": lambda x, y: add(x, _coerce(y)),
    "sub": lambda x, y: sub(x, _coerce(y)),
    "neg": lambda x, y=None: neg(x),
    "mul": lambda x, y: mul(x, _coerce(y)),
    "scale": lambda x, y: scale(x, y),
}


def interval_arith(op: str, x: Interval, y: Union[Interval, Real, None] = None) -> Interval:
    """Dispatch one of ``add``, ``sub``, ``neg``, ``mul``, ``scale`` by name."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown interval operation {op!r}") from None
    if op == "neg":
        return fn(x)
    if y is None:
        raise ValueError(f"operation {op!r} needs a second operand")
    return fn(x, y)


def interval_features(x: Interval) -> IntervalFeatures:
    return IntervalFeatures(
        midpoint=(x.lo + x.hi) / 2.0,
        width=x.hi - x.lo,
        left=x.lo,
        right=x.hi,
    )
