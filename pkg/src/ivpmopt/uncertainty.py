"""Polynomial fuzzy numbers, possibility/necessity measures and interval expected values.

A shape ``a/b/c/d`` of degree ``n`` has membership rising from 0 at ``a`` to 1
at ``b``, flat on the core ``[b, c]``, and falling back to 0 at ``d``.  For both
parities of ``n`` the rising and falling branches reduce to::

    f_L(x) = 1 - ((b - x) / (b - a)) ** n      on [a, b)
    f_R(x) = 1 - ((x - c) / (d - c)) ** n      on (c, d]

which is exactly the odd/even table form once the sign of ``(x - b) ** n`` is
taken into account.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Union

from scipy import integrate

from .interval import Interval, mul, neg

COEF_KINDS = ("constant", "interval", "possibilistic", "probabilistic")


class DensityUndefinedError(ValueError):
    """Raised when a density is requested on a zero-width side (the cumulative jumps)."""


@dataclass(frozen=True)
class Shape:
    a: float
    b: float
    c: float
    d: float
    n: int = 1

    def __post_init__(self):
        vals = [float(v) for v in (self.a, self.b, self.c, self.d)]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("shape parameters must be finite")
        if not (vals[0] <= vals[1] <= vals[2] <= vals[3]):
            raise ValueError(
                f"shape must satisfy a <= b <= c <= d, got {vals[0]}/{vals[1]}/{vals[2]}/{vals[3]}"
            )
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"polynomial degree must be a positive integer, got {self.n!r}")
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)
        object.__setattr__(self, "n", int(self.n))

    @property
    def core(self) -> Interval:
        return Interval(self.b, self.c)

    @property
    def support(self) -> Interval:
        return Interval(self.a, self.d)

    def __str__(self):
        return f"{self.a:g}/{self.b:g}/{self.c:g}/{self.d:g} (n={self.n})"


@dataclass(frozen=True)
class Coef:
    """Uncertain coefficient; ``negated`` records a leading unary minus in the model source."""

    kind: str
    value: Union[float, Interval, Shape]
    negated: bool = False

    def __post_init__(self):
        if self.kind not in COEF_KINDS:
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "constant":
            v = float(self.value)
            if not math.isfinite(v):
                raise ValueError("constant coefficient must be finite")
            object.__setattr__(self, "value", v)
        elif self.kind == "interval":
            if not isinstance(self.value, Interval):
                raise TypeError("interval coefficient needs an Interval value")
            if not (math.isfinite(self.value.lo) and math.isfinite(self.value.hi)):
                raise ValueError("interval coefficient must be finite")
        elif not isinstance(self.value, Shape):
            raise TypeError(f"{self.kind} coefficient needs a Shape value")
        object.__setattr__(self, "negated", bool(self.negated))

    @classmethod
    def constant(cls, value: float, negated: bool = False) -> "Coef":
        return cls("constant", value, negated)

    @classmethod
    def interval(cls, lo: float, hi: float, negated: bool = False) -> "Coef":
        return cls("interval", Interval(lo, hi), negated)

    @classmethod
    def pos(cls, a, b, c, d, n=1, negated: bool = False) -> "Coef":
        return cls("possibilistic", Shape(a, b, c, d, n), negated)

    @classmethod
    def prob(cls, a, b, c, d, n=1, negated: bool = False) -> "Coef":
        return cls("probabilistic", Shape(a, b, c, d, n), negated)

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def negate(self) -> "Coef":
        return Coef(self.kind, self.value, not self.negated)


# --------------------------------------------------------------------------
# membership, cumulatives, densities
# --------------------------------------------------------------------------

def _left_branch(s: Shape, x: float) -> float:
    return 1.0 - ((s.b - x) / (s.b - s.a)) ** s.n


def _right_branch(s: Shape, x: float) -> float:
    return 1.0 - ((x - s.c) / (s.d - s.c)) ** s.n


def membership(s: Shape, x: float) -> float:
    if s.b <= x <= s.c:
        return 1.0
    if s.a <= x < s.b:
        # a == b never reaches here: the interval [a, b) is empty
        return _left_branch(s, x)
    if s.c < x <= s.d:
        return _right_branch(s, x)
    return 0.0


def upper_cumulative(s: Shape, x: float) -> float:
    """Possibility of ``(-inf, x]``."""
    if x < s.a:
        return 0.0
    if x < s.b:
        return _left_branch(s, x)
    return 1.0


def lower_cumulative(s: Shape, x: float) -> float:
    """Necessity of ``(-inf, x]``."""
    if x < s.c:
        return 0.0
    if x <= s.d:
        if s.d == s.c:
            return 1.0
        return 1.0 - _right_branch(s, x)
    return 1.0


def density(side: str, s: Shape, x: float) -> float:
    """Left density (derivative of the upper cumulative) or right density (of the lower one)."""
    if side == "left":
        if s.b == s.a:
            raise DensityUndefinedError("left density undefined: a == b, upper cumulative jumps at b")
        if s.a <= x <= s.b:
            return s.n * abs(x - s.b) ** (s.n - 1) / (s.b - s.a) ** s.n
        return 0.0
    if side == "right":
        if s.d == s.c:
            raise DensityUndefinedError("right density undefined: c == d, lower cumulative jumps at c")
        if s.c <= x <= s.d:
            return s.n * abs(x - s.c) ** (s.n - 1) / (s.d - s.c) ** s.n
        return 0.0
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


# --------------------------------------------------------------------------
# finite unions of intervals
# --------------------------------------------------------------------------

class Piece(NamedTuple):
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            return not (self.lo_closed and self.hi_closed) or math.isinf(self.lo)
        return False

    def contains(self, x: float) -> bool:
        left = self.lo < x or (self.lo_closed and x == self.lo)
        right = x < self.hi or (self.hi_closed and x == self.hi)
        return left and right


class IntervalSet:
    """Sorted union of disjoint intervals; ``lo = -inf`` / ``hi = inf`` make rays.

    Infinite endpoints are always treated as open.
    """

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable = ()):
        raw = []
        for p in pieces:
            if isinstance(p, Interval):
                p = Piece(p.lo, p.hi, True, True)
            elif not isinstance(p, Piece):
                p = Piece(*p)
            lo, hi = float(p.lo), float(p.hi)
            p = Piece(lo, hi, p.lo_closed and math.isfinite(lo), p.hi_closed and math.isfinite(hi))
            if not p.is_empty():
                raw.append(p)
        self.pieces: tuple[Piece, ...] = tuple(_merge(raw))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls()

    @classmethod
    def reals(cls) -> "IntervalSet":
        return cls([Piece(-math.inf, math.inf, False, False)])

    @classmethod
    def at_most(cls, x: float, closed: bool = True) -> "IntervalSet":
        return cls([Piece(-math.inf, x, False, closed)])

    @classmethod
    def at_least(cls, x: float, closed: bool = True) -> "IntervalSet":
        return cls([Piece(x, math.inf, closed, False)])

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, x: float) -> bool:
        return any(p.contains(x) for p in self.pieces)

    def complement(self) -> "IntervalSet":
        out = []
        cur, cur_closed = -math.inf, False
        for p in self.pieces:
            out.append(Piece(cur, p.lo, cur_closed, not p.lo_closed))
            cur, cur_closed = p.hi, not p.hi_closed
        out.append(Piece(cur, math.inf, cur_closed, False))
        return IntervalSet(out)

    def __iter__(self) -> Iterator[Piece]:
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        def fmt(p):
            return f"{'[' if p.lo_closed else '('}{p.lo:g}, {p.hi:g}{']' if p.hi_closed else ')'}"

        return "IntervalSet(" + " U ".join(fmt(p) for p in self.pieces) + ")"


def _merge(pieces: list[Piece]) -> list[Piece]:
    pieces = sorted(pieces, key=lambda p: (p.lo, not p.lo_closed))
    out: list[Piece] = []
    for p in pieces:
        if out:
            q = out[-1]
            touching = q.hi > p.lo or (q.hi == p.lo and (q.hi_closed or p.lo_closed))
            if touching:
                if p.hi > q.hi:
                    out[-1] = Piece(q.lo, p.hi, q.lo_closed, p.hi_closed)
                elif p.hi == q.hi:
                    out[-1] = Piece(q.lo, q.hi, q.lo_closed, q.hi_closed or p.hi_closed)
                continue
        out.append(p)
    return out


# --------------------------------------------------------------------------
# measures
# --------------------------------------------------------------------------

def _sup_on_piece(s: Shape, p: Piece) -> float:
    # intersects the core?
    if p.hi > s.b or (p.hi == s.b and p.hi_closed):
        if p.lo < s.c or (p.lo == s.c and p.lo_closed):
            return 1.0
    # membership is non-decreasing left of the core and non-increasing right of it
    if p.hi <= s.b:
        if p.hi < s.b:
            return membership(s, p.hi)
        return 1.0 if s.a < s.b else 0.0  # open at b: left limit
    if p.lo > s.c:
        return membership(s, p.lo)
    return 1.0 if s.c < s.d else 0.0  # open at c: right limit


def pos_measure(s: Shape, A: IntervalSet) -> float:
    """Supremum of the membership over ``A`` (0 on the empty set)."""
    return max((_sup_on_piece(s, p) for p in A), default=0.0)


def nec_measure(s: Shape, A: IntervalSet) -> float:
    return 1.0 - pos_measure(s, A.complement())


def ivpm(s: Shape, A: IntervalSet) -> Interval:
    """The ``[Nec(A), Pos(A)]`` bracket for the unknown probability of ``A``."""
    return Interval(nec_measure(s, A), pos_measure(s, A))


_UNIT = Interval(0.0, 1.0)


def product_ivpm(ix: Interval, iy: Interval) -> Interval:
    """Measure of a product set for independent variables."""
    for iv in (ix, iy):
        if not _UNIT.contains(iv):
            raise ValueError(f"IVPM value {iv} is not contained in [0, 1]")
    return mul(ix, iy)


# --------------------------------------------------------------------------
# expected values
# --------------------------------------------------------------------------

def possibilistic_expected(s: Shape) -> Interval:
    return Interval(s.a + (s.b - s.a) / (s.n + 1), s.d - (s.d - s.c) / (s.n + 1))


def probabilistic_mean(s: Shape, tol: float = 1e-9) -> float:
    """Mean of the density proportional to the membership function."""
    if s.d == s.a:
        return s.a
    # integrate on the support rescaled to [0, 1]; tiny supports would underflow otherwise
    w = s.d - s.a
    u = Shape(0.0, (s.b - s.a) / w, (s.c - s.a) / w, 1.0, s.n)
    breaks = [u.a, u.b, u.c, u.d]
    mass = moment = 0.0
    for lo, hi in zip(breaks, breaks[1:]):
        if hi > lo:
            m0, _ = integrate.quad(lambda t: membership(u, t), lo, hi, epsabs=tol * 1e-3, epsrel=0.0)
            m1, _ = integrate.quad(lambda t: t * membership(u, t), lo, hi, epsabs=tol * 1e-3, epsrel=0.0)
            mass += m0
            moment += m1
    return min(max(s.a + w * (moment / mass), s.a), s.d)


def interval_expected_value(c: Coef) -> Interval:
    if c.kind == "constant":
        ev = Interval.point(c.value)
    elif c.kind == "interval":
        ev = c.value
    elif c.kind == "possibilistic":
        ev = possibilistic_expected(c.value)
    else:
        ev = Interval.point(probabilistic_mean(c.value))
    return neg(ev) if c.negated else ev

