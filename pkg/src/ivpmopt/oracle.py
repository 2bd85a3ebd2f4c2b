"""Brute-force cross-checks, kept independent of the code paths they audit.

The quadrature here is a self-contained adaptive Gauss-Legendre scheme and
the densities are written out per parity, rather than reusing
:mod:`ivpmopt.uncertainty`.  Grid search goes through the kernel grid
evaluator, which shares nothing with the local search or the simplex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import kernels
from .interval import Interval
from .reduction import ReducedProblem, evaluate_exact_penalty
from .uncertainty import IntervalSet, Shape

_LO_RULE = leggauss(10)
_HI_RULE = leggauss(21)


class QuadratureError(RuntimeError):
    pass


class GridTooLarge(ValueError):
    pass


def _panel(f, a, b, rule):
    nodes, weights = rule
    half = 0.5 * (b - a)
    xs = a + half * (nodes + 1.0)
    return half * float(np.dot(weights, f(xs)))


def adaptive_quad(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                  tol: float = 1e-9, max_panels: int = 4000) -> float:
    """Integrate a vectorized ``f`` over ``[a, b]`` to absolute tolerance ``tol``."""
    if b <= a:
        return 0.0
    total = 0.0
    stack = [(a, b, tol)]
    panels = 0
    while stack:
        lo, hi, eps = stack.pop()
        panels += 1
        if panels > max_panels:
            raise QuadratureError(f"no convergence within {max_panels} panels")
        coarse = _panel(f, lo, hi, _LO_RULE)
        fine = _panel(f, lo, hi, _HI_RULE)
        if abs(fine - coarse) <= eps or hi - lo < 1e-12 * max(1.0, abs(lo)):
            total += fine
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, eps / 2))
            stack.append((mid, hi, eps / 2))
    return total


# --- densities straight from the table, odd and even rows ---------------------

def _upper_cdf_derivative(s: Shape) -> Callable:
    a, b, n = s.a, s.b, s.n
    w = (b - a) ** n
    if n % 2 == 1:
        # d/dx [(x - b)^n / (b - a)^n + 1]
        return lambda x: n * (x - b) ** (n - 1) / w
    # d/dx [-(x - b)^n / (b - a)^n + 1]
    return lambda x: -n * (x - b) ** (n - 1) / w


def _lower_cdf_derivative(s: Shape) -> Callable:
    c, d, n = s.c, s.d, s.n
    w = (d - c) ** n
    # d/dx [1 - f_R(x)] with f_R = -(x - c)^n / (d - c)^n + 1 for both parities
    return lambda x: n * (x - c) ** (n - 1) / w


def quadrature_expected(s: Shape, tol: float = 1e-9) -> Interval:
    """``[int x d-(x) dx, int x d+(x) dx]`` by numerical integration.

    A zero-width side has a point-mass cumulative, so its endpoint is used
    directly.
    """
    if s.b > s.a:
        dm = _upper_cdf_derivative(s)
        left = adaptive_quad(lambda x: x * dm(x), s.a, s.b, tol)
    else:
        left = s.a
    if s.d > s.c:
        dp = _lower_cdf_derivative(s)
        right = adaptive_quad(lambda x: x * dp(x), s.c, s.d, tol)
    else:
        right = s.d
    return Interval(min(left, right), max(left, right))


def density_mass(s: Shape, tol: float = 1e-9) -> tuple[float, float]:
    """Integrals of the left and right densities over their supports."""
    ml = adaptive_quad(_upper_cdf_derivative(s), s.a, s.b, tol) if s.b > s.a else 1.0
    mr = adaptive_quad(_lower_cdf_derivative(s), s.c, s.d, tol) if s.d > s.c else 1.0
    return ml, mr


def _membership_vec(s: Shape) -> Callable:
    a, b, c, d, n = s.a, s.b, s.c, s.d, s.n

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        out[(x >= b) & (x <= c)] = 1.0
        if b > a:
            m = (x >= a) & (x < b)
            sign = 1.0 if n % 2 == 1 else -1.0
            out[m] = sign * (x[m] - b) ** n / (b - a) ** n + 1.0
        if d > c:
            m = (x > c) & (x <= d)
            out[m] = -((x[m] - c) ** n) / (d - c) ** n + 1.0
        return out

    return f


def probability(s: Shape, A: IntervalSet, tol: float = 1e-10) -> float:
    """Pr(A) under the density proportional to the membership function."""
    if s.d == s.a:
        return 1.0 if A.contains(s.a) else 0.0
    f = _membership_vec(s)
    knots = sorted({s.a, s.b, s.c, s.d})

    def mass(lo, hi):
        lo, hi = max(lo, s.a), min(hi, s.d)
        total = 0.0
        for k0, k1 in zip(knots, knots[1:]):
            u, v = max(lo, k0), min(hi, k1)
            if v > u:
                total += adaptive_quad(f, u, v, tol)
        return total

    z = mass(s.a, s.d)
    return sum(mass(p.lo, p.hi) for p in A) / z


def probabilistic_mean_oracle(s: Shape, tol: float = 1e-10) -> float:
    if s.d == s.a:
        return s.a
    f = _membership_vec(s)
    knots = sorted({s.a, s.b, s.c, s.d})
    z = m1 = 0.0
    for k0, k1 in zip(knots, knots[1:]):
        if k1 > k0:
            z += adaptive_quad(f, k0, k1, tol)
            m1 += adaptive_quad(lambda x: x * f(x), k0, k1, tol)
    return m1 / z


# --- grid search -----------------------------------------------------------------

@dataclass
class GridSpec:
    """Lattice resolution per variable; bounds come from the problem."""

    resolution: object = 0.05  # float or per-variable sequence
    cap: int = 100_000_000

    def axes(self, r: ReducedProblem) -> list[np.ndarray]:
        res = np.broadcast_to(np.asarray(self.resolution, dtype=float), (r.n,))
        if np.any(res <= 0):
            raise ValueError("grid resolution must be positive")
        if not np.all(np.isfinite(r.upper)):
            raise ValueError("grid search needs finite upper bounds on every variable")
        axes = []
        total = 1
        for lo, hi, h in zip(r.lower, r.upper, res):
            count = int(math.ceil((hi - lo) / h - 1e-9)) + 1
            axes.append(np.linspace(lo, hi, count) if hi > lo else np.array([lo]))
            total *= len(axes[-1])
        if total > self.cap:
            raise GridTooLarge(f"grid has {total} points, cap is {self.cap}")
        return axes

    def steps(self, r: ReducedProblem) -> np.ndarray:
        return np.array([ax[1] - ax[0] if len(ax) > 1 else 0.0 for ax in self.axes(r)])


@dataclass
class GridResult:
    x: np.ndarray
    objective: float
    points: int
    steps: np.ndarray = field(default_factory=lambda: np.zeros(0))


def grid_search(r: ReducedProblem, g: Optional[GridSpec] = None, backend=None) -> GridResult:
    """Exhaustive evaluation of the exact-penalty objective on a box lattice.

    Ties go to the lexicographically smallest point.
    """
    g = g or GridSpec()
    axes = g.axes(r)
    if isinstance(backend, str) or backend is None:
        backend = kernels.get_backend(backend)
    sizes = np.array([len(a) for a in axes], dtype=np.int64)
    if r.n == 0:
        return GridResult(np.zeros(0), r.constant - float(r.excess @ np.maximum(r.c, 0))
                          - float(r.shortage @ np.maximum(-r.c, 0)), 1)
    padded = np.zeros((r.n, int(sizes.max())))
    for i, a in enumerate(axes):
        padded[i, :len(a)] = a
    Q, b, k, A, c, e, s, _, _ = kernels.as_arrays(r)
    flat, best, total = backend.grid_maximize(padded, sizes, Q, b, k, A, c, e, s)
    idx = np.unravel_index(int(flat), tuple(int(v) for v in sizes))
    x = np.array([axes[i][j] for i, j in enumerate(idx)])
    steps = np.array([a[1] - a[0] if len(a) > 1 else 0.0 for a in axes])
    return GridResult(x, float(best), int(total), steps)


def lipschitz_bounds(r: ReducedProblem) -> np.ndarray:
    """Per-coordinate bound on ``|dh/dx_i|`` over the (finite) box."""
    xmax = np.maximum(np.abs(r.lower), np.abs(r.upper))
    quad = (np.abs(r.quadratic) + np.abs(r.quadratic.T)) @ xmax
    pen = np.maximum(r.excess, r.shortage) @ np.abs(r.A) if r.m else np.zeros(r.n)
    return np.abs(r.linear) + quad + pen


def grid_gap_bound(r: ReducedProblem, steps) -> float:
    """Upper bound on ``max h - max_grid h``: the optimum is within half a step of a node."""
    return float(lipschitz_bounds(r) @ (0.5 * np.asarray(steps, dtype=float)))


# --- solution checks -------------------------------------------------------------

@dataclass
class CheckReport:
    checks: dict
    residuals: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": dict(self.checks),
                "residuals": {k: float(v) for k, v in self.residuals.items()}}


def check_solution(r: ReducedProblem, sol, tol: float = 1e-6) -> CheckReport:
    """Bounds, slack consistency ``psi = max(0, g)``, ``zeta = max(0, -g)``, and objective."""
    x = np.asarray(sol.x, dtype=float)
    psi = np.asarray(sol.psi, dtype=float)
    zeta = np.asarray(sol.zeta, dtype=float)
    checks, res = {}, {}
    if x.shape != (r.n,) or psi.shape != (r.m,) or zeta.shape != (r.m,):
        return CheckReport({"shapes": False}, {})
    below = np.maximum(r.lower - x, 0.0)
    above = np.maximum(x - r.upper, 0.0)
    res["bounds"] = float(max(below.max(initial=0.0), above.max(initial=0.0)))
    checks["bounds"] = res["bounds"] <= tol
    g = r.A @ x + r.c
    res["psi"] = float(np.abs(psi - np.maximum(g, 0.0)).max(initial=0.0))
    res["zeta"] = float(np.abs(zeta - np.maximum(-g, 0.0)).max(initial=0.0))
    checks["psi"] = res["psi"] <= tol
    checks["zeta"] = res["zeta"] <= tol
    res["nonnegative"] = float(max(-psi.min(initial=0.0), -zeta.min(initial=0.0), 0.0))
    checks["nonnegative"] = res["nonnegative"] <= tol
    if checks["bounds"]:
        h = evaluate_exact_penalty(r, np.clip(x, r.lower, r.upper), tol=np.inf)
        res["objective"] = abs(float(sol.objective) - h)
        checks["objective"] = res["objective"] <= tol
    else:
        res["objective"] = math.nan
        checks["objective"] = False
    return CheckReport(checks, res)
