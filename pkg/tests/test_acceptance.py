"""Acceptance criteria, each at its stated tolerance and time budget.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion is
printed in the terminal summary.  Running this file directly prints the same
lines and exits non-zero if any criterion fails.
"""
import math
import time

import numpy as np

from ivpmopt import fixture_path, load_problem, load_reduced
from ivpmopt.model import (
    Constraint, ReductionConfig, Term, UncertainProblem, Variable, parse_problem, serialize_problem,
)
from ivpmopt.oracle import GridSpec, grid_gap_bound, grid_search, probability, quadrature_expected
from ivpmopt.reduction import penalty_remodel, reduce
from ivpmopt.solver import solve_lp, solve_qp
from ivpmopt.uncertainty import (
    Coef, Shape, interval_expected_value, nec_measure, pos_measure,
)

from conftest import random_interval_set, random_shape
from test_model import EX1_AST
from test_solver import make


class Timer:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.budget, f"took {self.elapsed:.2f} s, budget {self.budget} s"


def close(got, want, tol):
    return abs(got - want) <= tol


# 1 --------------------------------------------------------------------------------

def test_criterion_1_expected_values(criterion):
    criterion(1, "interval expected values of the example coefficients")
    cases = [
        (Coef.pos(0, 1, 2, 3, 2), (1 / 3, 8 / 3)),
        (Coef.prob(2, 3, 3, 4, 1), (3, 3)),
        (Coef.interval(3, 5), (3, 5)),
        (Coef.pos(2, 4, 4, 6, 1), (3, 5)),
        (Coef.prob(1, 2, 2, 3, 1), (2, 2)),
        (Coef.pos(7, 8, 8, 9, 3), (29 / 4, 35 / 4)),
        (Coef.prob(4, 5, 5, 6, 1), (5, 5)),
    ]
    with Timer(1.0):
        bad = []
        for coef, (lo, hi) in cases:
            ev = interval_expected_value(coef)
            if not (close(ev.lo, lo, 1e-12) and close(ev.hi, hi, 1e-12)):
                bad.append((coef, ev))
    assert not bad, f"mismatches: {bad}"


# 2 --------------------------------------------------------------------------------

def test_criterion_2_closed_form_vs_quadrature(criterion):
    criterion(2, "closed-form EV matches quadrature, degrees 1-5, 100 shapes each")
    rng = np.random.default_rng(20240601)
    worst = 0.0
    with Timer(10.0):
        for n in range(1, 6):
            for _ in range(100):
                s = random_shape(rng)
                s = Shape(s.a, s.b, s.c, s.d, n)
                ev, q = interval_expected_value(Coef("possibilistic", s)), quadrature_expected(s)
                worst = max(worst, abs(ev.lo - q.lo), abs(ev.hi - q.hi))
    assert worst <= 1e-6, f"largest endpoint difference {worst:.3g}"


# 3 --------------------------------------------------------------------------------

def test_criterion_3_reduction(criterion):
    criterion(3, "reduced coefficients of the linear example")
    r = reduce(load_problem(fixture_path("ex1.ivpm")))
    expected = {
        "g1 x1": (r.A[0, 0], 5 / 2), "g1 x2": (r.A[0, 1], 7 / 2), "g1 x3": (r.A[0, 2], -2),
        "g1 const": (r.c[0], 1 / 2),
        "g2 x1": (r.A[1, 0], 6), "g2 x2": (r.A[1, 1], -1), "g2 x3": (r.A[1, 2], 9), "g2 const": (r.c[1], -9),
        "f x1": (r.linear[0], 23 / 12), "f x2": (r.linear[1], -3 / 2), "f x3": (r.linear[2], 5 / 2),
        "g3 x3": (r.A[2, 2], -13 / 4),
    }
    bad = {k: (got, want) for k, (got, want) in expected.items() if not close(got, want, 1e-12)}
    assert not bad, "got/want " + ", ".join(f"{k}: {g:g} vs {w:g}" for k, (g, w) in bad.items())


# 4 --------------------------------------------------------------------------------

def test_criterion_4_lp_end_to_end(criterion):
    criterion(4, "LP on the reference reduced model")
    with Timer(1.0):
        r = load_reduced(fixture_path("ex1_reference.json"))
        sol = solve_lp(penalty_remodel(r))
    assert sol.status == "optimal"
    assert np.all(np.abs(sol.x - [0.3913, 0, 0.7391]) <= 1e-3), sol.x
    assert close(sol.zeta[2], 3.6413, 1e-3), sol.zeta
    assert close(sol.objective, -0.2935, 1e-3), sol.objective


# 5 --------------------------------------------------------------------------------

def test_criterion_5_qp_end_to_end(criterion):
    criterion(5, "QP on the reference reduced model, 16 starts, and grid cross-check")
    with Timer(60.0):
        r = load_reduced(fixture_path("ex2_reference.json"))
        sol = solve_qp(penalty_remodel(r), starts=16, seed=0)
        grid = grid_search(r, GridSpec(0.05))
    problems = []
    if not close(sol.objective, -1.2065, 1e-3):
        problems.append(f"solve_qp objective {sol.objective:.6f} at x={np.round(sol.x, 4).tolist()}")
    if grid.objective - (-1.2065) > 0.15:
        problems.append(f"grid point {np.round(grid.x, 4).tolist()} reaches {grid.objective:.6f}")
    assert not problems, "; ".join(problems) + " (target -1.2065)"


# 6 --------------------------------------------------------------------------------

def test_criterion_6_properties(criterion):
    criterion(6, "measure, consistency, containment, slack and LP-vs-grid properties")
    rng = np.random.default_rng(606)
    with Timer(120.0):
        # (a) nec <= pos and duality
        for _ in range(500):
            s = random_shape(rng, proper=bool(rng.integers(2)))
            A = random_interval_set(rng, s)
            nec, pos = nec_measure(s, A), pos_measure(s, A)
            assert nec <= pos, ("a", s, A)
            assert close(nec, 1 - pos_measure(s, A.complement()), 1e-15), ("a", s, A)
        # (b) consistency with the normalized-membership probability
        for _ in range(200):
            s = random_shape(rng, max_degree=4)
            A = random_interval_set(rng, s)
            pr = probability(s, A)
            assert nec_measure(s, A) - 1e-6 <= pr <= pos_measure(s, A) + 1e-6, ("b", s, A, pr)
        # (c) containment of the expected value
        for _ in range(500):
            s = random_shape(rng, max_degree=8, proper=bool(rng.integers(2)))
            ev = interval_expected_value(Coef("possibilistic", s))
            assert s.a <= ev.lo <= s.b and s.c <= ev.hi <= s.d, ("c", s, ev)
        # (d) and (e) on 50 random three-variable LPs, plus the bundled models
        solved = []
        for _ in range(50):
            n, m = 3, int(rng.integers(1, 4))
            r = make(np.zeros((n, n)), rng.uniform(-3, 3, n), rng.uniform(-4, 4, (m, n)),
                     rng.uniform(-4, 4, m), np.zeros(n), rng.uniform(0.5, 2, n),
                     rng.uniform(0.2, 3, m), rng.uniform(0.2, 3, m))
            sol = solve_lp(penalty_remodel(r))
            grid = grid_search(r, GridSpec(0.05))
            gap = grid_gap_bound(r, grid.steps)
            assert grid.objective <= sol.objective + 1e-9 and sol.objective - grid.objective <= gap, ("e", r)
            solved.append((r, sol))
        for name, method in (("ex1_reference.json", solve_lp), ("ex2_reference.json", solve_qp)):
            r = load_reduced(fixture_path(name))
            solved.append((r, method(penalty_remodel(r))))
        for r, sol in solved:
            g = r.residuals(sol.x)
            assert np.abs(sol.psi - np.maximum(g, 0)).max() <= 1e-6, ("d", r.name)
            assert np.abs(sol.zeta - np.maximum(-g, 0)).max() <= 1e-6, ("d", r.name)


# 7 --------------------------------------------------------------------------------

def _random_problem(rng):
    names = [f"v{i}" for i in range(int(rng.integers(1, 5)))]
    variables = tuple(
        Variable(v, lo, math.inf if rng.random() < 0.2 else lo + rng.uniform(0, 50))
        for v, lo in ((v, float(rng.uniform(0, 10))) for v in names)
    )

    def coef():
        neg = bool(rng.integers(2))
        kind = int(rng.integers(4))
        vals = np.sort(rng.uniform(-100, 100, 4)).tolist()
        if kind == 0:
            return Coef.constant(vals[0], neg)
        if kind == 1:
            return Coef.interval(vals[0], vals[3], neg)
        n = int(rng.integers(1, 7))
        return Coef.pos(*vals, n, neg) if kind == 2 else Coef.prob(*vals, n, neg)

    def terms(quadratic):
        monos = [()] + [(v,) for v in names]
        if quadratic:
            monos += [(u, v) for u in names for v in names]
        return tuple(Term(coef(), monos[int(rng.integers(len(monos)))]) for _ in range(int(rng.integers(1, 6))))

    constraints = tuple(Constraint(f"c{i}", terms(False), float(rng.uniform(0.1, 9)), float(rng.uniform(0.1, 9)))
                        for i in range(int(rng.integers(0, 4))))
    feats = list(rng.permutation(["midpoint", "width", "left", "right"])[: int(rng.integers(1, 5))])
    if rng.random() < 0.5:
        weights = "equal"
    else:
        w = rng.uniform(0.1, 1, len(feats))
        w = (w / w.sum()).tolist()
        weights = tuple(w[:-1] + [1.0 - sum(w[:-1])])
    cfg = ReductionConfig(tuple(str(f) for f in feats), weights, bool(rng.integers(2)))
    return UncertainProblem(f"p{int(rng.integers(1000))}", variables, terms(True), constraints, cfg)


def test_criterion_7_parser(criterion):
    criterion(7, "parser round trip on 200 problems and fixture ASTs")
    rng = np.random.default_rng(7)
    for _ in range(200):
        p = _random_problem(rng)
        assert parse_problem(serialize_problem(p)) == p
    assert load_problem(fixture_path("ex1.ivpm")) == EX1_AST
    ex2 = load_problem(fixture_path("ex2.ivpm"))
    squared = tuple(Term(t.coef, t.mono * 2) if t.mono in (("x1",), ("x2",)) else t for t in EX1_AST.objective)
    assert ex2 == UncertainProblem("ex2", EX1_AST.variables, squared, EX1_AST.constraints, EX1_AST.config)


if __name__ == "__main__":
    import sys

    class _Recorder:
        def __call__(self, number, title):
            self.number, self.title = number, title

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            rec = _Recorder()
            try:
                fn(rec)
                print(f"criterion {rec.number}: PASS  {rec.title}")
            except AssertionError as exc:
                failures += 1
                print(f"criterion {rec.number}: FAIL  {rec.title}  -- {str(exc).splitlines()[0]}")
    sys.exit(1 if failures else 0)
