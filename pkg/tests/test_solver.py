import numpy as np
import pytest

from ivpmopt.oracle import GridSpec, check_solution, grid_gap_bound, grid_search
from ivpmopt.reduction import ReducedProblem, evaluate_exact_penalty, penalty_remodel
from ivpmopt.solver import (
    SimplexInfeasible, coordinate_stationarity, simplex_max, solve, solve_lp, solve_qp, start_points,
)

REPORTED_X = np.array([9 / 23, 0.0, 17 / 23])


def make(Q, b, A, c, lo, hi, e=None, s=None, k=0.0):
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    A = np.asarray(A, dtype=float).reshape(-1, Q.shape[0])
    m = A.shape[0]
    return ReducedProblem("t", tuple(f"x{i + 1}" for i in range(Q.shape[0])), lo, hi, Q, b, k,
                          tuple(f"g{i + 1}" for i in range(m)), A, c,
                          np.ones(m) if e is None else e, np.ones(m) if s is None else s)


def random_lp(rng, n=3, m=None):
    m = int(rng.integers(1, 4)) if m is None else m
    return make(np.zeros((n, n)), rng.uniform(-3, 3, n), rng.uniform(-4, 4, (m, n)),
                rng.uniform(-4, 4, m), np.zeros(n), rng.uniform(0.5, 2, n),
                rng.uniform(0.2, 3, m), rng.uniform(0.2, 3, m))


def assert_slacks(r, sol):
    g = r.residuals(sol.x)
    np.testing.assert_allclose(sol.psi, np.maximum(g, 0), atol=1e-6)
    np.testing.assert_allclose(sol.zeta, np.maximum(-g, 0), atol=1e-6)


# ---- simplex core ---------------------------------------------------------------

def test_simplex_trivial():
    res = simplex_max([1.0], [[1.0]], [1.0])
    assert res.status == "optimal" and res.x[0] == pytest.approx(1) and res.objective == pytest.approx(1)


def test_simplex_textbook():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
    res = simplex_max([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.objective == pytest.approx(36) and res.x == pytest.approx([2, 6])


def test_simplex_phase_one():
    # x + y >= 2 written as -x - y <= -2; minimize x + 2y
    res = simplex_max([-1, -2], [[-1, -1], [1, 0]], [-2, 3])
    assert res.status == "optimal" and res.x == pytest.approx([2, 0]) and res.objective == pytest.approx(-2)


def test_simplex_infeasible_and_unbounded():
    with pytest.raises(SimplexInfeasible):
        simplex_max([1, 1], [[1, 1], [-1, -1]], [1, -2])
    assert simplex_max([1, 0], [[0, 1]], [1]).status == "unbounded"


def test_simplex_iteration_limit():
    assert simplex_max([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], max_iter=1).status == "iteration-limit"


def test_simplex_degenerate_with_bland():
    # classic cycling example under Dantzig pricing without an anti-cycling rule
    c = [10, -57, -9, -24]
    A = [[0.5, -5.5, -2.5, 9], [0.5, -1.5, -0.5, 1], [1, 0, 0, 0]]
    for bland_after in (0, 2000):
        res = simplex_max(c, A, [0, 0, 1], bland_after=bland_after)
        assert res.status == "optimal" and res.objective == pytest.approx(1)


# ---- LP via the remodel ----------------------------------------------------------

def test_solve_lp_unconstrained_box():
    r = make([[0.0]], [1.0], np.zeros((0, 1)), [], [0], [1])
    sol = solve_lp(penalty_remodel(r))
    assert sol.status == "optimal" and sol.x[0] == 1 and sol.objective == 1


def test_solve_lp_printed_model(ex1_printed):
    sol = solve_lp(penalty_remodel(ex1_printed))
    assert sol.status == "optimal" and sol.method == "simplex"
    assert sol.x == pytest.approx(REPORTED_X, abs=1e-9)
    assert sol.zeta == pytest.approx([0, 0, 3.641304347826087], abs=1e-9)
    assert sol.psi == pytest.approx([0, 0, 0], abs=1e-12)
    assert sol.objective == pytest.approx(-27 / 92, abs=1e-12)
    assert check_solution(ex1_printed, sol).passed


def test_solve_lp_rejects_quadratic(ex2_printed):
    with pytest.raises(ValueError):
        solve_lp(penalty_remodel(ex2_printed))


def test_solve_lp_unbounded():
    r = make([[0.0, 0.0], [0.0, 0.0]], [1.0, 0.0], [[0.0, 1.0]], [-1.0], [0, 0], [np.inf, 2])
    assert solve_lp(penalty_remodel(r)).status == "unbounded"


def test_solve_lp_nonzero_lower_bounds():
    r = make([[0.0, 0.0], [0.0, 0.0]], [-1.0, -1.0], [[1.0, 1.0]], [-3.0], [1, 0.5], [2, 2], [5], [5])
    sol = solve_lp(penalty_remodel(r))
    assert sol.objective == pytest.approx(-3) and sol.x.sum() == pytest.approx(3)
    assert np.all(sol.x >= [1, 0.5])


def test_lp_beats_random_probes(ex1_printed):
    sol = solve_lp(penalty_remodel(ex1_printed))
    rng = np.random.default_rng(0)
    probes = rng.uniform(ex1_printed.lower, ex1_printed.upper, (1000, 3))
    assert max(evaluate_exact_penalty(ex1_printed, x) for x in probes) <= sol.objective + 1e-12


def test_lp_permutation_invariance():
    rng = np.random.default_rng(17)
    for _ in range(20):
        r = random_lp(rng, n=3, m=3)
        base = solve_lp(penalty_remodel(r)).objective
        rows, cols = rng.permutation(3), rng.permutation(3)
        q = make(np.zeros((3, 3)), r.linear[cols], r.A[rows][:, cols], r.c[rows], r.lower[cols],
                 r.upper[cols], r.excess[rows], r.shortage[rows])
        assert solve_lp(penalty_remodel(q)).objective == pytest.approx(base, abs=1e-9)


def test_lp_matches_grid_on_random_instances():
    rng = np.random.default_rng(2)
    for _ in range(50):
        r = random_lp(rng)
        sol = solve_lp(penalty_remodel(r))
        assert sol.status == "optimal"
        assert_slacks(r, sol)
        assert check_solution(r, sol).passed
        grid = grid_search(r, GridSpec(0.05))
        assert grid.objective <= sol.objective + 1e-9
        assert sol.objective - grid.objective <= grid_gap_bound(r, grid.steps) + 1e-9


def test_exact_penalty_recovers_feasible_point():
    rng = np.random.default_rng(9)
    for _ in range(20):
        x_feas = rng.uniform(0.2, 0.8, 3)
        A = rng.uniform(-2, 2, (2, 3))
        r = make(np.zeros((3, 3)), rng.uniform(-1, 1, 3), A, -A @ x_feas, np.zeros(3), np.ones(3),
                 np.full(2, 50.0), np.full(2, 50.0))
        sol = solve_lp(penalty_remodel(r))
        assert np.abs(r.residuals(sol.x)).max() <= 1e-6


# ---- QP local search ---------------------------------------------------------------

def test_start_points_deterministic():
    lo, hi = np.zeros(3), np.array([3.0, 2.0, 2.0])
    pts = start_points(lo, hi, 16, seed=0)
    assert pts.shape == (16, 3)
    np.testing.assert_array_equal(pts[0], lo)
    np.testing.assert_array_equal(pts[7], hi)
    np.testing.assert_array_equal(pts, start_points(lo, hi, 16, seed=0))
    assert not np.array_equal(pts[8:], start_points(lo, hi, 16, seed=1)[8:])
    assert np.all(pts >= lo) and np.all(pts <= hi)


def test_concave_interior_optimum():
    # maximize -(x - 1)^2 on [0, 3]
    r = make([[-1.0]], [2.0], np.zeros((0, 1)), [], [0], [3], k=-1.0)
    sol = solve_qp(penalty_remodel(r), starts=4)
    assert sol.status == "local-optimal"
    assert sol.x[0] == pytest.approx(1, abs=1e-9) and sol.objective == pytest.approx(0, abs=1e-15)


def test_qp_from_the_reported_point(ex2_printed):
    """The reported point of the quadratic example is a strict local maximum."""
    sol = solve_qp(penalty_remodel(ex2_printed), points=[REPORTED_X + 0.01])
    assert sol.x == pytest.approx(REPORTED_X, abs=1e-9)
    assert sol.objective == pytest.approx(-1.2065217391304348, abs=1e-9)
    assert coordinate_stationarity(ex2_printed, sol.x) <= 1e-9


def test_qp_printed_model_best_of_16(ex2_printed):
    # the best of 16 starts is a better local maximum than the reported one (see README)
    sol = solve_qp(penalty_remodel(ex2_printed), starts=16, seed=0)
    assert sol.objective == pytest.approx(-0.375, abs=1e-9)
    assert sol.x == pytest.approx([1.5, 0, 0], abs=1e-9)
    assert any(abs(v + 1.2065217391304348) < 1e-6 for v in sol.diagnostics["start_objectives"])
    assert sol.diagnostics["stationarity"] <= 1e-6
    assert check_solution(ex2_printed, sol).passed


def test_qp_deterministic(ex2_printed):
    pp = penalty_remodel(ex2_printed)
    a, b = solve_qp(pp, starts=12, seed=3), solve_qp(pp, starts=12, seed=3)
    assert a.to_dict() == b.to_dict()


def test_qp_unbounded():
    r = make([[1.0]], [0.0], np.zeros((0, 1)), [], [0], [np.inf])
    assert solve_qp(penalty_remodel(r), starts=2).status == "unbounded"


def test_diagonal_qp_battery():
    rng = np.random.default_rng(12)
    for _ in range(25):
        n, m = 3, int(rng.integers(1, 3))
        r = make(np.diag(rng.uniform(-3, 3, n)), rng.uniform(-3, 3, n), rng.uniform(-3, 3, (m, n)),
                 rng.uniform(-3, 3, m), np.zeros(n), rng.uniform(0.5, 2, n),
                 rng.uniform(0.2, 2, m), rng.uniform(0.2, 2, m))
        sol = solve_qp(penalty_remodel(r), starts=16, seed=0)
        assert_slacks(r, sol)
        assert check_solution(r, sol).passed
        assert sol.diagnostics["stationarity"] <= 1e-6
        grid = grid_search(r, GridSpec(0.05))
        gap = grid_gap_bound(r, grid.steps)
        assert sol.objective >= grid.objective - 2 * gap
        assert grid.objective <= sol.objective + 1e-9 or grid.objective - sol.objective <= 2 * gap


def test_solve_dispatch(ex1_printed, ex2_printed):
    assert solve(ex1_printed).method == "simplex"
    assert solve(ex2_printed, starts=4).method == "local"
    g = solve(ex1_printed, method="grid", grid_res=0.1)
    assert g.method == "grid" and g.status == "optimal"
    assert check_solution(ex1_printed, g).passed
    with pytest.raises(ValueError):
        solve(ex1_printed, method="newton")


def test_solution_json_schema(ex1_printed):
    d = solve(ex1_printed).to_dict()
    assert set(d) == {"status", "x", "psi", "zeta", "objective", "method", "iterations"}
    assert list(d["x"]) == ["x1", "x2", "x3"]
    assert isinstance(d["iterations"], int) and len(d["psi"]) == len(d["zeta"]) == 3
