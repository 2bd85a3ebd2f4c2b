"""Optimizers for the penalty remodel."""
from __future__ import annotations

from typing import Optional

from ..reduction import PenaltyProblem, ReducedProblem, exact_penalty_terms, penalty_remodel
from .local import coordinate_stationarity, solve_qp, start_points
from .lp import solve_lp
from .simplex import SimplexInfeasible, simplex_max
from .solution import STATUSES, Solution

METHODS = ("simplex", "local", "grid")


def default_method(p) -> str:
    return "local" if p.is_quadratic else "simplex"


def solve(problem, method: Optional[str] = None, starts: int = 16, seed: int = 0,
          grid_res: float = 0.05) -> Solution:
    """Solve a reduced or remodeled problem with the requested (or default) method."""
    pp = problem if isinstance(problem, PenaltyProblem) else penalty_remodel(problem)
    method = method or default_method(pp)
    if method == "simplex":
        return solve_lp(pp)
    if method == "local":
        return solve_qp(pp, starts=starts, seed=seed)
    if method == "grid":
        from ..oracle import GridSpec, grid_search

        r: ReducedProblem = pp.reduced
        res = grid_search(r, GridSpec(grid_res))
        psi, zeta = exact_penalty_terms(r, res.x)
        return Solution("optimal", r.variables, res.x, psi, zeta, res.objective,
                        res.points, "grid", {"grid_res": grid_res})
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


__all__ = [
    "METHODS", "STATUSES", "SimplexInfeasible", "Solution", "coordinate_stationarity",
    "default_method", "simplex_max", "solve", "solve_lp", "solve_qp", "start_points",
]
