from __future__ import annotations

import numpy as np

from ..reduction import PenaltyProblem, exact_penalty_terms
from .simplex import simplex_max
from .solution import Solution


def solve_lp(p: PenaltyProblem, max_iter: int = 10_000, bland_after: int = 2_000) -> Solution:
    """Solve a linear remodel with the two-phase simplex.

    Variable bounds are shifted to ``z >= 0`` and finite upper bounds become
    explicit rows.
    """
    if np.any(p.H != 0):
        raise ValueError("solve_lp needs a linear objective; use solve_qp for quadratic terms")
    lo, hi = p.lower, p.upper
    finite = np.flatnonzero(np.isfinite(hi))
    size = lo.size
    bound_rows = np.zeros((finite.size, size))
    bound_rows[np.arange(finite.size), finite] = 1.0
    A_ub = np.vstack([p.G, bound_rows])
    b_ub = np.concatenate([p.h - p.G @ lo, hi[finite] - lo[finite]])
    res = simplex_max(p.w, A_ub, b_ub, max_iter=max_iter, bland_after=bland_after)

    r = p.reduced
    if res.status == "iteration-limit":
        x = np.clip(r.lower.copy(), r.lower, r.upper)
        psi, zeta = exact_penalty_terms(r, x)
        z = np.concatenate([x, psi, zeta])
    else:
        z = np.clip(lo + res.x, lo, hi)
    x, psi, zeta = p.split(z)
    return Solution(
        status=res.status,
        variables=r.variables,
        x=x,
        psi=psi,
        zeta=zeta,
        objective=p.objective_value(z),
        iterations=res.iterations,
        method="simplex",
    )
