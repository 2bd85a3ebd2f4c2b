"""Dense two-phase tableau simplex.

Entering variable: largest reduced cost (Dantzig); after ``bland_after`` pivots
the rule switches to Bland's smallest-index rule to rule out cycling.  Ratio
ties are broken by the smallest basic-variable index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7


class SimplexInfeasible(RuntimeError):
    pass


@dataclass
class SimplexResult:
    status: str  # optimal | unbounded | iteration-limit
    x: np.ndarray
    objective: float
    iterations: int


class _Tableau:
    def __init__(self, T: np.ndarray, basis: np.ndarray, max_iter: int, bland_after: int):
        self.T = T
        self.basis = basis
        self.max_iter = max_iter
        self.bland_after = bland_after
        self.iterations = 0

    def pivot(self, row: int, col: int):
        T = self.T
        T[row] /= T[row, col]
        piv = T[row].copy()
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, piv)
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col

    def run(self, allowed: np.ndarray) -> str:
        """Maximize the objective held in the last row (stored as -c)."""
        T = self.T
        m = T.shape[0] - 1
        while True:
            if self.iterations >= self.max_iter:
                return "iteration-limit"
            obj = T[-1, :-1]
            candidates = np.flatnonzero((obj < -PIVOT_TOL) & allowed)
            if candidates.size == 0:
                return "optimal"
            if self.iterations >= self.bland_after:
                col = int(candidates[0])
            else:
                col = int(candidates[np.argmin(obj[candidates])])
            column = T[:m, col]
            pos = column > PIVOT_TOL
            if not pos.any():
                return "unbounded"
            ratios = np.full(m, np.inf)
            ratios[pos] = T[:m, -1][pos] / column[pos]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + PIVOT_TOL * max(1.0, abs(best)))
            row = int(ties[np.argmin(self.basis[ties])])
            self.pivot(row, col)
            self.iterations += 1


def simplex_max(c, A_ub, b_ub, max_iter: int = 10_000, bland_after: int = 2_000) -> SimplexResult:
    """Maximize ``c @ x`` subject to ``A_ub @ x <= b_ub`` and ``x >= 0``.

    Raises :class:`SimplexInfeasible` when phase one cannot reach feasibility.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A_ub, dtype=float).reshape(-1, c.size)
    b = np.asarray(b_ub, dtype=float).reshape(-1)
    m, n = A.shape

    neg = b < 0
    n_art = int(neg.sum())
    # columns: x (n) | slack/surplus (m) | artificial (n_art) | rhs
    width = n + m + n_art + 1
    T = np.zeros((m + 1, width))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[:m][neg] *= -1.0  # flipped rows: surplus coefficient becomes -1
    basis = np.arange(n, n + m)
    art_cols = np.arange(n + m, n + m + n_art)
    for k, row in enumerate(np.flatnonzero(neg)):
        T[row, art_cols[k]] = 1.0
        basis[row] = art_cols[k]

    tab = _Tableau(T, basis, max_iter, bland_after)
    allowed = np.ones(width - 1, dtype=bool)

    if n_art:
        # phase one: maximize -sum(artificials)
        T[-1, :] = 0.0
        T[-1, art_cols] = 1.0
        for row in np.flatnonzero(neg):
            T[-1] -= T[row]
        status = tab.run(allowed)
        if status == "iteration-limit":
            return SimplexResult(status, np.full(n, np.nan), np.nan, tab.iterations)
        if -T[-1, -1] > FEAS_TOL * max(1.0, np.abs(b).max()):
            raise SimplexInfeasible(f"phase one ended with infeasibility {-T[-1, -1]:.3g}")
        # drive artificial variables out of the basis where possible
        for row in range(m):
            if tab.basis[row] in art_cols:
                nonart = np.flatnonzero(np.abs(T[row, :n + m]) > PIVOT_TOL)
                if nonart.size:
                    tab.pivot(row, int(nonart[0]))
        allowed[art_cols] = False

    # phase two objective row: -c priced out against the current basis
    T[-1, :] = 0.0
    T[-1, :n] = -c
    for row in range(m):
        col = tab.basis[row]
        if T[-1, col] != 0.0:
            T[-1] -= T[-1, col] * T[row]
    status = tab.run(allowed)

    x_full = np.zeros(width - 1)
    x_full[tab.basis] = T[:m, -1]
    x = x_full[:n]
    return SimplexResult(status, x, float(c @ x), tab.iterations)
