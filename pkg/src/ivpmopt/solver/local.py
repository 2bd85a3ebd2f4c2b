"""Multi-start projected search on the exact-penalty objective.

Each start runs cyclic exact coordinate ascent.  Once no coordinate improves,
the search also tries exact line moves along the manifold of active kinks
(``g_i = 0``) and active bounds, and along the edges obtained by releasing one
active row at a time; coordinate ascent alone stalls on such ridges.
"""
from __future__ import annotations

import itertools

import numpy as np
from scipy.stats import qmc

from .. import kernels
from ..reduction import PenaltyProblem, ReducedProblem, evaluate_exact_penalty, exact_penalty_terms
from .solution import Solution

KINK_TOL = 1e-9
_MOVE_TOL = 1e-13


def start_points(lower, upper, starts: int, seed: int = 0) -> np.ndarray:
    """Box corners (in binary order, lower corner first) then scrambled Halton points."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    n = lower.size
    hi = np.where(np.isfinite(upper), upper, lower + 10.0)
    n_corners = min(2 ** min(n, 30), max(1, starts // 2))
    pts = []
    for bits in itertools.islice(itertools.product((0, 1), repeat=n), n_corners):
        pts.append(np.where(np.array(bits, dtype=bool), hi, lower))
    rest = starts - len(pts)
    if rest > 0:
        sampler = qmc.Halton(d=n, scramble=True, seed=seed)
        u = sampler.random(rest)
        pts.extend(lower + u * (hi - lower))
    return np.array(pts[:starts], dtype=float).reshape(-1, n)


def _nullspace(M: np.ndarray, n: int) -> np.ndarray:
    if M.shape[0] == 0:
        return np.eye(n)
    _, sv, vt = np.linalg.svd(M)
    rank = int(np.sum(sv > 1e-10 * max(1.0, sv[0])))
    return vt[rank:]


def search_directions(r: ReducedProblem, x: np.ndarray) -> list[np.ndarray]:
    n = r.n
    g = r.residuals(x)
    scale = 1.0 + np.abs(r.c) + np.abs(r.A) @ np.abs(x)
    rows = [r.A[j] for j in np.flatnonzero(np.abs(g) <= KINK_TOL * scale)]
    eye = np.eye(n)
    at_bound = (x <= r.lower + 1e-12) | (x >= r.upper - 1e-12)
    rows += [eye[i] for i in np.flatnonzero(at_bound)]
    M = np.array(rows).reshape(len(rows), n)
    dirs = list(_nullspace(M, n))
    if 0 < len(rows) <= 2 * n + 4:
        for k in range(len(rows)):
            dirs.extend(_nullspace(np.delete(M, k, axis=0), n))
    out = []
    for d in dirs:
        norm = np.linalg.norm(d)
        if norm > 0 and np.count_nonzero(np.abs(d) > 1e-12) > 1:
            out.append(d / norm)
    return out


def _local_search(r, arrays, x0, backend, max_steps, tol):
    Q, b, k, A, c, e, s, lo, hi = arrays
    x, steps, status = backend.coordinate_search(x0, Q, b, k, A, c, e, s, lo, hi, max_steps, tol)
    while status == kernels.STATUS_CONVERGED:
        moved = False
        for d in search_directions(r, x):
            t, gain, unbounded = backend.line_maximize(x, d, Q, b, A, c, e, s, lo, hi)
            if unbounded:
                return x, steps, kernels.STATUS_UNBOUNDED
            value = backend.penalized_value(x, Q, b, k, A, c, e, s)
            if gain > tol * (1.0 + abs(value)) and t != 0.0:
                x = np.clip(x + t * d, lo, hi)
                steps += 1
                moved = True
                break
        if not moved:
            break
        if steps >= max_steps:
            return x, steps, kernels.STATUS_ITERATION_LIMIT
        x, more, status = backend.coordinate_search(x, Q, b, k, A, c, e, s, lo, hi,
                                                    max_steps - steps, tol)
        steps += more
    return x, steps, status


def coordinate_stationarity(r: ReducedProblem, x, kink_tol: float = 1e-7,
                            bound_tol: float = 1e-9) -> float:
    """Largest positive one-sided coordinate derivative of the exact-penalty objective.

    Zero means no single coordinate move (respecting the box) improves ``h`` to
    first order.
    """
    x = np.asarray(x, dtype=float)
    grad = (r.quadratic + r.quadratic.T) @ x + r.linear
    g = r.residuals(x)
    worst = 0.0
    for i in range(r.n):
        a = r.A[:, i]
        # penalty rate when moving +e_i and -e_i
        up = np.where(g > kink_tol, r.excess * a,
                      np.where(g < -kink_tol, -r.shortage * a,
                               np.where(a > 0, r.excess * a, -r.shortage * a)))
        down = np.where(g > kink_tol, -r.excess * a,
                        np.where(g < -kink_tol, r.shortage * a,
                                 np.where(a < 0, -r.excess * a, r.shortage * a)))
        room = bound_tol * (1.0 + abs(x[i]))
        if x[i] < r.upper[i] - room:
            worst = max(worst, grad[i] - up.sum())
        if x[i] > r.lower[i] + room:
            worst = max(worst, -grad[i] - down.sum())
    return float(worst)


def solve_qp(p: PenaltyProblem, starts: int = 16, seed: int = 0, max_steps: int = 5_000,
             tol: float = _MOVE_TOL, backend=None, points=None) -> Solution:
    """Best local optimum of the exact-penalty objective over ``starts`` searches.

    ``psi``/``zeta`` are eliminated analytically during the search and
    recovered as ``max(0, +-g(x))``.  Deterministic for a fixed seed.
    ``points`` replaces the generated starts with explicit ones.
    """
    if points is not None:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        starts = len(points)
    if starts < 1:
        raise ValueError("starts must be >= 1")
    if isinstance(backend, str) or backend is None:
        backend = kernels.get_backend(backend)
    r = p.reduced
    arrays = kernels.as_arrays(r)
    results = []
    total_steps = 0
    if points is None:
        points = start_points(r.lower, r.upper, starts, seed)
    for x0 in np.clip(points, r.lower, r.upper):
        x, steps, status = _local_search(r, arrays, np.ascontiguousarray(x0), backend, max_steps, tol)
        total_steps += steps
        value = evaluate_exact_penalty(r, x)
        results.append((value, x, status, steps))

    unbounded = [res for res in results if res[2] == kernels.STATUS_UNBOUNDED]
    if unbounded:
        value, x, _, _ = unbounded[0]
        status_text = "unbounded"
    else:
        value, x, status, _ = min(results, key=lambda res: (-float(f"{res[0]:.12g}"), tuple(res[1])))
        status_text = "local-optimal" if status == kernels.STATUS_CONVERGED else "iteration-limit"
    psi, zeta = exact_penalty_terms(r, x)
    return Solution(
        status=status_text,
        variables=r.variables,
        x=x,
        psi=psi,
        zeta=zeta,
        objective=value,
        iterations=total_steps,
        method="local",
        diagnostics={
            "starts": starts,
            "seed": seed,
            "backend": "numba" if backend is kernels.numba_backend else "numpy",
            "stationarity": coordinate_stationarity(r, x),
            "start_objectives": [float(res[0]) for res in results],
        },
    )
