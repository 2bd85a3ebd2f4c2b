"""Vectorized numpy kernels; same contracts as the numba ones."""
import numpy as np

STATUS_CONVERGED = 0
STATUS_ITERATION_LIMIT = 1
STATUS_UNBOUNDED = 2

_CHUNK = 1 << 18


def _values(X, Q, b, k, A, c, e, s):
    """Penalized objective for each row of ``X``."""
    val = np.einsum("pi,ij,pj->p", X, Q, X) + X @ b + k
    G = X @ A.T + c
    val -= np.maximum(G, 0.0) @ e
    val -= np.maximum(-G, 0.0) @ s
    return val


def penalized_value(x, Q, b, k, A, c, e, s):
    return float(_values(x[None, :], Q, b, k, A, c, e, s)[0])


def grid_maximize(axes, sizes, Q, b, k, A, c, e, s):
    sizes = tuple(int(v) for v in sizes)
    total = int(np.prod(sizes))
    cols = [axes[i, :sizes[i]] for i in range(len(sizes))]
    best, best_flat = -np.inf, -1
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        idx = np.unravel_index(flat, sizes)
        X = np.stack([col[ix] for col, ix in zip(cols, idx)], axis=1)
        v = _values(X, Q, b, k, A, c, e, s)
        j = int(np.argmax(v))
        if v[j] > best:
            best, best_flat = float(v[j]), int(flat[j])
    return best_flat, best, total


def _pen(G, e, s):
    return np.maximum(G, 0.0) @ e + np.maximum(-G, 0.0) @ s


def line_maximize(x, d, Q, b, A, c, e, s, lo, hi):
    with np.errstate(divide="ignore", invalid="ignore"):
        up = np.where(d > 0, (hi - x) / d, np.where(d < 0, (lo - x) / d, np.inf))
        dn = np.where(d > 0, (lo - x) / d, np.where(d < 0, (hi - x) / d, -np.inf))
    tmax = max(float(np.min(up)), 0.0)
    tmin = min(float(np.max(dn)), 0.0)
    alpha = float(d @ Q @ d)
    beta = float(((Q + Q.T) @ x + b) @ d)
    gx = A @ x + c
    ad = A @ d
    nz = ad != 0
    bps = -gx[nz] / ad[nz]
    bps = bps[(bps > tmin) & (bps < tmax)]
    pts = np.sort(np.concatenate([[tmin], bps, [tmax]]))

    def slope_at(t):
        g = gx + t * ad
        return float(np.where(g > 0, e * ad, np.where(g < 0, -s * ad, 0.0)).sum())

    if np.isinf(tmax):
        probe = pts[-2] + 1.0 if np.isfinite(pts[-2]) else 1.0
        if alpha > 0 or (alpha == 0 and beta - slope_at(probe) > 0):
            return np.inf, np.inf, True
    if np.isinf(tmin):
        probe = pts[1] - 1.0 if np.isfinite(pts[1]) else -1.0
        if alpha > 0 or (alpha == 0 and beta - slope_at(probe) < 0):
            return -np.inf, np.inf, True

    cand = [pts[np.isfinite(pts)]]
    if alpha < 0:
        t0, t1 = pts[:-1], pts[1:]
        mid = np.where(np.isfinite(t0) & np.isfinite(t1), 0.5 * (t0 + t1),
                       np.where(np.isfinite(t0), t0 + 1.0, np.where(np.isfinite(t1), t1 - 1.0, 0.0)))
        G = gx[None, :] + mid[:, None] * ad[None, :]
        sig = np.where(G > 0, e * ad, np.where(G < 0, -s * ad, 0.0)).sum(axis=1)
        tstar = np.clip((sig - beta) / (2.0 * alpha), t0, t1)
        cand.append(tstar[np.isfinite(tstar)])
    ts = np.concatenate(cand)
    base = _pen(gx, e, s)
    G = gx[None, :] + ts[:, None] * ad[None, :]
    gains = alpha * ts * ts + beta * ts - (np.maximum(G, 0.0) @ e + np.maximum(-G, 0.0) @ s - base)
    # prefer staying put, then the shortest step among ties
    ts = np.concatenate([[0.0], ts])
    gains = np.concatenate([[0.0], gains])
    order = np.lexsort((np.abs(ts), -gains))
    j = order[0]
    return float(ts[j]), float(gains[j]), False


def coordinate_search(x0, Q, b, k, A, c, e, s, lo, hi, max_steps, tol):
    n = x0.shape[0]
    x = x0.copy()
    d = np.zeros(n)
    steps = 0
    while True:
        moved = False
        for i in range(n):
            d[i] = 1.0
            t, gain, unbounded = line_maximize(x, d, Q, b, A, c, e, s, lo, hi)
            d[i] = 0.0
            if unbounded:
                return x, steps, STATUS_UNBOUNDED
            scale = 1.0 + abs(penalized_value(x, Q, b, k, A, c, e, s))
            if gain > tol * scale and t != 0.0:
                x[i] = min(max(x[i] + t, lo[i]), hi[i])
                steps += 1
                moved = True
                if steps >= max_steps:
                    return x, steps, STATUS_ITERATION_LIMIT
        if not moved:
            return x, steps, STATUS_CONVERGED
