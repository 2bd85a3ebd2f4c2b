"""Loop kernels compiled with numba."""
import numpy as np
from numba import njit

STATUS_CONVERGED = 0
STATUS_ITERATION_LIMIT = 1
STATUS_UNBOUNDED = 2


@njit(cache=True)
def penalized_value(x, Q, b, k, A, c, e, s):
    n = x.shape[0]
    val = k
    for i in range(n):
        val += b[i] * x[i]
        for j in range(n):
            val += Q[i, j] * x[i] * x[j]
    for r in range(A.shape[0]):
        g = c[r]
        for i in range(n):
            g += A[r, i] * x[i]
        if g > 0.0:
            val -= e[r] * g
        else:
            val += s[r] * g
    return val


@njit(cache=True)
def grid_maximize(axes, sizes, Q, b, k, A, c, e, s):
    """Exhaustive max over the lattice ``axes[i, :sizes[i]]``; first maximizer in C order wins."""
    n = sizes.shape[0]
    m = A.shape[0]
    total = 1
    for i in range(n):
        total *= sizes[i]
    idx = np.zeros(n, dtype=np.int64)
    x = np.empty(n)
    for i in range(n):
        x[i] = axes[i, 0]
    best = -np.inf
    best_flat = -1
    g = np.empty(m)
    for flat in range(total):
        val = k
        for i in range(n):
            xi = x[i]
            val += b[i] * xi
            for j in range(n):
                val += Q[i, j] * xi * x[j]
        for r in range(m):
            gr = c[r]
            for i in range(n):
                gr += A[r, i] * x[i]
            if gr > 0.0:
                val -= e[r] * gr
            else:
                val += s[r] * gr
        if val > best:
            best = val
            best_flat = flat
        # odometer increment, last axis fastest
        i = n - 1
        while i >= 0:
            idx[i] += 1
            if idx[i] < sizes[i]:
                x[i] = axes[i, idx[i]]
                break
            idx[i] = 0
            x[i] = axes[i, 0]
            i -= 1
    return best_flat, best, total


@njit(cache=True)
def _pen_delta(gx, ad, t, e, s):
    out = 0.0
    for r in range(gx.shape[0]):
        g0 = gx[r]
        g1 = g0 + t * ad[r]
        p0 = e[r] * g0 if g0 > 0.0 else -s[r] * g0
        p1 = e[r] * g1 if g1 > 0.0 else -s[r] * g1
        out += p1 - p0
    return out


@njit(cache=True)
def _pen_slope(gx, ad, t, e, s):
    out = 0.0
    for r in range(gx.shape[0]):
        g = gx[r] + t * ad[r]
        if g > 0.0:
            out += e[r] * ad[r]
        elif g < 0.0:
            out -= s[r] * ad[r]
    return out


@njit(cache=True)
def line_maximize(x, d, Q, b, A, c, e, s, lo, hi):
    """Exact maximizer of ``t -> h(x + t d)`` over the box.

    Returns ``(t, gain, unbounded)`` where gain is ``h(x + t d) - h(x)``.
    """
    n = x.shape[0]
    m = A.shape[0]
    tmin = -np.inf
    tmax = np.inf
    for i in range(n):
        if d[i] > 0.0:
            tmax = min(tmax, (hi[i] - x[i]) / d[i])
            tmin = max(tmin, (lo[i] - x[i]) / d[i])
        elif d[i] < 0.0:
            tmax = min(tmax, (lo[i] - x[i]) / d[i])
            tmin = max(tmin, (hi[i] - x[i]) / d[i])
    if tmax < 0.0:
        tmax = 0.0
    if tmin > 0.0:
        tmin = 0.0
    alpha = 0.0
    beta = 0.0
    for i in range(n):
        grad = b[i]
        for j in range(n):
            alpha += d[i] * Q[i, j] * d[j]
            grad += (Q[i, j] + Q[j, i]) * x[j]
        beta += grad * d[i]
    gx = np.empty(m)
    ad = np.empty(m)
    for r in range(m):
        gr = c[r]
        ar = 0.0
        for i in range(n):
            gr += A[r, i] * x[i]
            ar += A[r, i] * d[i]
        gx[r] = gr
        ad[r] = ar
    # breakpoints strictly inside (tmin, tmax)
    bp = np.empty(m + 2)
    nb = 0
    bp[nb] = tmin
    nb += 1
    for r in range(m):
        if ad[r] != 0.0:
            t = -gx[r] / ad[r]
            if tmin < t < tmax:
                bp[nb] = t
                nb += 1
    bp[nb] = tmax
    nb += 1
    pts = np.sort(bp[:nb])
    # asymptotic checks on infinite ends
    if np.isinf(tmax):
        probe = pts[nb - 2] + 1.0 if nb >= 2 and np.isfinite(pts[nb - 2]) else 1.0
        slope = beta - _pen_slope(gx, ad, probe, e, s)
        if alpha > 0.0 or (alpha == 0.0 and slope > 0.0):
            return np.inf, np.inf, True
    if np.isinf(tmin):
        probe = pts[1] - 1.0 if nb >= 2 and np.isfinite(pts[1]) else -1.0
        slope = beta - _pen_slope(gx, ad, probe, e, s)
        if alpha > 0.0 or (alpha == 0.0 and slope < 0.0):
            return -np.inf, np.inf, True
    best_t = 0.0
    best_gain = 0.0
    for q in range(nb):
        t = pts[q]
        if np.isfinite(t):
            gain = alpha * t * t + beta * t - _pen_delta(gx, ad, t, e, s)
            if gain > best_gain or (gain == best_gain and abs(t) < abs(best_t)):
                best_gain = gain
                best_t = t
    if alpha < 0.0:
        for q in range(nb - 1):
            t0 = pts[q]
            t1 = pts[q + 1]
            if np.isfinite(t0) and np.isfinite(t1):
                mid = 0.5 * (t0 + t1)
            elif np.isfinite(t0):
                mid = t0 + 1.0
            elif np.isfinite(t1):
                mid = t1 - 1.0
            else:
                mid = 0.0
            sig = _pen_slope(gx, ad, mid, e, s)
            t = (sig - beta) / (2.0 * alpha)
            if t < t0:
                t = t0
            if t > t1:
                t = t1
            if np.isfinite(t):
                gain = alpha * t * t + beta * t - _pen_delta(gx, ad, t, e, s)
                if gain > best_gain or (gain == best_gain and abs(t) < abs(best_t)):
                    best_gain = gain
                    best_t = t
    return best_t, best_gain, False


@njit(cache=True)
def coordinate_search(x0, Q, b, k, A, c, e, s, lo, hi, max_steps, tol):
    """Cyclic exact coordinate ascent from ``x0``; returns ``(x, steps, status)``."""
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
