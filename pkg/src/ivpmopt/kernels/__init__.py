"""Hot inner loops: grid evaluation, exact line search, coordinate ascent.

The numba backend is used when numba imports cleanly, unless the environment
variable ``IVPMOPT_DISABLE_NUMBA`` is set to a truthy value, in which case the
vectorized numpy backend is used.  Both backends honour the same contracts and
tie-breaking rules.
"""
import os

import numpy as np

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

STATUS_CONVERGED = 0
STATUS_ITERATION_LIMIT = 1
STATUS_UNBOUNDED = 2


def numba_disabled() -> bool:
    return os.environ.get("IVPMOPT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


def get_backend(name=None):
    """Return the backend module by name (``"numba"`` / ``"numpy"``) or the default one."""
    if name is None:
        name = "numpy" if numba_disabled() or numba_backend is None else "numba"
    if name == "numba":
        if numba_backend is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return numba_backend
    if name == "numpy":
        return numpy_backend
    raise ValueError(f"unknown kernel backend {name!r}")


def backend_name() -> str:
    return "numba" if get_backend() is numba_backend else "numpy"


def as_arrays(r):
    """Kernel argument tuple ``(Q, b, k, A, c, e, s, lo, hi)`` from a reduced problem."""
    f = np.ascontiguousarray
    return (
        f(r.quadratic, dtype=float), f(r.linear, dtype=float), float(r.constant),
        f(r.A, dtype=float).reshape(r.m, r.n), f(r.c, dtype=float),
        f(r.excess, dtype=float), f(r.shortage, dtype=float),
        f(r.lower, dtype=float), f(r.upper, dtype=float),
    )
