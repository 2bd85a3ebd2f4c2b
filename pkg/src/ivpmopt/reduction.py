"""From uncertain coefficients to a deterministic penalized program.

Pipeline: interval expected value per coefficient -> feature vector ``v`` ->
weighted collapse ``u`` -> penalty remodel with excess/shortage slacks.

Reduced objectives use ``f(x) = x' Q x + b' x + k`` where ``Q[i, j]`` is the
coefficient of the monomial ``x_i * x_j`` as written (not symmetrized).
Constraint ``i`` reads ``g_i(x) = A[i] @ x + c[i]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .interval import Interval, interval_features
from .model import ReductionConfig, Term, UncertainProblem
from .uncertainty import interval_expected_value


@dataclass(frozen=True)
class IntervalTerm:
    interval: Interval
    mono: tuple
    from_constant: bool  # every contributing source coefficient was a plain constant


@dataclass(frozen=True)
class IntervalConstraint:
    name: str
    terms: tuple[IntervalTerm, ...]
    excess: float
    shortage: float


@dataclass(frozen=True)
class IntervalProblem:
    name: str
    variables: tuple
    objective: tuple[IntervalTerm, ...]
    constraints: tuple[IntervalConstraint, ...]
    config: ReductionConfig


def _combine(terms: Sequence[Term]) -> tuple[IntervalTerm, ...]:
    acc: dict[tuple, list] = {}
    for t in terms:
        ev = interval_expected_value(t.coef)
        if t.mono in acc:
            slot = acc[t.mono]
            slot[0] = slot[0] + ev
            slot[1] = slot[1] and t.coef.is_constant
        else:
            acc[t.mono] = [ev, t.coef.is_constant]
    return tuple(IntervalTerm(iv, mono, const) for mono, (iv, const) in acc.items())


def expected_problem(p: UncertainProblem) -> IntervalProblem:
    """Replace every coefficient by its interval expected value, combining like terms."""
    return IntervalProblem(
        name=p.name,
        variables=p.variables,
        objective=_combine(p.objective),
        constraints=tuple(
            IntervalConstraint(c.name, _combine(c.terms), c.excess, c.shortage)
            for c in p.constraints
        ),
        config=p.config,
    )


def apply_v(x: Interval, features: Sequence[str]) -> tuple[float, ...]:
    if not features:
        raise ValueError("feature list must be non-empty")
    feats = interval_features(x)._asdict()
    return tuple(feats[f] for f in features)


def apply_u(v: Sequence[float], weights="equal", bypass: bool = False,
            original_was_constant: bool = False) -> float:
    """Collapse a feature vector to one real.

    With ``bypass`` and a coefficient that was a plain constant, the first
    component (the constant itself for a degenerate interval) is returned.
    """
    if weights == "equal":
        w = [1.0 / len(v)] * len(v)
    else:
        w = list(weights)
        if len(w) != len(v):
            raise ValueError(f"{len(w)} weights for a feature vector of length {len(v)}")
    if bypass and original_was_constant:
        return float(v[0])
    return float(sum(wi * vi for wi, vi in zip(w, v)))


def _collapse(term: IntervalTerm, cfg: ReductionConfig) -> float:
    if cfg.constant_bypass and term.from_constant:
        # degenerate interval: lo == hi is the constant
        return term.interval.lo
    return apply_u(apply_v(term.interval, cfg.features), cfg.weights)


@dataclass
class ReducedProblem:
    """Deterministic program: maximize f(x) subject to g(x) = 0 softened by penalties."""

    name: str
    variables: tuple[str, ...]
    lower: np.ndarray
    upper: np.ndarray
    quadratic: np.ndarray
    linear: np.ndarray
    constant: float
    constraint_names: tuple[str, ...]
    A: np.ndarray
    c: np.ndarray
    excess: np.ndarray
    shortage: np.ndarray

    def __post_init__(self):
        n = len(self.variables)
        self.variables = tuple(self.variables)
        self.constraint_names = tuple(self.constraint_names)
        m = len(self.constraint_names)
        self.lower = np.asarray(self.lower, dtype=float).reshape(n)
        self.upper = np.asarray(self.upper, dtype=float).reshape(n)
        self.quadratic = np.asarray(self.quadratic, dtype=float).reshape(n, n)
        self.linear = np.asarray(self.linear, dtype=float).reshape(n)
        self.constant = float(self.constant)
        self.A = np.asarray(self.A, dtype=float).reshape(m, n)
        self.c = np.asarray(self.c, dtype=float).reshape(m)
        self.excess = np.asarray(self.excess, dtype=float).reshape(m)
        self.shortage = np.asarray(self.shortage, dtype=float).reshape(m)
        for arr in (self.quadratic, self.linear, self.A, self.c, self.excess, self.shortage):
            if not np.all(np.isfinite(arr)):
                raise ValueError("reduced problem coefficients must be finite")
        if np.any(self.lower < 0) or np.any(self.upper < self.lower) or not np.all(np.isfinite(self.lower)):
            raise ValueError("bounds must satisfy 0 <= lower <= upper")
        if np.any(self.excess <= 0) or np.any(self.shortage <= 0):
            raise ValueError("penalty costs must be positive")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.constraint_names)

    @property
    def is_quadratic(self) -> bool:
        return bool(np.any(self.quadratic != 0))

    def objective_value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.quadratic @ x + self.linear @ x + self.constant)

    def residuals(self, x) -> np.ndarray:
        return self.A @ np.asarray(x, dtype=float) + self.c

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "variables": [
                {"name": v, "lower": _f(lo), "upper": None if math.isinf(hi) else _f(hi)}
                for v, lo, hi in zip(self.variables, self.lower, self.upper)
            ],
            "objective": {
                "quadratic": [[_f(q) for q in row] for row in self.quadratic],
                "linear": [_f(b) for b in self.linear],
                "constant": _f(self.constant),
            },
            "constraints": [
                {"name": nm, "coefficients": [_f(a) for a in row], "constant": _f(ci),
                 "excess": _f(e), "shortage": _f(s)}
                for nm, row, ci, e, s in zip(self.constraint_names, self.A, self.c,
                                            self.excess, self.shortage)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReducedProblem":
        """Inverse of :meth:`to_dict`; numbers may also be rational strings like ``"23/6"``."""
        variables = d["variables"]
        n = len(variables)
        obj = d.get("objective", {})
        quad = obj.get("quadratic")
        cons = d.get("constraints", [])
        return cls(
            name=d.get("name", "reduced"),
            variables=tuple(v["name"] for v in variables),
            lower=[_num(v.get("lower", 0.0)) for v in variables],
            upper=[math.inf if v.get("upper") is None else _num(v["upper"]) for v in variables],
            quadratic=np.zeros((n, n)) if quad is None else [[_num(q) for q in row] for row in quad],
            linear=[_num(b) for b in obj.get("linear", [0.0] * n)],
            constant=_num(obj.get("constant", 0.0)),
            constraint_names=tuple(c["name"] for c in cons),
            A=np.array([[_num(a) for a in c["coefficients"]] for c in cons]).reshape(len(cons), n),
            c=[_num(c.get("constant", 0.0)) for c in cons],
            excess=[_num(c.get("excess", 1.0)) for c in cons],
            shortage=[_num(c.get("shortage", 1.0)) for c in cons],
        )


def _f(x) -> float:
    x = float(x)
    return 0.0 if x == 0 else x


def _num(x) -> float:
    if isinstance(x, str):
        return float(Fraction(x.strip()))
    return float(x)


def reduce(p: UncertainProblem) -> ReducedProblem:
    """Expected values, then feature vector, then weighted collapse, per coefficient."""
    ip = expected_problem(p)
    cfg = ip.config
    names = p.variable_names
    index = {v: i for i, v in enumerate(names)}
    n, m = len(names), len(ip.constraints)
    Q = np.zeros((n, n))
    b = np.zeros(n)
    k = 0.0
    for t in ip.objective:
        val = _collapse(t, cfg)
        if len(t.mono) == 0:
            k += val
        elif len(t.mono) == 1:
            b[index[t.mono[0]]] += val
        else:
            Q[index[t.mono[0]], index[t.mono[1]]] += val
    A = np.zeros((m, n))
    c = np.zeros(m)
    for i, con in enumerate(ip.constraints):
        for t in con.terms:
            val = _collapse(t, cfg)
            if t.mono:
                A[i, index[t.mono[0]]] += val
            else:
                c[i] += val
    return ReducedProblem(
        name=p.name,
        variables=names,
        lower=[v.lower for v in p.variables],
        upper=[v.upper for v in p.variables],
        quadratic=Q,
        linear=b,
        constant=k,
        constraint_names=tuple(con.name for con in ip.constraints),
        A=A,
        c=c,
        excess=[con.excess for con in ip.constraints],
        shortage=[con.shortage for con in ip.constraints],
    )


@dataclass
class PenaltyProblem:
    """The remodel over ``z = (x, psi, zeta)``.

    maximize    z' H z + w' z + k
    subject to  G z <= h       (rows: g_i(x) - psi_i <= 0, then -g_i(x) - zeta_i <= 0)
                lower <= z <= upper
    """

    reduced: ReducedProblem
    H: np.ndarray
    w: np.ndarray
    constant: float
    G: np.ndarray
    h: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    @property
    def n(self) -> int:
        return self.reduced.n

    @property
    def m(self) -> int:
        return self.reduced.m

    @property
    def is_quadratic(self) -> bool:
        return self.reduced.is_quadratic

    def split(self, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=float)
        n, m = self.n, self.m
        return z[:n], z[n:n + m], z[n + m:]

    def objective_value(self, z) -> float:
        z = np.asarray(z, dtype=float)
        return float(z @ self.H @ z + self.w @ z + self.constant)

    def to_dict(self) -> dict:
        r = self.reduced
        names = list(r.variables) + [f"psi_{c}" for c in r.constraint_names] + \
            [f"zeta_{c}" for c in r.constraint_names]
        return {
            "variables": [
                {"name": nm, "lower": _f(lo), "upper": None if math.isinf(hi) else _f(hi)}
                for nm, lo, hi in zip(names, self.lower, self.upper)
            ],
            "objective": {
                "quadratic": [[_f(q) for q in row] for row in self.H],
                "linear": [_f(v) for v in self.w],
                "constant": _f(self.constant),
            },
            "constraints": [
                {"coefficients": [_f(a) for a in row], "rhs": _f(rhs), "sense": "<="}
                for row, rhs in zip(self.G, self.h)
            ],
        }


def penalty_remodel(r: ReducedProblem) -> PenaltyProblem:
    n, m = r.n, r.m
    size = n + 2 * m
    H = np.zeros((size, size))
    H[:n, :n] = r.quadratic
    w = np.concatenate([r.linear, -r.excess, -r.shortage])
    G = np.zeros((2 * m, size))
    hvec = np.zeros(2 * m)
    eye = np.eye(m)
    # g_i(x) <= psi_i   ->   A x - psi <= -c
    G[:m, :n] = r.A
    G[:m, n:n + m] = -eye
    hvec[:m] = -r.c
    # -g_i(x) <= zeta_i ->  -A x - zeta <= c
    G[m:, :n] = -r.A
    G[m:, n + m:] = -eye
    hvec[m:] = r.c
    lower = np.concatenate([r.lower, np.zeros(2 * m)])
    upper = np.concatenate([r.upper, np.full(2 * m, np.inf)])
    return PenaltyProblem(r, H, w, r.constant, G, hvec, lower, upper)


def exact_penalty_terms(r: ReducedProblem, x) -> tuple[np.ndarray, np.ndarray]:
    """``(psi, zeta) = (max(0, g), max(0, -g))`` at ``x``."""
    g = r.residuals(x)
    return np.maximum(0.0, g), np.maximum(0.0, -g)


def evaluate_exact_penalty(r: ReducedProblem, x, tol: float = 1e-9) -> float:
    """``f(x) - sum(e * max(0, g)) - sum(s * max(0, -g))`` for ``x`` inside the box."""
    x = np.asarray(x, dtype=float)
    if x.shape != (r.n,):
        raise ValueError(f"expected a point with {r.n} coordinates, got shape {x.shape}")
    if np.any(x < r.lower - tol) or np.any(x > r.upper + tol):
        raise ValueError("point lies outside the variable bounds")
    psi, zeta = exact_penalty_terms(r, x)
    return r.objective_value(x) - float(r.excess @ psi) - float(r.shortage @ zeta)


def as_reduced(obj) -> ReducedProblem:
    if isinstance(obj, ReducedProblem):
        return obj
    if isinstance(obj, PenaltyProblem):
        return obj.reduced
    if isinstance(obj, UncertainProblem):
        return reduce(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a reduced problem")


def load_reduced(path) -> ReducedProblem:
    import json

    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "reduced" in data:
        data = data["reduced"]
    return ReducedProblem.from_dict(data)


def interval_objective_at(ip: IntervalProblem, x: dict, penalties: Optional[Sequence[float]] = None) -> Interval:
    """Interval value of ``f(x) - sum p_i g_i(x)`` with ``x`` held fixed (|g| linearized)."""
    total = Interval.point(0.0)
    for t in ip.objective:
        total = total + t.interval * _mono_value(t.mono, x)
    pens = penalties if penalties is not None else [1.0] * len(ip.constraints)
    for p_i, con in zip(pens, ip.constraints):
        for t in con.terms:
            total = total - t.interval * (p_i * _mono_value(t.mono, x))
    return total


def _mono_value(mono: tuple, x: dict) -> float:
    out = 1.0
    for v in mono:
        out *= x[v]
    return out
