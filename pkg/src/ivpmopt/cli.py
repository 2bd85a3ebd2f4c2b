"""Command line front end: ``expected``, ``reduce``, ``solve``, ``verify``.

Exit status: 0 success, 1 verification failure, 2 usage, input or parse error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .model import ModelError, load_problem
from .oracle import GridSpec, GridTooLarge, check_solution, grid_gap_bound, grid_search
from .reduction import (
    ReducedProblem, load_reduced, penalty_remodel, reduce,
)
from .solver import METHODS, SimplexInfeasible, default_method, solve
from .uncertainty import interval_expected_value

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _round(obj):
    """Round floats to 12 significant digits for stable output."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        v = float(f"{obj:.12g}")
        return 0.0 if v == 0 else v
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(_round(obj), sort_keys=True, indent=2)


def _load(path: str, need_model: bool = False):
    p = Path(path)
    if not p.is_file():
        raise CliError(f"no such file: {path}")
    if p.suffix == ".json":
        if need_model:
            raise CliError("this command needs an .ivpm model file")
        try:
            return None, load_reduced(p)
        except (KeyError, ValueError, TypeError) as exc:
            raise CliError(f"{path}: invalid reduced-problem JSON: {exc}") from exc
    problem = load_problem(p)
    return problem, reduce(problem)


def _frac(x: float) -> str:
    f = Fraction(x).limit_denominator(1000)
    return str(f) if abs(float(f) - x) < 1e-12 else f"{x:.12g}"


def _source(coef) -> str:
    v = coef.value
    if coef.kind == "constant":
        body = f"{v:g}"
    elif coef.kind == "interval":
        body = f"interval({v.lo:g}, {v.hi:g})"
    else:
        head = "pos" if coef.kind == "possibilistic" else "prob"
        body = f"{head}({v.a:g}, {v.b:g}, {v.c:g}, {v.d:g}; n={v.n})"
    return ("-" if coef.negated else "") + body


def cmd_expected(args) -> int:
    problem, _ = _load(args.input, need_model=True)
    rows = []
    sections = [("objective", problem.objective)] + [(c.name, c.terms) for c in problem.constraints]
    for where, terms in sections:
        for t in terms:
            unsigned = interval_expected_value(type(t.coef)(t.coef.kind, t.coef.value, False))
            signed = interval_expected_value(t.coef)
            rows.append({
                "where": where,
                "term": "*".join(t.mono) if t.mono else "1",
                "kind": t.coef.kind,
                "source": _source(t.coef),
                "expected": [unsigned.lo, unsigned.hi],
                "signed": [signed.lo, signed.hi],
            })
    if args.json:
        _emit(args, dumps({"problem": problem.name, "coefficients": rows}))
        return EXIT_OK
    lines = [f"{'where':<10} {'term':<8} {'kind':<14} {'source':<28} {'expected':<22} signed"]
    for r in rows:
        ev = f"[{_frac(r['expected'][0])}, {_frac(r['expected'][1])}]"
        sv = f"[{_frac(r['signed'][0])}, {_frac(r['signed'][1])}]"
        lines.append(f"{r['where']:<10} {r['term']:<8} {r['kind']:<14} {r['source']:<28} {ev:<22} {sv}")
    _emit(args, "\n".join(lines))
    return EXIT_OK


def _reduced_text(r: ReducedProblem) -> str:
    def expr(quad, lin, const):
        parts = []
        for i, vi in enumerate(r.variables):
            for j, vj in enumerate(r.variables):
                if quad is not None and quad[i, j] != 0:
                    mono = f"{vi}^2" if i == j else f"{vi}*{vj}"
                    parts.append(f"{_frac(quad[i, j])}*{mono}")
        parts += [f"{_frac(a)}*{v}" for a, v in zip(lin, r.variables) if a != 0]
        if const != 0 or not parts:
            parts.append(_frac(const))
        return " + ".join(parts).replace("+ -", "- ")

    lines = [f"maximize  {expr(r.quadratic, r.linear, r.constant)}"]
    for name, row, c, e, s in zip(r.constraint_names, r.A, r.c, r.excess, r.shortage):
        lines.append(f"{name}: {expr(None, row, c)} = 0   (excess {e:g}, shortage {s:g})")
    for v, lo, hi in zip(r.variables, r.lower, r.upper):
        lines.append(f"{lo:g} <= {v} <= {hi:g}")
    return "\n".join(lines)


def cmd_reduce(args) -> int:
    _, r = _load(args.input)
    if args.json:
        _emit(args, dumps({"reduced": r.to_dict(), "penalty": penalty_remodel(r).to_dict()}))
    else:
        _emit(args, _reduced_text(r))
    return EXIT_OK


def _solve(args, r: ReducedProblem):
    pp = penalty_remodel(r)
    method = args.method or default_method(pp)
    if method == "simplex" and pp.is_quadratic:
        raise CliError("the simplex method needs a linear objective; use --method local or grid")
    return solve(pp, method=method, starts=args.starts, seed=args.seed, grid_res=args.grid_res)


def cmd_solve(args) -> int:
    _, r = _load(args.input)
    sol = _solve(args, r)
    # the solution is always printed as JSON; --json is accepted for symmetry
    _emit(args, dumps(sol.to_dict()))
    return EXIT_OK


def cmd_verify(args) -> int:
    _, r = _load(args.input)
    sol = _solve(args, r)
    report = check_solution(r, sol)
    grid = grid_search(r, GridSpec(args.grid_res))
    gap = grid_gap_bound(r, grid.steps)
    scale = 1e-7 * (1.0 + abs(sol.objective))
    cross = {
        "grid_not_better": grid.objective <= sol.objective + scale,
        "grid_within_gap": sol.objective - grid.objective <= gap + scale,
    }
    out = {
        "solution": sol.to_dict(),
        "checks": report.to_dict(),
        "grid": {
            "resolution": args.grid_res,
            "points": grid.points,
            "best_objective": grid.objective,
            "best_x": {v: float(x) for v, x in zip(r.variables, grid.x)},
            "gap_bound": gap,
            "checks": cross,
        },
    }
    passed = report.passed and all(cross.values())
    out["passed"] = passed
    _emit(args, dumps(out))
    return EXIT_OK if passed else EXIT_VERIFY


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ivpmopt",
        description="Solve LPs/QPs with probabilistic, possibilistic, interval and constant coefficients.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help=".ivpm model file (or reduced-problem .json where allowed)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--method", choices=METHODS, help="solver (default: simplex if linear, local if quadratic)")
    common.add_argument("--grid-res", type=float, default=0.05, metavar="R", help="grid resolution (default 0.05)")
    common.add_argument("--starts", type=int, default=16, metavar="N", help="local-search starts (default 16)")
    common.add_argument("--seed", type=int, default=0, metavar="S", help="seed for start points (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("expected", parents=[common], help="interval expected value of every coefficient")
    sub.add_parser("reduce", parents=[common], help="deterministic reduced and penalty programs")
    sub.add_parser("solve", parents=[common], help="solve and print the solution JSON")
    sub.add_parser("verify", parents=[common], help="solve, then cross-check with the oracles")
    return parser


_COMMANDS = {"expected": cmd_expected, "reduce": cmd_reduce, "solve": cmd_solve, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.starts < 1:
        parser.error("--starts must be >= 1")
    if not args.grid_res > 0:
        parser.error("--grid-res must be positive")
    try:
        return _COMMANDS[args.command](args)
    except ModelError as exc:
        span = f" [chars {exc.span[0]}-{exc.span[1]}]" if exc.span else ""
        print(f"ivpmopt: {args.input}: {exc}{span}", file=sys.stderr)
    except (CliError, GridTooLarge, SimplexInfeasible, OSError) as exc:
        print(f"ivpmopt: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"ivpmopt: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
