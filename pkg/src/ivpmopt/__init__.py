"""Optimization with probabilistic, possibilistic, interval and constant coefficients.

Uncertain coefficients are replaced by interval expected values of
interval-valued probability measures, collapsed to reals by a decision-maker
ordering/weighting rule, and equality constraints are softened by excess and
shortage penalties.  The resulting LP or QP is solved and cross-checked.
"""
from importlib import resources

from .interval import Interval, interval_arith, interval_features
from .model import (
    Constraint, ModelError, ReductionConfig, Term, UncertainProblem, Variable,
    load_problem, parse_problem, serialize_problem,
)
from .reduction import (
    IntervalProblem, PenaltyProblem, ReducedProblem, apply_u, apply_v, evaluate_exact_penalty,
    expected_problem, load_reduced, penalty_remodel, reduce,
)
from .solver import Solution, solve, solve_lp, solve_qp
from .uncertainty import (
    Coef, IntervalSet, Shape, density, interval_expected_value, ivpm, lower_cumulative,
    membership, nec_measure, pos_measure, probabilistic_mean, product_ivpm, upper_cumulative,
)

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path to a bundled fixture (``ex1.ivpm``, ``ex2.ivpm``, ``ex1_reference.json``, ``ex2_reference.json``)."""
    return resources.files(__package__).joinpath("fixtures", name)


__all__ = [
    "Coef", "Constraint", "Interval", "IntervalProblem", "IntervalSet", "ModelError",
    "PenaltyProblem", "ReducedProblem", "ReductionConfig", "Shape", "Solution", "Term",
    "UncertainProblem", "Variable", "apply_u", "apply_v", "density", "evaluate_exact_penalty",
    "expected_problem", "fixture_path", "interval_arith", "interval_expected_value",
    "interval_features", "ivpm", "load_problem", "load_reduced", "lower_cumulative", "membership",
    "nec_measure", "parse_problem", "penalty_remodel", "pos_measure", "probabilistic_mean",
    "product_ivpm", "reduce", "serialize_problem", "solve", "solve_lp", "solve_qp",
    "upper_cumulative",
]
