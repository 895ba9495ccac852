"""Inexact projected gradient method for vector optimization under polyhedral cone orders."""

from .cone import ConeOrder, in_minus_int_k, k_leq, min_norm_in_hull, new_cone, pareto_cone, phi, phi_argmax
from .direction import (
    Descent,
    DirectionCertificate,
    OracleBudgetExceeded,
    Stationary,
    dual_value,
    h_value,
    solve_direction,
    theta_bruteforce,
)
from .expr import differentiate, parse_expr, to_text
from .functions import Problem, VectorFunction, builtin_registry, get_problem
from .linesearch import ArmijoResult, armijo
from .sets import Ball, Box, FeasibleSet, Simplex, WholeSpace, contains, project, project_shifted
from .solver import IterationRecord, SolverConfig, SolveResult, fejer_check, solve, stationarity_residual

__version__ = "0.1.0"
