"""Numerical toolkit for singular integral equations with a Carleman shift on closed contours."""
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import *  # noqa: F401,F403
from .exprparse import evaluate, parse, unparse
from .fredholm import build_regularizer, index_report, noether_check, winding_number
from .funcspace import SampledFunction, compose_shift, differentiate, from_fourier, to_fourier
from .geometry import Contour, contour_sample, induce_shift
from .numerics import compactness_score, null_count, numerical_index, solve
from .problem import ProblemSpec, load_problem, problem_from_dict
from .shift_system import (CoefficientSet, GridOperators, OperatorKind, assemble_operator,
                           build_system_fields)
from .singular_ops import OperatorMatrix, build_integral_op, build_S, cauchy_projections

__version__ = "0.1.0"
