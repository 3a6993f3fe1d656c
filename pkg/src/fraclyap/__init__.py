"""Lyapunov-type nonexistence bounds and solvers for fractional two-point problems.

The package treats the boundary value problem

    D^alpha u + q(t) u = 0,   u(a) = 0,   D^beta u(b) = 0,

with Riemann-Liouville derivatives, 1 < alpha <= 2 and 0 <= beta <= alpha-1:
closed-form Green's function and extremal data (:mod:`fraclyap.greens`),
the nonexistence certificate (:mod:`fraclyap.lyapunov`), linear and Picard
solvers with residual verification (:mod:`fraclyap.solver`), spectral-radius
validation of the certificate (:mod:`fraclyap.spectral`), grid fractional
calculus (:mod:`fraclyap.fractional`) and a small expression language for
coefficients (:mod:`fraclyap.expressions`).  The ``fraclyap`` CLI fronts all
of it with deterministic JSON/CSV reports.
"""

from __future__ import annotations

from .errors import (
    ConfigError,
    ExprEvalError,
    ExpressionError,
    ExprSyntaxError,
    FracLyapError,
    GammaPoleError,
    GridMismatchError,
    ParameterError,
)
from .expressions import Expr, evaluate, parse, to_source
from .fractional import (
    FractionalOrder,
    Grid,
    GridFunction,
    frac_derivative,
    frac_integral,
    gamma,
    power_rule_derivative,
    power_rule_integral,
)
from .greens import (
    ExtremalPoint,
    ProblemSpec,
    diag_argmax,
    greens_diag,
    greens_row_integral,
    greens_value,
    greens_weight_matrix,
    order_lattice,
    row_integral_max,
)
from .lyapunov import BoundReport, Verdict, lyapunov_rhs, nonexistence_verdict, qplus_integral
from .solver import (
    NonlinearProblem,
    PicardResult,
    ResidualReport,
    contraction_factor,
    contraction_threshold,
    homogeneous_lift,
    picard_solve,
    residual_check,
    solve_linear,
)
from .spectral import (
    BumpFamily,
    ConstantFamily,
    OperatorMatrix,
    ScanRow,
    SpectralReport,
    default_bump_family,
    discretize_operator,
    sharpness_scan,
    spectral_radius,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "FracLyapError",
    "ParameterError",
    "GammaPoleError",
    "GridMismatchError",
    "ExpressionError",
    "ExprSyntaxError",
    "ExprEvalError",
    "ConfigError",
    "Grid",
    "GridFunction",
    "FractionalOrder",
    "gamma",
    "frac_integral",
    "frac_derivative",
    "power_rule_integral",
    "power_rule_derivative",
    "ProblemSpec",
    "ExtremalPoint",
    "greens_value",
    "greens_diag",
    "diag_argmax",
    "greens_row_integral",
    "row_integral_max",
    "greens_weight_matrix",
    "order_lattice",
    "Verdict",
    "BoundReport",
    "lyapunov_rhs",
    "qplus_integral",
    "nonexistence_verdict",
    "NonlinearProblem",
    "PicardResult",
    "ResidualReport",
    "solve_linear",
    "residual_check",
    "contraction_threshold",
    "contraction_factor",
    "homogeneous_lift",
    "picard_solve",
    "OperatorMatrix",
    "SpectralReport",
    "ConstantFamily",
    "BumpFamily",
    "ScanRow",
    "discretize_operator",
    "spectral_radius",
    "sharpness_scan",
    "default_bump_family",
    "Expr",
    "parse",
    "evaluate",
    "to_source",
]
