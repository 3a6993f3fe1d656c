"""Empirical validation of the nonexistence bound via the integral operator.

A nontrivial solution of D^alpha u + q u = 0 with the two boundary
conditions is precisely a fixed point of (K_q u)(t) = integral_a^b
G(t, s) q(s) u(s) ds, i.e. an eigenfunction of K_q with eigenvalue 1.  For
q >= 0 the Nystrom matrix of K_q is entrywise nonnegative, its dominant
eigenvalue (the Perron root) is real, and power iteration estimates it. The
nonexistence certificate then has a falsifiable consequence: scaling q so
that the integral of q_+ equals the Lyapunov threshold must leave the
spectral radius below 1.  The sharpness scan probes how close to 1 the
radius gets for concentrated coefficient families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, ParameterError
from .fractional import Grid, GridFunction
from .greens import ProblemSpec, diag_argmax, greens_weight_matrix
from .lyapunov import lyapunov_rhs, qplus_integral

__all__ = [
    "OperatorMatrix",
    "SpectralReport",
    "ConstantFamily",
    "BumpFamily",
    "ScanRow",
    "discretize_operator",
    "spectral_radius",
    "sharpness_scan",
    "default_bump_family",
]


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Nystrom discretization of K_q: entries[i, k] weights u(t_k) in (K_q u)(t_i)."""

    entries: np.ndarray
    grid: Grid
    q_ref: str

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.float64, copy=True)
        shape = (self.grid.n + 1, self.grid.n + 1)
        if entries.shape != shape:
            raise GridMismatchError(f"expected operator shape {shape}, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ParameterError("operator entries must all be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class SpectralReport:
    radius: float
    iterations: int
    converged: bool
    residual: float


@dataclass(frozen=True)
class ConstantFamily:
    """The single coefficient q = const, scaled to the requested integral."""


@dataclass(frozen=True)
class BumpFamily:
    """Triangular bumps centered at ``center``, widths shrinking from ``width``."""

    center: float
    width: float


@dataclass(frozen=True)
class ScanRow:
    parameter: float
    scaled_integral: float
    radius: float
    converged: bool


def discretize_operator(p: ProblemSpec, q: GridFunction, q_ref: str = "sampled q") -> OperatorMatrix:
    """Product-quadrature matrix for u -> integral G(t_i, s) q(s) u(s) ds.

    Column k of the Green's-function weight matrix is scaled by q(t_k), so
    the product q*u is treated as piecewise linear; for q >= 0 every entry
    is nonnegative, and row 0 vanishes with G(a, .).
    """
    _require_matching(p, q.grid)
    entries = greens_weight_matrix(p, q.grid) * q.values[np.newaxis, :]
    return OperatorMatrix(entries=entries, grid=q.grid, q_ref=q_ref)


def _require_matching(p: ProblemSpec, grid: Grid) -> None:
    if grid.a != p.a or grid.b != p.b:
        raise GridMismatchError(
            f"grid interval [{grid.a}, {grid.b}] does not match problem interval [{p.a}, {p.b}]"
        )


def spectral_radius(m: OperatorMatrix, tol: float = 1e-10, max_iter: int = 5000) -> SpectralReport:
    """Power iteration from the all-ones vector with sup-norm normalization.

    The radius estimate is the Rayleigh quotient; the run is declared
    converged once successive estimates differ by at most ``tol`` and the
    sup-norm eigen-residual ||M v - r v|| / ||v|| is itself at most ``tol``.
    Non-convergence is reported, not raised (for sign-changing q the
    dominant eigenvalue need not be real and the iteration may wander).
    """
    matrix = m.entries
    v = np.ones(matrix.shape[0])
    estimate = math.inf
    iterations = 0
    residual = math.inf
    for iterations in range(1, max_iter + 1):
        w = matrix @ v
        previous = estimate
        estimate = float(w @ v / (v @ v))
        residual = float(np.max(np.abs(w - estimate * v)) / np.max(np.abs(v)))
        if abs(estimate - previous) <= tol and residual <= tol:
            return SpectralReport(
                radius=abs(estimate), iterations=iterations, converged=True, residual=residual
            )
        norm = float(np.max(np.abs(w)))
        if norm == 0.0:
            # K_q annihilated the iterate (e.g. q = 0): the radius is 0
            return SpectralReport(radius=0.0, iterations=iterations, converged=True, residual=0.0)
        v = w / norm
    return SpectralReport(
        radius=abs(estimate), iterations=iterations, converged=False, residual=residual
    )


def _scaled_to_threshold(p: ProblemSpec, grid: Grid, raw: np.ndarray) -> GridFunction:
    """Scale nonnegative samples so their trapezoidal integral hits the threshold."""
    base = qplus_integral(GridFunction(grid, raw))
    if base <= 0.0:
        raise ParameterError("coefficient family member has zero integral; cannot scale")
    return GridFunction(grid, raw * (lyapunov_rhs(p) / base))


def sharpness_scan(
    p: ProblemSpec,
    family: ConstantFamily | BumpFamily,
    samples: int,
    grid_n: int = 256,
    tol: float = 1e-8,
    max_iter: int = 5000,
) -> list[ScanRow]:
    """Spectral radii for a coefficient family pinned to the Lyapunov threshold.

    Every family member is scaled so that its integral equals the threshold,
    the boundary case of the certificate; the resulting radii stay below 1
    and quantify the bound's slack.  For :class:`ConstantFamily` there is a
    single member (``samples`` is ignored) whose row parameter is the
    constant level.  For :class:`BumpFamily` the scan halves the width
    ``samples`` times starting from ``family.width``, rows keyed by width;
    narrower bumps centered at the diagonal maximizer push the radius
    toward 1.
    """
    grid = Grid(p.a, p.b, grid_n)
    rows: list[ScanRow] = []
    if isinstance(family, ConstantFamily):
        members = [(lyapunov_rhs(p) / p.length, np.ones(grid_n + 1))]
    else:
        if not (p.a <= family.center <= p.b):
            raise ParameterError(f"bump center must lie in [{p.a}, {p.b}]")
        if family.width <= 0.0:
            raise ParameterError(f"bump width must be positive, got {family.width}")
        if samples < 1:
            raise ParameterError(f"samples must be >= 1, got {samples}")
        members = []
        for j in range(samples):
            width = family.width / 2.0**j
            bump = np.maximum(0.0, 1.0 - np.abs(grid.nodes - family.center) / width)
            members.append((width, bump))
    for parameter, raw in members:
        q = _scaled_to_threshold(p, grid, raw)
        report = spectral_radius(
            discretize_operator(p, q, q_ref=f"scan member {parameter}"), tol=tol, max_iter=max_iter
        )
        rows.append(
            ScanRow(
                parameter=float(parameter),
                scaled_integral=qplus_integral(q),
                radius=report.radius,
                converged=report.converged,
            )
        )
    return rows


def default_bump_family(p: ProblemSpec) -> BumpFamily:
    """Bump family centered at the diagonal maximizer, the tight direction."""
    return BumpFamily(center=diag_argmax(p).location, width=p.length / 2.0)
