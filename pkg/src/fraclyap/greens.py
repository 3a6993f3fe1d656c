"""Green's function of the fractional two-point problem and its extremal data.

The boundary value problem D^alpha u + h(t) = 0 on [a, b] with u(a) = 0 and
D^beta u(b) = 0 (1 < alpha <= 2, 0 <= beta <= alpha - 1) is solved by
u(t) = integral_a^b G(t, s) h(s) ds with the two-branch kernel

    G(t, s) = 1/Gamma(alpha) * [ (t-a)^(alpha-1) (b-s)^(alpha-1-beta)
                                  / (b-a)^(alpha-1-beta)
                                 - (t-s)^(alpha-1) * [s <= t] ].

G is nonnegative, dominated by its diagonal g(s) = G(s, s), and both the
diagonal and the row integral integral_a^b G(t, s) ds admit closed-form
maximizers; those extremal values drive the nonexistence bound and the
contraction threshold elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .fractional import Grid, convolution_weights, gamma

__all__ = [
    "ProblemSpec",
    "ExtremalPoint",
    "greens_value",
    "greens_diag",
    "diag_argmax",
    "greens_row_integral",
    "row_integral_max",
    "greens_weight_matrix",
    "order_lattice",
]


@dataclass(frozen=True)
class ProblemSpec:
    """Geometry (alpha, beta, a, b) of the fractional boundary value problem."""

    alpha: float
    beta: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and 1.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must lie in (1, 2], got {self.alpha}")
        if math.isfinite(self.beta) and self.alpha - 1.0 < self.beta <= 1.0:
            raise ParameterError(
                f"beta={self.beta} exceeds alpha-1={self.alpha - 1.0}: the kernel diagonal "
                "G(s, s) grows without bound as s -> b, so no finite nonexistence "
                "threshold exists; beta must lie in [0, alpha-1]"
            )
        if not (math.isfinite(self.beta) and 0.0 <= self.beta <= self.alpha - 1.0):
            raise ParameterError(f"beta must lie in [0, alpha-1], got {self.beta}")
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ParameterError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class ExtremalPoint:
    """Location and value of a kernel maximum."""

    location: float
    value: float


def _pow_zero_is_one(base, expo: float):
    """base**expo with the convention that a zero exponent always gives 1."""
    if expo == 0.0:
        return np.ones_like(base) if isinstance(base, np.ndarray) else 1.0
    return base**expo


def _check_inside(name: str, x, p: ProblemSpec) -> None:
    if np.any(np.asarray(x) < p.a) or np.any(np.asarray(x) > p.b):
        raise ParameterError(f"{name} must lie in [{p.a}, {p.b}]")


def greens_value(t: float, s: float, p: ProblemSpec) -> float:
    """Evaluate G(t, s).

    The diagonal s = t is assigned to the upper branch (no (t - s) term),
    which agrees with the lower branch by continuity.
    """
    _check_inside("t", t, p)
    _check_inside("s", s, p)
    alpha, beta = p.alpha, p.beta
    upper = (
        (t - p.a) ** (alpha - 1.0)
        * _pow_zero_is_one(p.b - s, alpha - 1.0 - beta)
        / _pow_zero_is_one(p.b - p.a, alpha - 1.0 - beta)
    )
    value = upper
    if s < t:
        value = upper - (t - s) ** (alpha - 1.0)
    value /= gamma(alpha)
    if value < 0.0:
        # the kernel is nonnegative; only cancellation-level rounding may dip below
        if value < -1e-12 * max(1.0, upper):
            raise AssertionError(f"negative kernel value {value} at t={t}, s={s}")
        value = 0.0
    return value


def greens_diag(s, p: ProblemSpec):
    """Diagonal g(s) = G(s, s); accepts a scalar or an ndarray of points.

    g(a) = 0 and, unless beta = alpha - 1 (where g is increasing up to
    g(b) = (b-a)^(alpha-1)/Gamma(alpha)), g(b) = 0.
    """
    _check_inside("s", s, p)
    alpha, beta = p.alpha, p.beta
    expo = alpha - 1.0 - beta
    return (
        (s - p.a) ** (alpha - 1.0)
        * _pow_zero_is_one(p.b - s, expo)
        / (_pow_zero_is_one(p.b - p.a, expo) * gamma(alpha))
    )


def diag_argmax(p: ProblemSpec) -> ExtremalPoint:
    """Unique maximum of the diagonal g(s).

    The maximizer is s* = ((alpha-1) b + (alpha-1-beta) a)/(2 alpha-2-beta);
    for beta = alpha - 1 it degenerates to s* = b and the value keeps the
    zero-exponent-means-one convention.
    """
    alpha, beta = p.alpha, p.beta
    denom = 2.0 * alpha - 2.0 - beta
    location = ((alpha - 1.0) * p.b + (alpha - 1.0 - beta) * p.a) / denom
    expo = alpha - 1.0 - beta
    value = (
        (p.length * (alpha - 1.0) / denom) ** (alpha - 1.0)
        * _pow_zero_is_one(expo / denom, expo)
        / gamma(alpha)
    )
    return ExtremalPoint(location=location, value=value)


def greens_row_integral(t, p: ProblemSpec):
    """Closed form of integral_a^b G(t, s) ds; accepts a scalar or ndarray."""
    _check_inside("t", t, p)
    alpha, beta = p.alpha, p.beta
    return (
        (t - p.a) ** (alpha - 1.0)
        / gamma(alpha + 1.0)
        * (alpha / (alpha - beta) * p.length - (t - p.a))
    )


def row_integral_max(p: ProblemSpec) -> ExtremalPoint:
    """Maximum of the row integral over t.

    Attained at t* = a + (alpha-1)/(alpha-beta) (b-a), which reaches b only
    for beta = 1, with value (alpha-1)^(alpha-1) (b-a)^alpha
    / ((alpha-beta)^alpha Gamma(alpha+1)).
    """
    alpha, beta = p.alpha, p.beta
    location = p.a + (alpha - 1.0) / (alpha - beta) * p.length
    value = (
        (alpha - 1.0) ** (alpha - 1.0)
        / ((alpha - beta) ** alpha * gamma(alpha + 1.0))
        * p.length**alpha
    )
    return ExtremalPoint(location=location, value=value)


def greens_weight_matrix(p: ProblemSpec, grid: Grid) -> np.ndarray:
    """Product-quadrature weights of G against the piecewise-linear hat basis.

    Entry ``[i, k]`` is integral_a^b G(t_i, s) phi_k(s) ds, computed exactly:
    each branch of G is a power weight whose hat moments come from
    :func:`fraclyap.fractional.convolution_weights` (the (b - s) factor via
    reflection).  Applying the matrix to node samples of ``h`` integrates the
    piecewise-linear interpolant of ``h`` against G exactly, so the weakly
    singular (t - s)^(alpha - 1) term costs no accuracy.  Row 0 is zero and
    all entries are nonnegative.
    """
    if grid.a != p.a or grid.b != p.b:
        raise ParameterError(
            f"grid interval [{grid.a}, {grid.b}] does not match problem interval [{p.a}, {p.b}]"
        )
    alpha, beta = p.alpha, p.beta
    n, h = grid.n, grid.h
    mu = alpha - beta  # order of the (b - s)^(mu - 1) boundary factor, mu >= 1
    # row n of the kernel-moment matrix has t_i = b, i.e. precisely the
    # (b - s)^(mu - 1) hat moments over the whole interval
    right_moments = convolution_weights(mu, n, h)[n, :]
    prefactor = (grid.nodes - p.a) ** (alpha - 1.0) / (
        _pow_zero_is_one(p.length, mu - 1.0) * gamma(alpha)
    )
    w = np.outer(prefactor, right_moments) - convolution_weights(alpha, n, h) / gamma(alpha)
    low = w.min()
    if low < -1e-10 * w.max():
        raise AssertionError(f"Green's function weights came out negative: min={low}")
    np.maximum(w, 0.0, out=w)
    w[0, :] = 0.0
    return w


def order_lattice() -> list[tuple[float, float]]:
    """Standard (alpha, beta) sweep used by the validation suite.

    Ten alpha values 1.1, 1.2, ..., 2.0, each paired with beta at 0, 1/3,
    2/3 and all of alpha - 1: forty pairs covering the admissible wedge
    including both boundary cases beta = 0 and beta = alpha - 1.
    """
    pairs: list[tuple[float, float]] = []
    for tenth in range(11, 21):
        alpha = tenth / 10.0
        for fraction in (0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0):
            pairs.append((alpha, (alpha - 1.0) * fraction))
    return pairs
