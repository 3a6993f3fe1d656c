"""Nonexistence certificate for D^alpha u + q(t) u = 0, u(a) = 0, D^beta u(b) = 0.

Any nontrivial solution forces the strict inequality

    integral_a^b q_+(t) dt > 1 / max_s G(s, s),

where q_+ = max(q, 0).  The contrapositive is the certificate issued here:
whenever the integral of q_+ stays at or below that threshold, the problem
admits only the trivial solution.  The converse direction is not available,
so the other verdict is merely "inconclusive".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError
from .fractional import GridFunction, gamma
from .greens import ExtremalPoint, ProblemSpec, diag_argmax

__all__ = ["Verdict", "BoundReport", "lyapunov_rhs", "qplus_integral", "nonexistence_verdict"]


class Verdict(enum.Enum):
    NO_NONTRIVIAL_SOLUTION = "NoNontrivialSolution"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BoundReport:
    """Outcome of the nonexistence test.

    ``rhs`` is the threshold (the reciprocal of the diagonal maximum of the
    Green's function), ``q_plus_integral`` the trapezoidal integral of the
    nonnegative part of q, and ``s_star`` the diagonal maximizer.
    """

    rhs: float
    q_plus_integral: float
    verdict: Verdict
    s_star: ExtremalPoint


def lyapunov_rhs(p: ProblemSpec) -> float:
    """Threshold Gamma(a) ((2a-2-B)/((b-a)(a-1)))^(a-1) ((2a-2-B)/(a-1-B))^(a-1-B).

    Written with a = alpha, B = beta; the second factor is 1 by convention
    when beta = alpha - 1.  Algebraically this is 1/diag_argmax(p).value,
    but it is evaluated from its own closed form so the reciprocal relation
    stays a meaningful cross-check.
    """
    alpha, beta = p.alpha, p.beta
    denom = 2.0 * alpha - 2.0 - beta
    expo = alpha - 1.0 - beta
    first = (denom / (p.length * (alpha - 1.0))) ** (alpha - 1.0)
    second = 1.0 if expo == 0.0 else (denom / expo) ** expo
    return gamma(alpha) * first * second


def qplus_integral(q: GridFunction) -> float:
    """Trapezoidal integral of max(q, 0) over the grid interval."""
    clipped = np.maximum(q.values, 0.0)
    return float(q.grid.h * (clipped.sum() - 0.5 * (clipped[0] + clipped[-1])))


def nonexistence_verdict(p: ProblemSpec, q: GridFunction) -> BoundReport:
    """Assemble the certificate for a sampled coefficient q.

    The verdict is NO_NONTRIVIAL_SOLUTION exactly when the integral of q_+
    is at or below the threshold (equality still certifies nonexistence,
    since existence forces a strict inequality); otherwise INCONCLUSIVE.
    """
    if q.grid.a != p.a or q.grid.b != p.b:
        raise GridMismatchError(
            f"q sampled on [{q.grid.a}, {q.grid.b}] but problem lives on [{p.a}, {p.b}]"
        )
    rhs = lyapunov_rhs(p)
    qpi = qplus_integral(q)
    verdict = Verdict.NO_NONTRIVIAL_SOLUTION if qpi <= rhs else Verdict.INCONCLUSIVE
    return BoundReport(rhs=rhs, q_plus_integral=qpi, verdict=verdict, s_star=diag_argmax(p))
