"""Acceptance suite: one test per release criterion, each printing a verdict line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines; every criterion pins its tolerance here.
"""

import math
import random

import numpy as np

from fraclyap import (
    Grid,
    GridFunction,
    NonlinearProblem,
    OperatorMatrix,
    ProblemSpec,
    diag_argmax,
    discretize_operator,
    evaluate,
    gamma,
    greens_diag,
    greens_row_integral,
    greens_weight_matrix,
    lyapunov_rhs,
    order_lattice,
    parse,
    picard_solve,
    power_rule_derivative,
    qplus_integral,
    residual_check,
    row_integral_max,
    solve_linear,
    spectral_radius,
    to_source,
    frac_integral,
)


def report(criterion: int, summary: str) -> None:
    print(f"criterion {criterion} PASS: {summary}")


def test_criterion_1_classical_reduction():
    p = ProblemSpec(2.0, 0.0, 0.0, 1.0)
    rhs = lyapunov_rhs(p)
    diag = diag_argmax(p).value
    row = row_integral_max(p).value
    assert abs(rhs - 4.0) <= 1e-12
    assert abs(diag - 0.25) <= 1e-12
    assert abs(row - 0.125) <= 1e-12
    report(1, f"rhs={rhs!r}, diag_max={diag!r}, row_max={row!r} (tol 1e-12)")


def test_criterion_2_beta_zero_reduction():
    worst = 0.0
    for alpha in (1.1, 1.25, 1.5, 1.75, 2.0):
        p = ProblemSpec(alpha, 0.0, 0.0, 1.0)
        expected = gamma(alpha) * 4.0 ** (alpha - 1.0)
        worst = max(worst, abs(lyapunov_rhs(p) - expected))
        assert abs(lyapunov_rhs(p) - expected) <= 1e-12
    report(2, f"max |rhs - Gamma(a) 4^(a-1)| = {worst:.2e} over 5 alphas (tol 1e-12)")


def test_criterion_3_closed_forms_vs_brute_force():
    points = 1_000_001
    s = np.linspace(0.0, 1.0, points)
    cell = 1.0 / (points - 1)
    worst_loc, worst_rel = 0.0, 0.0
    pairs = order_lattice()
    assert len(pairs) == 40
    for alpha, beta in pairs:
        p = ProblemSpec(alpha, beta, 0.0, 1.0)
        for closed, sampled in (
            (diag_argmax(p), greens_diag(s, p)),
            (row_integral_max(p), greens_row_integral(s, p)),
        ):
            i = int(np.argmax(sampled))
            worst_loc = max(worst_loc, abs(closed.location - s[i]))
            worst_rel = max(worst_rel, abs(closed.value - sampled[i]) / closed.value)
            assert abs(closed.location - s[i]) <= cell
            assert abs(closed.value - sampled[i]) <= 1e-8 * closed.value
    report(
        3,
        f"40 pairs, 1e6-point search: worst |loc err| = {worst_loc:.2e} (cell {cell:.0e}), "
        f"worst rel value err = {worst_rel:.2e} (tol 1e-8)",
    )


def test_criterion_4_greens_residual_convergence():
    noise_floor = 1e-9  # alpha = 2 solves are exact; their residual sits at rounding level
    summaries = []
    for alpha, beta in ((1.5, 0.25), (1.75, 0.5), (2.0, 0.0), (2.0, 1.0)):
        p = ProblemSpec(alpha, beta, 0.0, 1.0)
        residuals = []
        for n in (128, 256, 512, 1024):
            grid = Grid(0.0, 1.0, n)
            source = GridFunction(grid, np.ones(n + 1))
            rep = residual_check(solve_linear(p, source), p, source)
            residuals.append(rep.interior_residual_sup)
            if n == 1024:
                assert rep.bc_left == 0.0
                assert rep.bc_right < 1e-2
        for coarse, fine in zip(residuals, residuals[1:]):
            assert fine < coarse or fine < noise_floor
        assert residuals[-1] < 1e-2
        summaries.append(f"({alpha},{beta}): {residuals[-1]:.1e}")
    report(4, "finest interior residuals " + ", ".join(summaries) + " (tol 1e-2)")


def test_criterion_5_randomized_spectral_soundness():
    rng = np.random.default_rng(20240817)
    grid = Grid(0.0, 1.0, 256)
    worst = 0.0
    for alpha, beta in order_lattice():
        p = ProblemSpec(alpha, beta, 0.0, 1.0)
        weights = greens_weight_matrix(p, grid)
        rhs = lyapunov_rhs(p)
        for _ in range(200):
            raw = rng.uniform(0.0, 1.0, 257)
            scale = rhs / qplus_integral(GridFunction(grid, raw))
            m = OperatorMatrix(weights * (raw * scale)[np.newaxis, :], grid, "random")
            rep = spectral_radius(m, tol=1e-8, max_iter=5000)
            assert rep.converged
            assert rep.radius < 1.0 + 5e-3
            worst = max(worst, rep.radius)
    anchor = spectral_radius(
        discretize_operator(
            ProblemSpec(2.0, 0.0, 0.0, 1.0), GridFunction(grid, np.full(257, 4.0))
        ),
        tol=1e-10,
    )
    assert abs(anchor.radius - 4.0 / math.pi**2) <= 5e-3
    report(
        5,
        f"8000 randomized q at the threshold: max radius {worst:.6f} < 1+5e-3; "
        f"anchor q=4 radius {anchor.radius:.6f} vs 4/pi^2 (tol 5e-3)",
    )


def test_criterion_6_eigenvalue_anchors():
    radii = {}
    for alpha, beta, level in ((2.0, 0.0, math.pi**2), (2.0, 1.0, math.pi**2 / 4.0)):
        p = ProblemSpec(alpha, beta, 0.0, 1.0)
        grid = Grid(0.0, 1.0, 512)
        rep = spectral_radius(
            discretize_operator(p, GridFunction(grid, np.full(513, level))), tol=1e-10
        )
        assert rep.converged
        assert abs(rep.radius - 1.0) <= 1e-3
        radii[(alpha, beta)] = rep.radius
    report(6, f"radii {radii} within 1e-3 of 1")


def test_criterion_7_contraction_behavior():
    p = ProblemSpec(2.0, 0.0, 0.0, 1.0)
    problem = NonlinearProblem(p, lambda t, u: math.sin(u) + 1.0, lipschitz_k=1.0)
    tol = 1e-10
    result = picard_solve(problem, 512, tol=tol)
    assert result.converged
    assert abs(result.predicted_contraction - 0.125) <= 1e-12
    deltas = result.sup_norm_deltas
    ratios = deltas[2:] / deltas[1:-1]
    assert np.all(ratios <= result.predicted_contraction + 0.05)
    grid = Grid(0.0, 1.0, 512)
    other = picard_solve(problem, 512, tol=tol, initial=GridFunction(grid, np.ones(513)))
    gap = float(np.max(np.abs(result.solution.values - other.solution.values)))
    assert gap <= 10.0 * tol
    report(
        7,
        f"max step ratio {float(ratios.max()):.4f} <= 0.175; two-start gap {gap:.2e} <= 1e-9",
    )


def test_criterion_8_power_rule_conventions_and_semigroup():
    rng = np.random.default_rng(8)
    for _ in range(100):
        nu1 = float(rng.uniform(-0.9, 4.0))
        for k in (1.0, 2.0, 3.0):
            assert power_rule_derivative(nu1, nu1 + k, 0.6, 0.0) == 0.0

    knots_x = np.linspace(0.0, 1.0, 9)
    knots_y = np.array([0.0, 0.6, -0.4, 0.8, 0.1, -0.7, 0.5, 0.3, -0.2])
    grid = Grid(0.0, 1.0, 1024)
    u = GridFunction(grid, np.interp(grid.nodes, knots_x, knots_y))
    worst = 0.0
    for nu1 in (0.3, 0.7, 1.2):
        for nu2 in (0.3, 0.7, 1.2):
            err = float(
                np.max(
                    np.abs(
                        frac_integral(frac_integral(u, nu1), nu2).values
                        - frac_integral(u, nu1 + nu2).values
                    )
                )
            )
            worst = max(worst, err)
    assert worst <= 1e-3
    report(8, f"300 vanishing-derivative cases exact; semigroup worst error {worst:.2e} <= 1e-3")


def test_criterion_9_expression_parser():
    cases = {"2+3*4": 14.0, "2^3^2": 512.0, "-2^2": -4.0, "2^-3": 0.125, "2*3+4": 10.0}
    for source, expected in cases.items():
        assert evaluate(parse(source), t=0.0) == expected

    from test_expressions import random_tree

    rng = random.Random(999)
    for _ in range(1000):
        tree = random_tree(rng, depth=6)
        assert parse(to_source(tree)) == tree
    report(9, f"{len(cases)} precedence cases and 1000 print/parse round trips")
