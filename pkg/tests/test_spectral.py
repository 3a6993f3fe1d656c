"""Nystrom operator, power iteration, and the sharpness scan."""

import math

import numpy as np

from fraclyap import (
    BumpFamily,
    ConstantFamily,
    Grid,
    GridFunction,
    OperatorMatrix,
    ProblemSpec,
    diag_argmax,
    discretize_operator,
    lyapunov_rhs,
    qplus_integral,
    sharpness_scan,
    spectral_radius,
)

CLASSICAL = ProblemSpec(2.0, 0.0, 0.0, 1.0)


def constant_q(p: ProblemSpec, value: float, n: int) -> GridFunction:
    grid = Grid(p.a, p.b, n)
    return GridFunction(grid, np.full(n + 1, value))


def test_zero_coefficient_gives_zero_operator():
    m = discretize_operator(CLASSICAL, constant_q(CLASSICAL, 0.0, 64))
    assert np.max(np.abs(m.entries)) == 0.0
    report = spectral_radius(m)
    assert report.converged and report.radius == 0.0 and report.residual == 0.0


def test_first_row_vanishes():
    m = discretize_operator(CLASSICAL, constant_q(CLASSICAL, 3.0, 64))
    assert np.max(np.abs(m.entries[0, :])) == 0.0


def test_entries_nonnegative_for_nonnegative_q():
    rng = np.random.default_rng(11)
    p = ProblemSpec(1.5, 0.25, 0.0, 1.0)
    grid = Grid(0.0, 1.0, 64)
    q = GridFunction(grid, rng.uniform(0.0, 3.0, 65))
    m = discretize_operator(p, q)
    assert np.min(m.entries) >= 0.0


def test_classical_eigenpair_action():
    # u'' + pi^2 u = 0 with these boundary conditions has eigenfunction
    # sin(pi t), so the q = 1 operator maps it to itself over pi^2
    m = discretize_operator(CLASSICAL, constant_q(CLASSICAL, 1.0, 256))
    v = np.sin(math.pi * m.grid.nodes)
    assert np.max(np.abs(m.entries @ v - v / math.pi**2)) <= 1e-5


def test_power_iteration_matches_dense_eigensolver():
    rng = np.random.default_rng(5)
    for alpha, beta in ((1.5, 0.25), (2.0, 1.0)):
        p = ProblemSpec(alpha, beta, 0.0, 1.0)
        grid = Grid(0.0, 1.0, 64)
        q = GridFunction(grid, 1.0 + rng.uniform(0.0, 2.0, 65))
        m = discretize_operator(p, q)
        report = spectral_radius(m, tol=1e-12, max_iter=10_000)
        assert report.converged
        oracle = float(np.max(np.abs(np.linalg.eigvals(m.entries))))
        assert abs(report.radius - oracle) <= 1e-10


def test_report_residual_respects_declared_tolerance():
    m = discretize_operator(CLASSICAL, constant_q(CLASSICAL, math.pi**2, 128))
    report = spectral_radius(m, tol=1e-9)
    assert report.converged
    assert report.residual <= 1e-9


def test_eigenvalue_anchor_dirichlet():
    m = discretize_operator(CLASSICAL, constant_q(CLASSICAL, math.pi**2, 512))
    report = spectral_radius(m, tol=1e-10)
    assert report.converged
    assert abs(report.radius - 1.0) <= 1e-3


def test_eigenvalue_anchor_mixed_condition():
    # u'' + lambda u = 0, u(0) = 0, u'(1) = 0 starts at lambda = (pi/2)^2
    p = ProblemSpec(2.0, 1.0, 0.0, 1.0)
    m = discretize_operator(p, constant_q(p, math.pi**2 / 4.0, 512))
    report = spectral_radius(m, tol=1e-10)
    assert report.converged
    assert abs(report.radius - 1.0) <= 1e-3


def test_radius_monotone_in_coefficient():
    rng = np.random.default_rng(23)
    p = ProblemSpec(1.7, 0.2, 0.0, 1.0)
    grid = Grid(0.0, 1.0, 96)
    lower = rng.uniform(0.0, 2.0, 97)
    upper = lower + rng.uniform(0.0, 1.0, 97)
    r_low = spectral_radius(discretize_operator(p, GridFunction(grid, lower)), tol=1e-12).radius
    r_high = spectral_radius(discretize_operator(p, GridFunction(grid, upper)), tol=1e-12).radius
    assert r_low <= r_high + 1e-9


def test_nystrom_refinement_convergence():
    p = ProblemSpec(1.5, 0.25, 0.0, 1.0)
    radii = {}
    for n in (64, 128, 256):
        q = constant_q(p, 1.0, n)
        q = GridFunction(q.grid, 1.0 + q.grid.nodes)
        radii[n] = spectral_radius(discretize_operator(p, q), tol=1e-12, max_iter=10_000).radius
    first = abs(radii[128] - radii[64])
    second = abs(radii[256] - radii[128])
    assert first <= 1.0 / 64.0
    assert second <= first / 2.0


def test_non_convergence_is_reported_not_raised():
    # a pure rotation block has a complex dominant pair; the Rayleigh
    # estimate cannot settle
    grid = Grid(0.0, 1.0, 2)
    entries = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    report = spectral_radius(OperatorMatrix(entries, grid, "rotation"), tol=1e-12, max_iter=50)
    assert not report.converged
    assert report.iterations == 50


def test_scan_constant_family_classical():
    rows = sharpness_scan(CLASSICAL, ConstantFamily(), samples=3, grid_n=256)
    assert len(rows) == 1
    row = rows[0]
    assert abs(row.scaled_integral - lyapunov_rhs(CLASSICAL)) <= 1e-12
    assert abs(row.parameter - 4.0) <= 1e-12
    assert row.converged
    assert abs(row.radius - 4.0 / math.pi**2) <= 5e-3


def test_scan_bump_family_radius_rises_as_width_shrinks():
    p = CLASSICAL
    family = BumpFamily(center=diag_argmax(p).location, width=0.5)
    rows = sharpness_scan(p, family, samples=5, grid_n=256)
    assert len(rows) == 5
    radii = [row.radius for row in rows]
    assert all(r2 > r1 for r1, r2 in zip(radii, radii[1:]))
    assert all(row.radius < 1.0 for row in rows)
    assert all(abs(row.scaled_integral - lyapunov_rhs(p)) <= 1e-12 for row in rows)
    widths = [row.parameter for row in rows]
    assert widths == [0.5 / 2.0**j for j in range(5)]


def test_half_scaled_coefficient_has_smaller_radius():
    p = ProblemSpec(1.6, 0.3, 0.0, 1.0)
    grid = Grid(0.0, 1.0, 128)
    rhs = lyapunov_rhs(p)
    full = GridFunction(grid, np.full(129, rhs / p.length))
    half = GridFunction(grid, full.values / 2.0)
    r_full = spectral_radius(discretize_operator(p, full), tol=1e-12).radius
    r_half = spectral_radius(discretize_operator(p, half), tol=1e-12).radius
    assert r_half < r_full


def test_scaled_family_respects_threshold_radius_bound():
    # spot-check of the certificate's spectral consequence (full sweep in
    # the acceptance suite): at the threshold scaling the radius stays
    # below 1 up to discretization tolerance
    rng = np.random.default_rng(77)
    for alpha, beta in ((1.3, 0.1), (1.9, 0.85)):
        p = ProblemSpec(alpha, beta, 0.0, 1.0)
        grid = Grid(0.0, 1.0, 256)
        rhs = lyapunov_rhs(p)
        for _ in range(5):
            raw = rng.uniform(0.0, 1.0, 257)
            q = GridFunction(grid, raw)
            q = GridFunction(grid, raw * (rhs / qplus_integral(q)))
            report = spectral_radius(discretize_operator(p, q), tol=1e-8, max_iter=5000)
            assert report.converged
            assert report.radius < 1.0 + 5e-3
