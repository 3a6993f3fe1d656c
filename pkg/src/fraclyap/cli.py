"""Command-line front end: bound, solve, greens and spectral subcommands.

Runs are configured by a flat TOML file (``--config``) and/or flags, flags
winning.  Reports are deterministic JSON validating against the schemas
shipped under ``fraclyap/schema/v1``; tabular output (solution samples,
kernel samples, scan tables) is CSV.  Exit codes: 0 success (for ``bound``:
nonexistence certified), 10 bound inconclusive, 11 solve did not converge,
12 spectral estimate did not converge, 2 configuration error.
"""

from __future__ import annotations

import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError, ExpressionError, FracLyapError
from .expressions import evaluate, parse
from .fractional import Grid, GridFunction
from .greens import ProblemSpec, diag_argmax, greens_value, row_integral_max
from .lyapunov import Verdict, nonexistence_verdict
from .serialization import csv_lines, json_dumps
from .solver import (
    NonlinearProblem,
    contraction_threshold,
    picard_solve,
    residual_check,
)
from .spectral import (
    ConstantFamily,
    default_bump_family,
    discretize_operator,
    sharpness_scan,
    spectral_radius,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INCONCLUSIVE = 10
EXIT_SOLVE_DIVERGED = 11
EXIT_SPECTRAL_DIVERGED = 12

logger = logging.getLogger("fraclyap")

_CONFIG_KEYS = {
    "alpha", "beta", "a", "b", "n", "q", "f", "K", "k", "tol", "max_iter",
    "out", "format", "scan", "scan_family", "scan_samples", "t_samples", "s_samples",
}

_DEFAULTS = {
    "n": 512,
    "k": 0.0,
    "tol": 1e-10,
    "max_iter": 200,
    "format": "json",
    "scan": False,
    "scan_family": "bump",
    "scan_samples": 8,
    "t_samples": 65,
    "s_samples": 65,
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for one command invocation."""

    problem: ProblemSpec
    grid_n: int
    q_expr: str | None
    f_expr: str | None
    lipschitz_k: float | None
    boundary_k: float
    tol: float
    max_iter: int
    out: Path | None
    format: str
    scan: bool
    scan_family: str
    scan_samples: int
    t_samples: int
    s_samples: int


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as stream:
            data = tomllib.load(stream)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _resolve(flags: dict) -> RunConfig:
    """Merge defaults, config file and flags (flags win) into a RunConfig."""
    settings = dict(_DEFAULTS)
    config_path = flags.pop("config", None)
    if config_path:
        settings.update(_load_config_file(config_path))
    for key, value in flags.items():
        if value is not None:
            settings[key] = value

    for key in ("alpha", "beta", "a", "b"):
        if key not in settings:
            raise ConfigError(f"missing required setting '{key}' (flag --{key} or config key)")
    try:
        problem = ProblemSpec(
            alpha=float(settings["alpha"]),
            beta=float(settings["beta"]),
            a=float(settings["a"]),
            b=float(settings["b"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    grid_n = int(settings["n"])
    if grid_n < 16:
        raise ConfigError(f"n must be at least 16, got {grid_n}")
    tol = float(settings["tol"])
    if not (math.isfinite(tol) and tol > 0.0):
        raise ConfigError(f"tol must be positive, got {tol}")
    max_iter = int(settings["max_iter"])
    if max_iter < 1:
        raise ConfigError(f"max_iter must be >= 1, got {max_iter}")
    fmt = str(settings["format"])
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format must be 'json' or 'csv', got {fmt!r}")
    scan_family = str(settings["scan_family"])
    if scan_family not in ("constant", "bump"):
        raise ConfigError(f"scan_family must be 'constant' or 'bump', got {scan_family!r}")
    t_samples, s_samples = int(settings["t_samples"]), int(settings["s_samples"])
    if t_samples < 2 or s_samples < 2:
        raise ConfigError("t_samples and s_samples must be at least 2")

    out = settings.get("out")
    return RunConfig(
        problem=problem,
        grid_n=grid_n,
        q_expr=settings.get("q"),
        f_expr=settings.get("f"),
        lipschitz_k=None if settings.get("K") is None else float(settings["K"]),
        boundary_k=float(settings["k"]),
        tol=tol,
        max_iter=max_iter,
        out=None if out is None else Path(out),
        format=fmt,
        scan=bool(settings["scan"]),
        scan_family=scan_family,
        scan_samples=int(settings["scan_samples"]),
        t_samples=t_samples,
        s_samples=s_samples,
    )


def _sample_expression(source: str, grid: Grid, what: str) -> GridFunction:
    try:
        expr = parse(source)
        values = np.asarray([evaluate(expr, float(t)) for t in grid.nodes])
        return GridFunction(grid, values)
    except (ExpressionError, FracLyapError) as exc:
        raise ConfigError(f"cannot evaluate {what} expression {source!r}: {exc}") from exc


def _out_base(out: Path) -> Path:
    base = out.with_suffix("") if out.suffix in (".json", ".csv") else out
    if base.parent and not base.parent.exists():
        base.parent.mkdir(parents=True, exist_ok=True)
    return base


def _sibling(base: Path, ext: str) -> Path:
    return base.parent / (base.name + ext)


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="")
    logger.info("wrote %s", path)


def _emit_report(report: dict, config: RunConfig, csv_row: tuple | None = None) -> None:
    """Write the JSON report to <out>.json or stdout; csv format uses the flat row."""
    if config.format == "csv" and csv_row is not None:
        text = csv_lines(csv_row[0], [csv_row[1]])
        suffix = ".csv"
    else:
        text = json_dumps(report)
        suffix = ".json"
    if config.out is None:
        sys.stdout.write(text)
    else:
        _write(_sibling(_out_base(config.out), suffix), text)


def _problem_dict(p: ProblemSpec) -> dict:
    return {"alpha": p.alpha, "beta": p.beta, "a": p.a, "b": p.b}


def _fail_config(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_CONFIG)


def _common_options(fn):
    options = [
        click.option("--config", type=click.Path(), default=None, help="TOML config file."),
        click.option("--alpha", type=float, default=None, help="Equation order in (1, 2]."),
        click.option("--beta", type=float, default=None, help="Boundary derivative order in [0, alpha-1]."),
        click.option("--a", type=float, default=None, help="Left endpoint."),
        click.option("--b", type=float, default=None, help="Right endpoint."),
        click.option("--n", type=int, default=None, help="Grid subintervals (default 512)."),
        click.option("--tol", type=float, default=None, help="Iteration tolerance (default 1e-10)."),
        click.option("--max-iter", "max_iter", type=int, default=None, help="Iteration cap (default 200)."),
        click.option("--out", type=click.Path(), default=None, help="Output base path."),
        click.option("--format", "format", type=click.Choice(["json", "csv"]), default=None,
                     help="Report format (default json)."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
def main() -> None:
    """Nonexistence bounds and solvers for fractional two-point problems."""
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("FRACLYAP_LOG", "error").lower(), logging.ERROR
    )
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("fraclyap: %(levelname)s: %(message)s"))
    logger.handlers.clear()
    logger.addHandler(handler)
    logger.setLevel(level)


@main.command()
@_common_options
@click.option("--q", "q", default=None, help="Coefficient q(t) as an expression in t.")
def bound(**flags) -> None:
    """Evaluate the nonexistence certificate for D^alpha u + q u = 0.

    Exit code 0 when nonexistence is certified, 10 when inconclusive.
    """
    try:
        config = _resolve(flags)
        if config.q_expr is None:
            raise ConfigError("bound requires a coefficient expression (--q or config key q)")
        grid = Grid(config.problem.a, config.problem.b, config.grid_n)
        q = _sample_expression(config.q_expr, grid, "q")
        report_data = nonexistence_verdict(config.problem, q)
    except (ConfigError, FracLyapError) as exc:
        _fail_config(exc)
    report = {
        "schema": "fraclyap.bound.v1",
        "problem": _problem_dict(config.problem),
        "grid_n": config.grid_n,
        "q": config.q_expr,
        "rhs": report_data.rhs,
        "q_plus_integral": report_data.q_plus_integral,
        "verdict": report_data.verdict.value,
        "s_star": {"location": report_data.s_star.location, "value": report_data.s_star.value},
    }
    csv_row = (
        ("rhs", "q_plus_integral", "verdict", "s_star_location", "s_star_value"),
        (report_data.rhs, report_data.q_plus_integral, report_data.verdict.value,
         report_data.s_star.location, report_data.s_star.value),
    )
    _emit_report(report, config, csv_row)
    sys.exit(EXIT_OK if report_data.verdict is Verdict.NO_NONTRIVIAL_SOLUTION else EXIT_INCONCLUSIVE)


@main.command()
@_common_options
@click.option("--f", "f", default=None, help="Source f(t, u) as an expression.")
@click.option("--K", "K", type=float, default=None, help="Lipschitz constant of f in u.")
@click.option("--k", "k", type=float, default=None, help="Boundary value D^beta u(b) (default 0).")
def solve(**flags) -> None:
    """Solve D^alpha u + f(t, u) = 0 by Picard iteration.

    Writes <out>.csv with columns t, u and <out>.json with diagnostics.
    Exit code 11 if the iteration did not reach the tolerance (outputs are
    still written).
    """
    try:
        config = _resolve(flags)
        if config.f_expr is None:
            raise ConfigError("solve requires a source expression (--f or config key f)")
        if config.lipschitz_k is None:
            raise ConfigError("solve requires a Lipschitz constant (--K or config key K)")
        if config.out is None:
            raise ConfigError("solve requires an output base path (--out or config key out)")
        f_expr = parse(config.f_expr)
        problem = NonlinearProblem(
            spec=config.problem,
            f=f_expr,
            lipschitz_k=config.lipschitz_k,
            boundary_k=config.boundary_k,
        )
        result = picard_solve(problem, config.grid_n, tol=config.tol, max_iter=config.max_iter)
        solution = result.solution
        source = GridFunction(
            solution.grid,
            np.asarray(
                [
                    evaluate(f_expr, float(t), float(v))
                    for t, v in zip(solution.grid.nodes, solution.values)
                ]
            ),
        )
        residuals = residual_check(solution, config.problem, source)
    except (ConfigError, FracLyapError) as exc:
        _fail_config(exc)

    base = _out_base(config.out)
    _write(
        _sibling(base, ".csv"),
        csv_lines(("t", "u"), zip(solution.grid.nodes.tolist(), solution.values.tolist())),
    )
    report = {
        "schema": "fraclyap.solve.v1",
        "problem": _problem_dict(config.problem),
        "grid_n": config.grid_n,
        "f": config.f_expr,
        "lipschitz_k": config.lipschitz_k,
        "boundary_k": config.boundary_k,
        "tol": config.tol,
        "max_iter": config.max_iter,
        "converged": result.converged,
        "iterations": result.iterations,
        "predicted_contraction": result.predicted_contraction,
        "contraction_threshold": contraction_threshold(config.problem, config.lipschitz_k),
        "sup_norm_deltas": result.sup_norm_deltas.tolist(),
        "residuals": {
            "interior_residual_sup": residuals.interior_residual_sup,
            "bc_left": residuals.bc_left,
            "bc_right": residuals.bc_right,
            "grid_n": residuals.grid_n,
        },
    }
    _write(_sibling(base, ".json"), json_dumps(report))
    sys.exit(EXIT_OK if result.converged else EXIT_SOLVE_DIVERGED)


@main.command()
@_common_options
@click.option("--t-samples", "t_samples", type=int, default=None, help="Rows in the (t, s) sample grid.")
@click.option("--s-samples", "s_samples", type=int, default=None, help="Columns in the (t, s) sample grid.")
def greens(**flags) -> None:
    """Sample the Green's function on a (t, s) grid.

    Writes <out>.csv with columns t, s, G and <out>.json with the extremal
    points (diagonal maximizer, row-integral maximizer).
    """
    try:
        config = _resolve(flags)
        if config.out is None:
            raise ConfigError("greens requires an output base path (--out or config key out)")
        p = config.problem
        ts = np.linspace(p.a, p.b, config.t_samples)
        ss = np.linspace(p.a, p.b, config.s_samples)
        rows = [
            (float(t), float(s), greens_value(float(t), float(s), p)) for t in ts for s in ss
        ]
    except (ConfigError, FracLyapError) as exc:
        _fail_config(exc)

    s_star = diag_argmax(config.problem)
    t_star = row_integral_max(config.problem)
    base = _out_base(config.out)
    _write(_sibling(base, ".csv"), csv_lines(("t", "s", "G"), rows))
    report = {
        "schema": "fraclyap.greens.v1",
        "problem": _problem_dict(config.problem),
        "t_samples": config.t_samples,
        "s_samples": config.s_samples,
        "s_star": {"location": s_star.location, "value": s_star.value},
        "t_star": {"location": t_star.location, "value": t_star.value},
        "diag_max": s_star.value,
        "row_integral_max": t_star.value,
    }
    _write(_sibling(base, ".json"), json_dumps(report))
    sys.exit(EXIT_OK)


@main.command()
@_common_options
@click.option("--q", "q", default=None, help="Coefficient q(t) as an expression in t.")
@click.option("--scan/--no-scan", "scan", default=None, help="Also emit a sharpness scan CSV.")
@click.option("--scan-family", "scan_family", type=click.Choice(["constant", "bump"]), default=None,
              help="Coefficient family for the scan (default bump at the diagonal maximizer).")
@click.option("--scan-samples", "scan_samples", type=int, default=None,
              help="Number of scan members (bump family; default 8).")
def spectral(**flags) -> None:
    """Estimate the spectral radius of u -> integral G(t,s) q(s) u(s) ds.

    A radius near 1 flags a coefficient at the edge of solvability; the
    certificate guarantees radius < 1 whenever the q_+ integral is at or
    below the bound.  Exit code 12 if power iteration did not converge.
    With --scan, writes <out>.scan.csv for a family pinned to the bound.
    """
    try:
        config = _resolve(flags)
        if config.q_expr is None:
            raise ConfigError("spectral requires a coefficient expression (--q or config key q)")
        if config.scan and config.out is None:
            raise ConfigError("--scan writes a CSV table and needs --out")
        grid = Grid(config.problem.a, config.problem.b, config.grid_n)
        q = _sample_expression(config.q_expr, grid, "q")
        operator = discretize_operator(config.problem, q, q_ref=config.q_expr)
        report_data = spectral_radius(operator, tol=config.tol, max_iter=config.max_iter)
        scan_rows = None
        if config.scan:
            family = (
                ConstantFamily()
                if config.scan_family == "constant"
                else default_bump_family(config.problem)
            )
            scan_rows = sharpness_scan(
                config.problem, family, config.scan_samples, grid_n=config.grid_n
            )
    except (ConfigError, FracLyapError) as exc:
        _fail_config(exc)

    report = {
        "schema": "fraclyap.spectral.v1",
        "problem": _problem_dict(config.problem),
        "grid_n": config.grid_n,
        "q": config.q_expr,
        "radius": report_data.radius,
        "iterations": report_data.iterations,
        "converged": report_data.converged,
        "residual": report_data.residual,
    }
    if scan_rows is not None:
        report["scan"] = [
            {
                "parameter": row.parameter,
                "scaled_integral": row.scaled_integral,
                "radius": row.radius,
                "converged": row.converged,
            }
            for row in scan_rows
        ]
        base = _out_base(config.out)
        _write(
            _sibling(base, ".scan.csv"),
            csv_lines(
                ("parameter", "scaled_integral", "radius", "converged"),
                [(r.parameter, r.scaled_integral, r.radius, r.converged) for r in scan_rows],
            ),
        )
    _emit_report(report, config)
    sys.exit(EXIT_OK if report_data.converged else EXIT_SPECTRAL_DIVERGED)


if __name__ == "__main__":
    main()
