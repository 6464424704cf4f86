"""Command-line interface for the sparse recovery toolkit."""

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from ..analysis import delta_q, gnsp_falsify, irwin_hall_check, recovery_bound, sparsity_sweep
from ..config import settings
from ..errors import SparseRecoveryError
from ..harness import (
    CDF_HEADER,
    CURVE_HEADER,
    L1_BASELINE,
    MEASURE_HEADER,
    PDF_HEADER,
    WEIGHT_HEADER,
    ExperimentConfig,
    aggregate_success,
    atomic_write,
    compressible_signal,
    csv_text,
    run_sweep,
    series_rows,
    trial_problem,
    write_sweep_outputs,
)
from ..penalties import cdf, irl1_weight, parse_penalty_spec, pdf, scaled_penalty_curve
from ..solvers import AdmmConfig, Irl1Config, MeasurementProblem, check_irl1_model, irl1, solve_l1
from ..utils.logging import get_logger, setup_logging

logger = get_logger(__name__)
console = Console(stderr=True)

app = typer.Typer(
    name="sparse-recovery",
    help="Sparse recovery with CDF-induced nonconvex penalties: solvers, verifiers and benchmark sweeps.",
    add_completion=False,
    no_args_is_help=True,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2


@dataclass
class CliState:
    """Global options shared by every subcommand."""
    seed: Optional[int] = None
    out: Optional[Path] = None
    quiet: bool = False

    @property
    def seed_or_default(self) -> int:
        return 0 if self.seed is None else self.seed


state = CliState()


def fail(message: str):
    """Print an error to standard error and exit with the usage code."""
    console.print(f"❌ {message}", style="red", markup=False)
    raise typer.Exit(EXIT_USAGE)


def load_matrix(path: Path) -> np.ndarray:
    """Headerless comma-separated matrix, one row per line."""
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as e:
        fail(f"Cannot read matrix {path}: {e}")


def load_vector(path: Path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=1).ravel()
    except (OSError, ValueError) as e:
        fail(f"Cannot read vector {path}: {e}")


def parse_floats(text: str, what: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        fail(f"{what} must be a comma-separated list of numbers, got {text!r}")


def parse_assignments(items: List[str]) -> Dict[str, float]:
    params = {}
    for item in items:
        name, sep, value = item.partition("=")
        try:
            if not sep:
                raise ValueError
            params[name.strip()] = float(value)
        except ValueError:
            fail(f"expected name=value, got {item!r}")
    return params


def emit(text: str, output: Optional[Path]):
    """Write command output to a file (atomically) or to standard output."""
    target = output or state.out
    if target is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with atomic_write(target) as handle:
        handle.write(text)
    if not state.quiet:
        console.print(f"✅ Wrote {target}", style="green")


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


@app.callback()
def main_callback(
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed for simulated problems and Monte Carlo checks"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file (output directory for sweep)"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Only log warnings and errors"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Log level (DEBUG, INFO, WARNING, ...)"),
):
    """Global options."""
    if seed is not None and seed < 0:
        fail("--seed must be nonnegative")
    state.seed, state.out, state.quiet = seed, out, quiet
    level = log_level or ("WARNING" if quiet else settings.log_level)
    if level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        fail(f"Unknown log level {log_level!r}")
    setup_logging(level=level)


@app.command()
def solve(
    matrix: Optional[Path] = typer.Option(None, "--matrix", help="Measurement matrix CSV (no header)"),
    y_file: Optional[Path] = typer.Option(None, "--y", help="Observation vector CSV"),
    truth_file: Optional[Path] = typer.Option(None, "--truth", help="Ground-truth vector CSV, enables rel_error"),
    simulate: bool = typer.Option(False, "--simulate", help="Generate a seeded noiseless Gaussian problem"),
    n_dim: int = typer.Option(256, "--N", help="Signal length for --simulate"),
    m_dim: int = typer.Option(64, "--m", help="Number of measurements for --simulate"),
    sparsity: int = typer.Option(10, "--s", help="Sparsity for --simulate"),
    penalty_spec: str = typer.Option("weibull(k=1,sigma=1)", "--penalty", help="Penalty spec, or 'l1' for the lasso"),
    lam: float = typer.Option(1e-7, "--lambda", help="Regularization weight"),
    max_outer: Optional[int] = typer.Option(None, "--max-outer", help="IRL1 outer iterations"),
    eps: Optional[float] = typer.Option(None, "--eps", help="IRL1 weight smoothing"),
    rho: Optional[float] = typer.Option(
        None, "--rho",
        help="ADMM penalty parameter, multiplied by lambda times the largest weight unless SPARSEREC_ADMM_RELATIVE_RHO=false",
    ),
    max_iter: Optional[int] = typer.Option(None, "--max-iter", help="ADMM iterations per solve"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Result JSON path (default: standard output)"),
):
    """Recover a sparse vector with IRL1 (or the plain lasso) and write the result as JSON."""
    try:
        model = None
        if penalty_spec.strip().lower() != L1_BASELINE:
            model = parse_penalty_spec(penalty_spec)
            check_irl1_model(model)

        admm_overrides = {k: v for k, v in (("rho", rho), ("max_iter", max_iter)) if v is not None}
        irl1_overrides = {k: v for k, v in (("max_outer", max_outer), ("eps", eps)) if v is not None}
        admm_cfg = AdmmConfig.from_settings(**admm_overrides)
        irl1_cfg = Irl1Config.from_settings(lam, **irl1_overrides)

        if simulate:
            problem = trial_problem(m_dim, n_dim, sparsity, state.seed_or_default)
        else:
            if matrix is None or y_file is None:
                fail("Provide --matrix and --y, or --simulate")
            truth = load_vector(truth_file) if truth_file else None
            problem = MeasurementProblem(A=load_matrix(matrix), y=load_vector(y_file), truth=truth)

        if model is None:
            result = solve_l1(problem, lam, admm_cfg)
        else:
            result = irl1(problem, model, irl1_cfg, admm_cfg)
    except ValidationError as e:
        fail(f"Invalid solver options: {e}")
    except SparseRecoveryError as e:
        fail(str(e))

    payload = result.to_dict()
    payload.update({
        "penalty": L1_BASELINE if model is None else model.spec,
        "lambda": lam,
        "seed": state.seed_or_default if simulate else None,
        "m": problem.m,
        "N": problem.N,
    })
    emit(to_json(payload), output)

    if not result.converged:
        console.print(
            f"⚠️ Solver stopped without converging ({result.stop_reason.value}) after {result.outer_iters} outer iterations",
            style="yellow", markup=False,
        )
        raise typer.Exit(EXIT_NOT_CONVERGED)


@app.command()
def sweep(
    config: Path = typer.Option(..., "--config", help="Experiment config JSON"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="Directory for results (default: --out or ./results)"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes"),
):
    """Run a replicated success-rate sweep and write results, plot data and a manifest."""
    if not config.is_file():
        fail(f"Config file not found: {config}")
    try:
        cfg = ExperimentConfig.from_json_file(config)
        updates = {}
        if state.seed is not None:
            updates["master_seed"] = state.seed
        if workers is not None:
            updates["workers"] = workers
        if updates:
            cfg = ExperimentConfig.model_validate({**cfg.to_json_dict(), **updates})
    except ValidationError as e:
        fail(f"Invalid config: {e}")
    except SparseRecoveryError as e:
        fail(str(e))

    out_dir = output_dir or state.out or Path("results")
    total = len(cfg.penalties) * len(cfg.sparsity_grid) * cfg.replicates

    with Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
        disable=state.quiet,
    ) as progress:
        task = progress.add_task("Running trials", total=total)
        records = run_sweep(cfg, progress=lambda n: progress.advance(task, n))

    paths = write_sweep_outputs(out_dir, cfg, records)

    if not state.quiet:
        table = Table(title="Success rates")
        table.add_column("Penalty", style="cyan")
        table.add_column("s", style="white")
        table.add_column("Rate", style="green")
        for cell in aggregate_success(records):
            table.add_row(cell.penalty, str(cell.s), f"{cell.rate:.2f}")
        console.print(table)
        console.print(f"✅ Results written to {paths['results'].parent}", style="green")


@app.command()
def penalty(
    spec: str = typer.Argument(..., help="Penalty spec, e.g. 'weibull(k=0.5,sigma=1)'"),
    curve: bool = typer.Option(False, "--curve", help="Emit F(t)/F(1) (default)"),
    weights: bool = typer.Option(False, "--weights", help="Emit IRL1 weights f(t + eps)"),
    density: bool = typer.Option(False, "--pdf", help="Emit the density f(t)"),
    distribution: bool = typer.Option(False, "--cdf", help="Emit the distribution function F(t)"),
    t_min: float = typer.Option(0.0, "--t-min", help="Grid start"),
    t_max: float = typer.Option(2.0, "--t-max", help="Grid end"),
    points: int = typer.Option(201, "--points", help="Grid size"),
    eps: Optional[float] = typer.Option(None, "--eps", help="Weight smoothing (default from settings)"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="CSV path (default: standard output)"),
):
    """Emit a scaled penalty curve, the density, the CDF or reweighting weights on a grid as CSV."""
    if sum((curve, weights, density, distribution)) > 1:
        fail("Choose one of --curve, --weights, --pdf and --cdf")
    if points < 1 or t_min < 0 or t_max < t_min:
        fail("Grid needs 0 <= t-min <= t-max and at least one point")
    try:
        model = parse_penalty_spec(spec)
        grid = np.linspace(t_min, t_max, points)
        if points > 1 and not np.any(grid == 1.0) and t_min <= 1.0 <= t_max:
            grid = np.union1d(grid, [1.0])
        if weights:
            header = WEIGHT_HEADER
            values = irl1_weight(model, grid, settings.irl1_eps if eps is None else eps)
        elif density:
            header = PDF_HEADER
            values = pdf(model, grid)
        elif distribution:
            header = CDF_HEADER
            values = cdf(model, grid)
        else:
            header = CURVE_HEADER
            values = scaled_penalty_curve(model, grid)
    except SparseRecoveryError as e:
        fail(str(e))
    emit(csv_text(header, series_rows(grid, values)), output)


@app.command()
def measure(
    family: str = typer.Option(..., "--family", help="Distribution family, e.g. weibull"),
    theta: str = typer.Option(..., "--theta", help="Comma-separated theta grid"),
    signal: Optional[Path] = typer.Option(None, "--signal", help="Signal vector CSV"),
    compressible: Optional[int] = typer.Option(None, "--compressible", help="Use the compressible signal j^-exponent of this length"),
    exponent: float = typer.Option(2.0, "--exponent", help="Decay exponent for --compressible"),
    base: List[str] = typer.Option([], "--base", help="Fixed parameter name=value (repeatable)"),
    param: Optional[str] = typer.Option(None, "--param", help="Parameter set to theta (default: the family's scale axis)"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="CSV path (default: standard output)"),
):
    """Emit J_theta(x) over a theta grid as CSV; invalid grid values give NaN rows."""
    if (signal is None) == (compressible is None):
        fail("Provide exactly one of --signal and --compressible")
    grid = parse_floats(theta, "--theta")
    if not grid:
        fail("--theta must not be empty")
    base_params = parse_assignments(base)
    try:
        x = load_vector(signal) if signal is not None else compressible_signal(compressible, exponent)
        result = sparsity_sweep(family, grid, x, base_params=base_params, theta_param=param)
    except SparseRecoveryError as e:
        fail(str(e))

    for point in result.points:
        if not point.ok:
            console.print(f"⚠️ theta={point.theta:g}: {point.error}", style="yellow", markup=False)
    emit(csv_text(MEASURE_HEADER, series_rows(result.thetas, result.values)), output)


@app.command()
def verify(
    gnsp: bool = typer.Option(False, "--gnsp", help="Falsify the generalized null space property"),
    ssp: bool = typer.Option(False, "--ssp", help="Estimate Delta_q (and the recovery bound with --penalty and --s)"),
    irwin_hall: bool = typer.Option(False, "--irwin-hall", help="Monte Carlo Irwin-Hall check"),
    matrix: Optional[Path] = typer.Option(None, "--matrix", help="Matrix CSV for --gnsp/--ssp"),
    penalty_spec: Optional[str] = typer.Option(None, "--penalty", help="Penalty spec"),
    sparsity: Optional[int] = typer.Option(None, "--s", help="Sparsity level"),
    budget: int = typer.Option(10000, "--budget", help="Kernel samples for --gnsp"),
    q: str = typer.Option("inf", "--q", help="Norm index q in (1, inf]"),
    grid: int = typer.Option(3600, "--grid", help="Angular grid for --ssp"),
    samples: int = typer.Option(100000, "--samples", help="Monte Carlo samples"),
    n_dim: Optional[int] = typer.Option(None, "--N", help="Vector length for --irwin-hall / the bound"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Report JSON path (default: standard output)"),
):
    """Run one theory check and write its report as JSON."""
    if sum((gnsp, ssp, irwin_hall)) != 1:
        fail("Choose exactly one of --gnsp, --ssp and --irwin-hall")
    seed = state.seed_or_default

    try:
        model = parse_penalty_spec(penalty_spec) if penalty_spec else None
        if gnsp:
            if matrix is None or sparsity is None:
                fail("--gnsp needs --matrix and --s")
            model = model or parse_penalty_spec("exp(sigma=1)")
            report = gnsp_falsify(load_matrix(matrix), sparsity, model, budget, seed).to_dict()
        elif ssp:
            if matrix is None:
                fail("--ssp needs --matrix")
            try:
                q_value = float(q)
            except ValueError:
                fail(f"--q must be a number or 'inf', got {q!r}")
            A = load_matrix(matrix)
            estimate = delta_q(A, q_value, grid=grid, samples=samples, rng_seed=seed)
            report = {"check": "ssp", **estimate.to_dict()}
            if model is not None and sparsity is not None and np.isfinite(estimate.value):
                N = n_dim or A.shape[1]
                report["bound"] = recovery_bound(estimate.value, q_value, N, model, sparsity).to_dict()
        else:
            if model is None or n_dim is None:
                fail("--irwin-hall needs --penalty and --N")
            report = irwin_hall_check(model, n_dim, samples, seed).to_dict()
    except SparseRecoveryError as e:
        fail(str(e))

    emit(to_json(report), output)


def main():
    """Console entry point; click usage errors exit with code 1."""
    try:
        code = app(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        console.print("Aborted", style="red")
        sys.exit(EXIT_USAGE)
    sys.exit(code or EXIT_OK)


if __name__ == "__main__":
    main()
