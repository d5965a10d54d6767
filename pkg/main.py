"""Typer CLI for the Simon-GQML laboratory."""

import asyncio
import logging
import sys
from pathlib import Path
from typing import Any, Optional

import typer
from rich.console import Console
from rich.table import Table
from rich.progress import Progress, SpinnerColumn, TextColumn

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from config import ExperimentConfig, load_settings
from core.errors import ConfigError, LabError

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

app = typer.Typer(
    name="simonlab",
    help="Simon's-problem quantum machine learning experiments",
)
console = Console()

# Shared options
N_OPT = typer.Option(None, "--n", help="Input/output bit width")
M_OPT = typer.Option(None, "--m", help="Number of functions (even)")
MODE_OPT = typer.Option(None, "--mode", help="2:1 generator mode: linear or table")
SHOTS_OPT = typer.Option(None, "--shots", help="Shots per function")
SHOT_GRID_OPT = typer.Option(None, "--shot-grid", help="Comma-separated shot budgets for the sweep")
SEED_OPT = typer.Option(None, "--seed", help="Base seed")
NUM_SEEDS_OPT = typer.Option(None, "--num-seeds", help="Number of consecutive seeds from the base seed")
NU_OPT = typer.Option(None, "--nu", help="One-class SVM nu")
OCSVM_KERNEL_OPT = typer.Option(None, "--ocsvm-kernel", help="One-class SVM kernel: linear or rbf")
KPCA_KERNEL_OPT = typer.Option(None, "--kpca-kernel", help="Kernel PCA kernel: linear or rbf")
FEATURES_OPT = typer.Option(None, "--features", help="Feature set: mean_variance or mean")
WORKERS_OPT = typer.Option(None, "--workers", "-w", help="Worker threads")
OUTPUT_OPT = typer.Option(None, "--output", "-o", help="Output directory")
MANIFEST_OPT = typer.Option(None, "--manifest", help="Manifest path (default <output>/manifest.json)")
CONFIG_OPT = typer.Option(None, "--config", "-c", help="TOML config file")
VERBOSE_OPT = typer.Option(False, "--verbose", "-v", help="Debug logging")


def run_async(coro):
    """Run an async function."""
    return asyncio.run(coro)


def parse_ints(text: str | None, flag: str) -> list[int] | None:
    """Parse a comma-separated integer list; None passes through."""
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}") from e


def build_config(
    config_file: Optional[str],
    seed: Optional[int] = None,
    num_seeds: Optional[int] = None,
    shot_grid: Optional[str] = None,
    widths: Optional[str] = None,
    **overrides: Any,
) -> ExperimentConfig:
    """Merge defaults, environment, the TOML file, and flags into one ExperimentConfig."""
    loaded = load_settings(config_file)
    if seed is not None or num_seeds is not None:
        base = loaded.runtime.base_seed if seed is None else seed
        count = loaded.runtime.num_seeds if num_seeds is None else num_seeds
        if count < 1:
            raise ConfigError("--num-seeds must be >= 1")
        overrides["seeds"] = [base + i for i in range(count)]
    overrides["shot_grid"] = parse_ints(shot_grid, "--shot-grid")
    overrides["widths"] = parse_ints(widths, "--widths")
    return loaded.to_experiment(**overrides)


def execute(command: str, config: ExperimentConfig, manifest: Optional[str], verbose: bool, **kwargs: Any) -> dict:
    """Run a command on the orchestrator behind a spinner; map errors to exit codes."""
    from pipeline.orchestrator import ExperimentOrchestrator

    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    async def _run():
        orch = ExperimentOrchestrator()
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
        ) as progress:
            task = progress.add_task(f"Running {command}...", total=None)
            result = await orch.run_command(command, config, manifest, **kwargs)
            progress.update(task, completed=True)
        return result

    try:
        result = run_async(_run())
    except LabError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(code=e.exit_code)
    except OSError as e:
        console.print(f"[red]I/O error: {e}[/red]")
        raise typer.Exit(code=3)

    failed = {stage: r["error"] for stage, r in result.get("results", {}).items() if r.get("error")}
    if failed:
        for stage, error in failed.items():
            console.print(f"[red]Stage {stage} failed: {error}[/red]")
        raise typer.Exit(code=1)
    return result


def _config_or_exit(config_file: Optional[str], **kwargs: Any) -> ExperimentConfig:
    try:
        return build_config(config_file, **kwargs)
    except ConfigError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(code=e.exit_code)


def _print_dict(title: str, values: dict[str, Any]) -> None:
    table = Table(title=title)
    table.add_column("Key")
    table.add_column("Value", justify="right")
    for key, value in values.items():
        table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
    console.print(table)


@app.command()
def generate(
    n: Optional[int] = N_OPT,
    m: Optional[int] = M_OPT,
    mode: Optional[str] = MODE_OPT,
    seed: Optional[int] = SEED_OPT,
    output: Optional[str] = OUTPUT_OPT,
    manifest: Optional[str] = MANIFEST_OPT,
    config_file: Optional[str] = CONFIG_OPT,
    verbose: bool = VERBOSE_OPT,
):
    """Generate a balanced dataset and write its manifest."""
    config = _config_or_exit(config_file, n=n, m=m, mode=mode, seed=seed, output_dir=output)
    result = execute("generate", config, manifest, verbose)

    console.print("\n[bold green]Dataset Generated[/bold green]\n")
    _print_dict("Manifest", result["results"][1])


@app.command()
def pipeline(
    n: Optional[int] = N_OPT,
    shots: Optional[int] = SHOTS_OPT,
    seed: Optional[int] = SEED_OPT,
    nu: Optional[float] = NU_OPT,
    ocsvm_kernel: Optional[str] = OCSVM_KERNEL_OPT,
    kpca_kernel: Optional[str] = KPCA_KERNEL_OPT,
    features: Optional[str] = FEATURES_OPT,
    workers: Optional[int] = WORKERS_OPT,
    output: Optional[str] = OUTPUT_OPT,
    manifest: Optional[str] = MANIFEST_OPT,
    config_file: Optional[str] = CONFIG_OPT,
    dump_densities: bool = typer.Option(False, "--dump-densities", help="Also write densities.csv"),
    verbose: bool = VERBOSE_OPT,
):
    """Embed, measure, cluster, and run anomaly detection on a manifest."""
    config = _config_or_exit(
        config_file,
        n=n,
        shots=shots,
        seed=seed,
        nu=nu,
        ocsvm_kernel=ocsvm_kernel,
        kpca_kernel=kpca_kernel,
        features=features,
        workers=workers,
        output_dir=output,
    )
    result = execute("pipeline", config, manifest, verbose, dump_densities=dump_densities)
    summary = result["summary"]

    console.print("\n[bold green]Pipeline Complete[/bold green]\n")
    table = Table(title=f"Summary (n={config.n}, shots={config.shots})")
    table.add_column("Metric")
    table.add_column("Value", justify="right")
    for cls, mean in summary.exact_means.items():
        table.add_row(f"Exact mean {cls}", f"{mean:.6g}")
    for cls, variance in summary.exact_variances.items():
        table.add_row(f"Exact variance {cls}", f"{variance:.6g}")
    table.add_row("Max mean error", f"{summary.exact_check.max_mean_error:.3e}")
    if summary.max_embedding_tv_distance is not None:
        table.add_row("Circuit TV distance", f"{summary.max_embedding_tv_distance:.3e}")
    table.add_row("k-means agreement", f"{summary.kmeans_agreement:.2%}")
    if summary.kpca_margin is not None:
        table.add_row("kPCA margin", f"{summary.kpca_margin:.4g}")
    table.add_row("OCSVM train F1", f"{summary.f1_train:.4f}")
    table.add_row("OCSVM test F1", f"{summary.f1_test:.4f}")
    console.print(table)


@app.command()
def sweep(
    n: Optional[int] = N_OPT,
    shot_grid: Optional[str] = SHOT_GRID_OPT,
    seed: Optional[int] = SEED_OPT,
    num_seeds: Optional[int] = NUM_SEEDS_OPT,
    nu: Optional[float] = NU_OPT,
    ocsvm_kernel: Optional[str] = OCSVM_KERNEL_OPT,
    features: Optional[str] = FEATURES_OPT,
    workers: Optional[int] = WORKERS_OPT,
    output: Optional[str] = OUTPUT_OPT,
    manifest: Optional[str] = MANIFEST_OPT,
    config_file: Optional[str] = CONFIG_OPT,
    verbose: bool = VERBOSE_OPT,
):
    """One-class SVM F1 across the shot grid and seeds."""
    config = _config_or_exit(
        config_file,
        n=n,
        shot_grid=shot_grid,
        seed=seed,
        num_seeds=num_seeds,
        nu=nu,
        ocsvm_kernel=ocsvm_kernel,
        features=features,
        workers=workers,
        output_dir=output,
    )
    result = execute("sweep", config, manifest, verbose)

    console.print("\n[bold green]Sweep Complete[/bold green]\n")
    table = Table(title=f"Median test F1 over {len(config.seeds)} seeds")
    table.add_column("Shots", justify="right")
    table.add_column("Median F1", justify="right")
    for shots, f1 in result["results"][5]["medians"].items():
        table.add_row(str(shots), f"{f1:.4f}")
    console.print(table)


@app.command("graph-report")
def graph_report(
    n: Optional[int] = N_OPT,
    workers: Optional[int] = WORKERS_OPT,
    output: Optional[str] = OUTPUT_OPT,
    manifest: Optional[str] = MANIFEST_OPT,
    config_file: Optional[str] = CONFIG_OPT,
    dot: bool = typer.Option(False, "--dot", help="Write DOT files for the visualization set"),
    verbose: bool = VERBOSE_OPT,
):
    """Functional-graph certificates and betti0 separation."""
    config = _config_or_exit(config_file, n=n, workers=workers, output_dir=output)
    result = execute("graph-report", config, manifest, verbose, write_dot=dot)

    console.print("\n[bold green]Graph Report Complete[/bold green]\n")
    _print_dict("Topology", result["results"][6])


@app.command()
def simon(
    n: Optional[int] = N_OPT,
    mode: Optional[str] = MODE_OPT,
    seed: Optional[int] = SEED_OPT,
    num_seeds: Optional[int] = NUM_SEEDS_OPT,
    max_queries: Optional[int] = typer.Option(None, "--max-queries", help="Quantum sample budget per run"),
    widths: Optional[str] = typer.Option(None, "--widths", help="Comma-separated widths for the separation sweep"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Trials per width and class"),
    skip_widths: bool = typer.Option(False, "--skip-widths", help="Only decide the manifest functions"),
    workers: Optional[int] = WORKERS_OPT,
    output: Optional[str] = OUTPUT_OPT,
    manifest: Optional[str] = MANIFEST_OPT,
    config_file: Optional[str] = CONFIG_OPT,
    verbose: bool = VERBOSE_OPT,
):
    """Simon's algorithm versus classical collision search."""
    config = _config_or_exit(
        config_file,
        n=n,
        mode=mode,
        seed=seed,
        num_seeds=num_seeds,
        max_queries=max_queries,
        widths=widths,
        trials=trials,
        workers=workers,
        output_dir=output,
    )
    result = execute("simon", config, manifest, verbose, widths=not skip_widths)

    console.print("\n[bold green]Separation Run Complete[/bold green]\n")
    _print_dict("Query counts", result["results"][7])


@app.command()
def info(
    n: Optional[int] = N_OPT,
    config_file: Optional[str] = CONFIG_OPT,
):
    """Show the resolved config and the exact observable moments per class."""
    from core.models import BooleanFunction, GF2Matrix
    from quantum.embed import embed_diagonal
    from quantum.observe import exact_moments

    config = _config_or_exit(config_file, n=n)

    table = Table(title="Experiment Config")
    table.add_column("Setting")
    table.add_column("Value")
    for key, value in config.header().items():
        table.add_row(key, str(value))
    console.print(table)

    bijection = BooleanFunction.linear(GF2Matrix.identity(config.n))
    # identity with the first row cleared has rank n-1
    collapsed = BooleanFunction.linear(GF2Matrix(config.n, (0,) + GF2Matrix.identity(config.n).rows[1:]))
    moments = Table(title=f"Exact moments at n={config.n}")
    moments.add_column("Class")
    moments.add_column("Mean", justify="right")
    moments.add_column("Variance", justify="right")
    for name, f in (("1:1", bijection), ("2:1 (linear)", collapsed)):
        mean, variance = exact_moments(embed_diagonal(f))
        moments.add_row(name, f"{mean:.6g}", f"{variance:.6g}")
    console.print(moments)


if __name__ == "__main__":
    app()
