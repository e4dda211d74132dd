# -*- coding: utf-8 -*-
"""
flipaudit - Main Entry Point
Command-line interface for auditing binary multi-label classifiers.

Usage::

    flipaudit init-config flipaudit.yaml      # commented default config
    flipaudit synth --config flipaudit.yaml   # synthetic cohort
    flipaudit audit --config flipaudit.yaml   # logistic misclassification audits
    flipaudit identify --config ...           # misclassification identifiers
    flipaudit flip --config ...               # selective prediction flipping
    flipaudit report --config ...             # summary.md + plot-data CSVs
    flipaudit run --config ... [--synth]      # everything above, in order

Exit codes: 0 success, 1 computation error, 2 input or configuration error.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable, List, Optional

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.markup import escape

load_dotenv()

from src.app.errors import ComputationError, InputError  # noqa: E402
from src.config.log import setup_logging  # noqa: E402
from src.config.settings import RunConfig, load_config, save_config  # noqa: E402
from src.services import runner  # noqa: E402

app = typer.Typer(
    name="flipaudit",
    help="Audit classifier misclassifications: significance audits, identifiers and selective flipping.",
    add_completion=False,
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)

EXIT_COMPUTATION = 1
EXIT_INPUT = 2

ConfigOption = typer.Option(None, "--config", "-c", help="YAML run configuration.")
SeedOption = typer.Option(None, "--seed", help="Override the master seed.")
OutOption = typer.Option(None, "--out", "-o", help="Override the output directory.")


@app.callback()
def _global(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log per-fit details."),
    log_file: Optional[Path] = typer.Option(None, "--log-file", help="Also write a timestamped log here."),
) -> None:
    setup_logging(logging.DEBUG if verbose else logging.INFO, log_file)


def _execute(action: Callable[[RunConfig], List[Path]], config_path: Optional[Path], seed: Optional[int], out: Optional[Path]) -> None:
    try:
        config = load_config(config_path).with_overrides(seed=seed, output_dir=out)
        written = action(config)
    except (InputError, FileNotFoundError) as exc:
        err_console.print(f"[bold red]\\[ERROR][/bold red] {escape(str(exc))}")
        raise typer.Exit(EXIT_INPUT)
    except ComputationError as exc:
        err_console.print(f"[bold red]\\[ERROR][/bold red] {escape(str(exc))}")
        raise typer.Exit(EXIT_COMPUTATION)
    for path in written:
        console.print(f"[green]wrote[/green] {escape(str(path))}")


@app.command()
def synth(config: Optional[Path] = ConfigOption, seed: Optional[int] = SeedOption, out: Optional[Path] = OutOption) -> None:
    """Generate a synthetic cohort with planted misclassification signal."""
    _execute(runner.cmd_synth, config, seed, out)


@app.command()
def audit(config: Optional[Path] = ConfigOption, seed: Optional[int] = SeedOption, out: Optional[Path] = OutOption) -> None:
    """Fit the clinical, findings and age + comorbidity audits."""
    _execute(runner.cmd_audit, config, seed, out)


@app.command()
def identify(config: Optional[Path] = ConfigOption, seed: Optional[int] = SeedOption, out: Optional[Path] = OutOption) -> None:
    """Train and evaluate the misclassification identifiers."""
    _execute(runner.cmd_identify, config, seed, out)


@app.command()
def flip(config: Optional[Path] = ConfigOption, seed: Optional[int] = SeedOption, out: Optional[Path] = OutOption) -> None:
    """Search flipping thresholds and report test-fold F1 changes."""
    _execute(runner.cmd_flip, config, seed, out)


@app.command()
def report(config: Optional[Path] = ConfigOption, seed: Optional[int] = SeedOption, out: Optional[Path] = OutOption) -> None:
    """Write summary.md and plot-data CSVs from the upstream reports."""
    _execute(runner.cmd_report, config, seed, out)


@app.command()
def run(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    with_synth: bool = typer.Option(False, "--synth", help="Generate the synthetic cohort first."),
) -> None:
    """Run audit, identify, flip and report in order."""
    _execute(lambda cfg: runner.cmd_run(cfg, synth=with_synth), config, seed, out)


@app.command("init-config")
def init_config(
    path: Path = typer.Argument(Path("flipaudit.yaml"), help="Where to write the config."),
    force: bool = typer.Option(False, "--force", help="Overwrite an existing file."),
) -> None:
    """Write the default configuration, every section commented."""
    if path.exists() and not force:
        err_console.print(f"[bold red]\\[ERROR][/bold red] {escape(str(path))} exists; pass --force to overwrite")
        raise typer.Exit(EXIT_INPUT)
    save_config(path)
    console.print(f"[green]wrote[/green] {escape(str(path))}")


def main() -> None:
    app()


if __name__ == "__main__":
    main()
