from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from breakage_fvm.cases import PRESETS
from breakage_fvm.diagnostics import ConvergenceReport
from breakage_fvm.errors import BreakageFVMError, ConfigError
from breakage_fvm.logging_config import configure_logging
from breakage_fvm.workflow import RunConfig, StudyConfig, load_config, run_single, run_study, seed_check

logger = logging.getLogger("breakage_fvm.cli")
console = Console()

app = typer.Typer(
    help="Finite-volume solver for the collision-induced breakage equation.",
    no_args_is_help=True,
    add_completion=False,
)


class OutputFormat(str, Enum):
    csv = "csv"
    json = "json"


ConfigOption = typer.Option(None, "--config", dir_okay=False, help="TOML run or study document.")
PresetOption = typer.Option(None, "--preset", help=f"Built-in case: {', '.join(PRESETS)}.")
OutputOption = typer.Option(None, "--output", help="Result file; defaults to output.path.")
FormatOption = typer.Option(None, "--format", help="Result format; defaults to output.format.")
SeedCheckOption = typer.Option(
    False, "--seed-check", help="Compare rhs against the brute-force oracle before running."
)


def _load(config: Optional[Path], preset: Optional[str]) -> RunConfig:
    if (config is None) == (preset is None):
        raise ConfigError("give exactly one of --config or --preset")
    if preset is not None:
        try:
            return PRESETS[preset]
        except KeyError:
            raise ConfigError(f"unknown preset {preset!r}", fields=["preset"]) from None
    if not config.exists():
        raise ConfigError(f"config file {config} does not exist")
    return load_config(config)


def _report_table(report: ConvergenceReport) -> Table:
    table = Table(title="Double-mesh convergence")
    for column in ("cells", "total_number", "error", "eoc"):
        table.add_column(column, justify="right")
    for row in report.to_rows():
        table.add_row(*(str(row[c]) for c in ("cells", "total_number", "error", "eoc")))
    return table


def _fail(exc: BreakageFVMError) -> typer.Exit:
    logger.error("%s", exc)
    return typer.Exit(code=2 if isinstance(exc, ConfigError) else 1)


@app.callback()
def main(
    log_level: str = typer.Option("INFO", "--log-level", help="DEBUG, INFO, WARNING or ERROR."),
    json_logs: bool = typer.Option(False, "--json-logs", help="Emit one JSON object per log record."),
):
    configure_logging(log_level, json_logs=json_logs)


@app.command()
def run(
    config: Optional[Path] = ConfigOption,
    preset: Optional[str] = PresetOption,
    output: Optional[Path] = OutputOption,
    format: Optional[OutputFormat] = FormatOption,
    check: bool = SeedCheckOption,
):
    """Run once and write the moment time series."""
    try:
        cfg = _load(config, preset)
        if check:
            seed_check(cfg)
        frame = run_single(cfg, output=output, fmt=format.value if format else None)
    except BreakageFVMError as exc:
        raise _fail(exc)

    last = frame.iloc[-1]
    console.print(
        f"t={last['time']:.6g}  M0={last['m0']:.10e}  M1={last['m1']:.10e}  "
        f"min C={last['min_concentration']:.3e}"
    )


@app.command()
def study(
    config: Optional[Path] = ConfigOption,
    preset: Optional[str] = PresetOption,
    output: Optional[Path] = OutputOption,
    format: Optional[OutputFormat] = FormatOption,
    check: bool = SeedCheckOption,
    threads: int = typer.Option(1, "--threads", min=1, help="Levels solved concurrently."),
):
    """Run every refinement level and report errors and EOC."""
    try:
        cfg = _load(config, preset)
        if not isinstance(cfg, StudyConfig):
            raise ConfigError("a study needs a [study] table with levels", fields=["study"])
        if check:
            seed_check(cfg)
        report = run_study(cfg, threads=threads, output=output, fmt=format.value if format else None)
    except BreakageFVMError as exc:
        raise _fail(exc)

    console.print(_report_table(report))


if __name__ == "__main__":
    app()
