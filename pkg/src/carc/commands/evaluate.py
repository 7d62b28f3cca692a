"""Eval and rescore commands for carc."""

import asyncio
import shlex
from pathlib import Path
from typing import Optional

import pandas as pd
import typer
from rich.console import Console
from rich.table import Table

from carc.commands import load_task
from carc.errors import CarcError
from carc.evaluation.benchmark import (
    BenchmarkMatrix,
    read_records,
    rescore_records,
    run_benchmark,
    summarize,
    write_report,
)
from carc.evaluation.executor import SubprocessExecutor
from carc.evaluation.models import EvalRecord
from carc.llm.gateway import LMGateway

console = Console()


def _print_summary(table: pd.DataFrame) -> None:
    out = Table(show_header=True, header_style="bold")
    out.add_column("Model")
    out.add_column("Theme")
    out.add_column("Mode")
    out.add_column("N", justify="right")
    out.add_column("Accuracy", justify="right")
    out.add_column("HD", justify="right")
    for row in table.itertuples(index=False):
        style = "" if row.complete else "yellow"
        out.add_row(
            row.model,
            row.query_theme,
            row.demo_mode,
            str(row.n),
            f"{row.accuracy:.2f}",
            f"{row.hd_mean:.3f} ± {row.hd_sd:.3f}",
            style=style,
        )
    console.print(out)


def evaluate(
    matrix_file: Path = typer.Argument(..., help="Benchmark matrix (YAML or JSON)"),
    out: Optional[Path] = typer.Option(None, "-o", "--out", help="Override the output directory"),
    executor: Optional[str] = typer.Option(
        None, "--executor", help="Command that runs candidate programs, e.g. 'python3 -I'"
    ),
) -> None:
    """Run a benchmark matrix and write the report.

    Examples:
        carc eval matrix.yaml
        carc eval matrix.yaml -o results/mock --executor "python3 -I"
    """
    try:
        matrix = BenchmarkMatrix.from_file(matrix_file)
        if executor is not None:
            matrix = matrix.model_copy(update={"executor": shlex.split(executor)})
        out_dir = out or matrix.out_dir
        tasks = [load_task(name, matrix.master_seed) for name in matrix.tasks]
        runner = SubprocessExecutor(matrix.executor) if matrix.executor else None
    except CarcError as e:
        console.print(f"[red]Invalid benchmark: {e}[/red]")
        raise typer.Exit(1)

    async def run() -> list[EvalRecord]:
        async with LMGateway(transcript_path=out_dir / "transcript.jsonl") as gateway:
            return await run_benchmark(
                tasks, matrix, gateway, runner, records_path=out_dir / "records.jsonl"
            )

    try:
        records = asyncio.run(run())
    except (CarcError, OSError) as e:
        console.print(f"[red]Benchmark failed: {e}[/red]")
        raise typer.Exit(1)

    try:
        paths = write_report(records, out_dir)
    except OSError as e:
        console.print(f"[red]Cannot write report: {e}[/red]")
        raise typer.Exit(1)

    table = summarize(records)
    _print_summary(table)
    incomplete = int((~table["complete"]).sum())
    if incomplete:
        console.print(f"[yellow]{incomplete} cells had provider errors[/yellow]")
    console.print(f"[green]Wrote {len(records)} records and report to {paths[0].parent}[/green]")


def rescore(
    records_file: Path = typer.Argument(..., help="records.jsonl from an earlier run"),
    out: Path = typer.Option(Path("rescored"), "-o", "--out", help="Output directory"),
    executor: Optional[str] = typer.Option(None, "--executor", help="Candidate program command"),
) -> None:
    """Score persisted responses again without querying any model."""
    try:
        records = read_records(records_file)
        runner = SubprocessExecutor(shlex.split(executor) if executor else None)
        rescored = rescore_records(records, runner)
        write_report(rescored, out)
    except (CarcError, OSError, ValueError) as e:
        console.print(f"[red]Rescore failed: {e}[/red]")
        raise typer.Exit(1)

    _print_summary(summarize(rescored))
    console.print(f"[green]Rescored {len(rescored)} records into {out}[/green]")
