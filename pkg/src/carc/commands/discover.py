"""Discover command for carc."""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from carc.config import settings
from carc.discovery.experiment import discovery_experiment, single_operator_scms, write_csv
from carc.errors import CarcError
from carc.scm.models import LogicalOp
from carc.tasks.registry import resolve_scm

console = Console()


def _parse_size(size: str) -> tuple[int, int]:
    try:
        h, w = (int(v) for v in size.lower().split("x"))
    except ValueError:
        console.print(f"[red]Invalid size: {size} (expected e.g. 10x10)[/red]")
        raise typer.Exit(1)
    return h, w


def discover(
    scm_ids: Optional[list[str]] = typer.Argument(
        None, help="Task ids or extra names; default is the single-operator family"
    ),
    n: Optional[list[int]] = typer.Option(None, "--n", help="Sample size (repeatable)"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="CI test level"),
    max_cond: Optional[int] = typer.Option(None, "--max-cond", help="Largest conditioning set"),
    size: str = typer.Option("10x10", "--size", help="Block size of the single-operator family"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Sampling seed"),
    out: Optional[Path] = typer.Option(None, "-o", "--out", help="Write the table as CSV"),
) -> None:
    """Run the PC baseline and report SHD against the declared graph.

    Examples:
        carc discover --n 1000 --n 5000
        carc discover SCMdky5-xor-10x10 --n 1000 -o shd.csv
    """
    try:
        if scm_ids:
            scms = [resolve_scm(name, seed) for name in scm_ids]
        else:
            scms = single_operator_scms(_parse_size(size), list(LogicalOp))
        table = discovery_experiment(
            scms,
            n_list=n or settings.discovery.n_list,
            alpha=alpha,
            max_cond=max_cond,
            seed=seed,
        )
    except CarcError as e:
        console.print(f"[red]Discovery failed: {e}[/red]")
        raise typer.Exit(1)

    out_table = Table(show_header=True, header_style="bold")
    for column in ("operator", "n", "shd", "runtime_seconds"):
        out_table.add_column(column, justify="left" if column == "operator" else "right")
    for row in table.itertuples(index=False):
        out_table.add_row(row.operator, str(row.n), str(row.shd), f"{row.runtime_seconds:.1f}")
    console.print(out_table)

    if out is not None:
        try:
            write_csv(table, out)
        except OSError as e:
            console.print(f"[red]Cannot write {out}: {e.strerror}[/red]")
            raise typer.Exit(1)
        console.print(f"[green]Wrote {out}[/green]")
