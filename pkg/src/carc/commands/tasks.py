"""Tasks command for carc."""

from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from carc.config import settings
from carc.tasks.registry import registry_manifest

console = Console()


def tasks(
    theme: Optional[str] = typer.Option(None, "-t", "--theme", help="Filter by theme"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed for the seed column"),
) -> None:
    """List registry task ids.

    Examples:
        carc tasks
        carc tasks -t logical
    """
    master_seed = settings.generation.master_seed if seed is None else seed
    rows = registry_manifest(master_seed)["tasks"]
    if theme:
        rows = [r for r in rows if r["theme"] == theme.lower()]
    if not rows:
        console.print(f"[yellow]No tasks with theme '{theme}'[/yellow]")
        raise typer.Exit(0)

    table = Table(show_header=True, header_style="bold")
    table.add_column("ID")
    table.add_column("Theme", width=10)
    table.add_column("Size", width=7)
    table.add_column("CFs", justify="right")
    table.add_column("Seed", style="dim")
    for r in rows:
        h, w = r["size"]
        table.add_row(r["id"], r["theme"], f"{h}x{w}", str(r["counterfactuals"]), str(r["seed"]))

    console.print(table)
    console.print(f"\n[dim]{len(rows)} tasks[/dim]")
