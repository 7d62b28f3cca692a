"""Render command for carc."""

from typing import Optional

import typer
from rich.console import Console
from rich.text import Text

from carc.commands import load_task
from carc.errors import CarcError
from carc.grid.models import Pair
from carc.grid.render import render_grid

console = Console()


def _pair(title: str, pair: Pair, monochrome: bool) -> None:
    console.print(f"[bold]{title}[/bold]")
    console.print(render_grid(pair.input, monochrome))
    console.print(Text("->"))
    console.print(render_grid(pair.output, monochrome))
    console.print()


def render(
    source: str = typer.Argument(..., help="Task JSON file, registry task id or extra name"),
    mono: bool = typer.Option(False, "--mono", help="Digits instead of colored blocks"),
    counterfactuals: bool = typer.Option(
        False, "--counterfactuals", "-c", help="Also draw counterfactual pairs"
    ),
    limit: Optional[int] = typer.Option(None, "-n", "--limit", help="Draw at most N demos"),
) -> None:
    """Draw a task's grids in the terminal.

    Examples:
        carc render 31d5ba1a
        carc render dataset/SCMxray-ray-8x8.json --mono -c
    """
    try:
        task = load_task(source)
    except CarcError as e:
        console.print(f"[red]Cannot load {source}: {e}[/red]")
        raise typer.Exit(1)

    train = task.train[:limit] if limit is not None else task.train
    for k, pair in enumerate(train):
        _pair(f"train[{k}]", pair, mono)
        if counterfactuals and k < len(task.counterfactuals):
            for m, cf in enumerate(task.counterfactuals[k]):
                _pair(f"  counterfactual[{k}][{m}]: {cf.intervention.description}", cf.pair, mono)
    for k, pair in enumerate(task.test):
        _pair(f"test[{k}]", pair, mono)
