"""Prompt command for carc."""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from carc.commands import load_task
from carc.errors import CarcError
from carc.prompts.forge import render_prompt
from carc.prompts.models import DemoMode, PromptConfig, QueryTheme

console = Console(stderr=True)


def prompt(
    source: str = typer.Argument(..., help="Task JSON file, registry task id or extra name"),
    theme: QueryTheme = typer.Option(
        QueryTheme.COUNTERFACTUAL, "-t", "--theme", help="Query theme"
    ),
    mode: DemoMode = typer.Option(DemoMode.ALL_L1, "-m", "--mode", help="Demonstration mode"),
    demos: int = typer.Option(3, "-n", "--demos", min=1, help="Total demonstration blocks"),
    seed: int = typer.Option(0, "--seed", help="Prompt seed"),
    out: Optional[Path] = typer.Option(None, "-o", "--out", help="Write the prompt here"),
    answer: Optional[Path] = typer.Option(
        None, "--answer", help="Answer sidecar (default: <out>.answer.json)"
    ),
) -> None:
    """Render a prompt and its expected answer.

    Examples:
        carc prompt SCMdky5-xor-10x10 -t counterfactual -n 3
        carc prompt task.json -m alternating_L1_L3 -o p.txt
    """
    try:
        task = load_task(source)
        rendered = render_prompt(
            task, PromptConfig(query_theme=theme, demo_mode=mode, demo_count=demos, seed=seed)
        )
    except CarcError as e:
        console.print(f"[red]Cannot render prompt: {e}[/red]")
        raise typer.Exit(1)

    if answer is None and out is not None:
        answer = out.with_suffix(".answer.json")

    try:
        if out is None:
            typer.echo(rendered.text)
        else:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(rendered.text)
        if answer is not None:
            answer.write_text(
                rendered.model_dump_json(include={"expected", "provenance"}, indent=2) + "\n"
            )
    except OSError as e:
        console.print(f"[red]Cannot write {e.filename}: {e.strerror}[/red]")
        raise typer.Exit(1)

    if out is not None:
        console.print(f"[green]Wrote {out}[/green]")
    if answer is not None:
        console.print(f"[dim]Answer sidecar {answer}[/dim]")
