"""Dataset command for carc."""

import json
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from carc.config import settings
from carc.errors import CarcError
from carc.grid.arc_json import to_arc_json
from carc.tasks.registry import build_extras, build_registry, registry_manifest

console = Console()


def dataset(
    out: Path = typer.Option(Path("dataset"), "-o", "--out", help="Output directory"),
    seed: Optional[int] = typer.Option(
        None, "--seed", help="Master seed (default: generation.master_seed)"
    ),
    extras: bool = typer.Option(False, "--extras", help="Also write 31d5ba1a and f3cdc58f"),
    indent: Optional[int] = typer.Option(None, "--indent", help="Indent JSON files"),
) -> None:
    """Write the 50 registry tasks as ARC JSON plus manifest.json.

    Examples:
        carc dataset --out data/carc
        carc dataset --seed 7 --extras
    """
    master_seed = settings.generation.master_seed if seed is None else seed

    try:
        tasks = build_registry(master_seed)
        if extras:
            tasks.extend(build_extras(master_seed))
        for task in tasks:
            task.check_invariants()
    except CarcError as e:
        console.print(f"[red]Generation failed: {e}[/red]")
        raise typer.Exit(1)

    try:
        out.mkdir(parents=True, exist_ok=True)
        for task in tasks:
            (out / f"{task.id}.json").write_text(to_arc_json(task, indent=indent) + "\n")
        manifest = registry_manifest(master_seed)
        if extras:
            manifest["extras"] = [t.id for t in tasks[len(manifest["tasks"]) :]]
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    except OSError as e:
        console.print(f"[red]Cannot write {e.filename or out}: {e.strerror}[/red]")
        raise typer.Exit(1)

    console.print(f"[green]Wrote {len(tasks)} tasks to {out}[/green]")
    console.print(f"[dim]Master seed {master_seed}[/dim]")
