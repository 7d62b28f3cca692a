"""Main CLI entry point for carc."""

import logging

import typer
from rich.console import Console

from carc import __version__
from carc.commands.dataset import dataset as dataset_cmd
from carc.commands.discover import discover as discover_cmd
from carc.commands.evaluate import evaluate as eval_cmd
from carc.commands.evaluate import rescore as rescore_cmd
from carc.commands.prompt import prompt as prompt_cmd
from carc.commands.render import render as render_cmd
from carc.commands.tasks import tasks as tasks_cmd

console = Console()

app = typer.Typer(
    name="carc",
    help="Causal reasoning testbed over ARC-style grids",
    no_args_is_help=True,
)


@app.callback()
def main(
    debug: bool = typer.Option(False, "--debug", "-d", help="Enable debug logging"),
) -> None:
    """Causal reasoning testbed over ARC-style grids."""
    if debug:
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")


app.command(name="dataset")(dataset_cmd)
app.command(name="tasks")(tasks_cmd)
app.command(name="prompt")(prompt_cmd)
app.command(name="eval")(eval_cmd)
app.command(name="rescore")(rescore_cmd)
app.command(name="discover")(discover_cmd)
app.command(name="render")(render_cmd)


@app.command()
def version() -> None:
    """Show version information."""
    console.print(f"carc version {__version__}")


if __name__ == "__main__":
    app()
