"""CLI commands for carc."""

from pathlib import Path

from carc.grid.arc_json import from_arc_json
from carc.tasks.models import TaskInstance
from carc.tasks.registry import resolve_task


def load_task(source: str, master_seed: int | None = None) -> TaskInstance:
    """Read a task JSON file, or build the registry or extra task named ``source``.

    Raises:
        DecodeError: if the file is not a task document
        ConfigError: if no task has that name
    """
    path = Path(source)
    if path.is_file():
        return from_arc_json(path.read_text(encoding="utf-8"), task_id=path.stem)
    return resolve_task(source, master_seed)
