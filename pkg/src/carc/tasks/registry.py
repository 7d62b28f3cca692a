"""Static dataset registry.

The registry file lists every task with its family parameters and
counterfactual allocation. Task ``k`` of the file gets the seed
``derive_seed(master_seed, REGISTRY, k)``, so the dataset is a pure function
of the master seed.
"""

import logging
from functools import cache
from importlib import resources
from typing import Annotated, Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field

from carc.config import settings
from carc.errors import ConfigError
from carc.scm.models import LogicalOp, Scm, Theme
from carc.scm.seeds import SeedStream, derive_seed, stable_seed
from carc.tasks.counting import example_two_scm
from carc.tasks.logical import (
    AlternatingByRow,
    Composed,
    LogicalOpSpec,
    Single,
    build_logical,
    example_one_scm,
)
from carc.tasks.models import MAX_COUNTERFACTUALS, MIN_COUNTERFACTUALS, TaskInstance
from carc.tasks.sampling import build_task
from carc.tasks.themes import build_theme_representative

logger = logging.getLogger(__name__)

REGISTRY_RESOURCE = "registry.yaml"

Counterfactuals = Annotated[int, Field(ge=MIN_COUNTERFACTUALS, le=MAX_COUNTERFACTUALS)]


class LogicalEntry(BaseModel):
    """Registry row for a logical task."""

    model_config = ConfigDict(frozen=True)

    id: str
    form: Literal["single", "alternating", "composed"]
    op: LogicalOp | None = None
    size: tuple[int, int]
    blocks: tuple[int, ...]
    out: int
    counterfactuals: Counterfactuals
    artifact_defined: bool = False

    @property
    def theme(self) -> Theme:
        return Theme.LOGICAL

    def build_scm(self, seed: int) -> Scm:
        if self.form == "single":
            if self.op is None:
                raise ConfigError(f"{self.id}: single-operator entries need an op")
            ops: Single | AlternatingByRow | Composed = Single(op=self.op)
        elif self.form == "alternating":
            ops = AlternatingByRow()
        else:
            ops = Composed()
        spec = LogicalOpSpec(ops=ops, block_colors=self.blocks, out_color=self.out)
        scm = build_logical(spec, self.size)
        if self.artifact_defined:
            scm = scm.model_copy(update={"artifact_defined": True})
        return scm


class ThemeEntry(BaseModel):
    """Registry row for a counting, extension or ordering task."""

    model_config = ConfigDict(frozen=True)

    id: str
    theme: Theme
    variant: str
    size: tuple[int, int]
    colors: tuple[int, ...] | None = None
    counterfactuals: Counterfactuals

    def build_scm(self, seed: int) -> Scm:
        return build_theme_representative(
            self.theme, self.variant, self.size, seed=seed, colors=self.colors
        )


class RegistryFile(BaseModel):
    """Parsed registry resource."""

    version: int
    logical: list[LogicalEntry]
    themes: list[ThemeEntry]

    @property
    def entries(self) -> list[LogicalEntry | ThemeEntry]:
        return [*self.logical, *self.themes]


@cache
def load_registry_file() -> RegistryFile:
    """Read the packaged registry file."""
    text = resources.files("carc.tasks").joinpath(REGISTRY_RESOURCE).read_text()
    data = RegistryFile.model_validate(yaml.safe_load(text))
    ids = [e.id for e in data.entries]
    if len(set(ids)) != len(ids):
        raise ConfigError("registry task ids are not unique")
    return data


def _task_seed(master_seed: int, index: int) -> int:
    return derive_seed(master_seed, SeedStream.REGISTRY, index)


def build_registry(master_seed: int | None = None) -> list[TaskInstance]:
    """Build all registry tasks in file order."""
    master_seed = settings.generation.master_seed if master_seed is None else master_seed
    tasks = []
    for index, entry in enumerate(load_registry_file().entries):
        seed = _task_seed(master_seed, index)
        scm = entry.build_scm(seed)
        tasks.append(build_task(scm, entry.id, seed, entry.counterfactuals))
    logger.debug(f"Built {len(tasks)} registry tasks from master seed {master_seed}")
    return tasks


def build_registry_task(task_id: str, master_seed: int | None = None) -> TaskInstance:
    """Build one registry task without building the rest."""
    master_seed = settings.generation.master_seed if master_seed is None else master_seed
    for index, entry in enumerate(load_registry_file().entries):
        if entry.id == task_id:
            seed = _task_seed(master_seed, index)
            return build_task(entry.build_scm(seed), entry.id, seed, entry.counterfactuals)
    raise ConfigError(f"unknown task id {task_id!r}")


def registry_manifest(master_seed: int | None = None) -> dict[str, Any]:
    """Ordered task ids, themes, sizes, seeds and counterfactual allocations."""
    master_seed = settings.generation.master_seed if master_seed is None else master_seed
    registry = load_registry_file()
    return {
        "version": registry.version,
        "master_seed": master_seed,
        "tasks": [
            {
                "id": entry.id,
                "theme": entry.theme.value,
                "size": list(entry.size),
                "seed": _task_seed(master_seed, index),
                "counterfactuals": entry.counterfactuals,
            }
            for index, entry in enumerate(registry.entries)
        ],
    }


EXTRAS = {
    "31d5ba1a": example_one_scm,
    "f3cdc58f": example_two_scm,
}


def _extra_task(name: str, scm: Scm, master_seed: int) -> TaskInstance:
    return build_task(scm, name, derive_seed(master_seed, SeedStream.REGISTRY, stable_seed(name)))


def build_extras(master_seed: int | None = None) -> list[TaskInstance]:
    """Annotated tasks for the two ARC programs shipped outside the 50."""
    master_seed = settings.generation.master_seed if master_seed is None else master_seed
    return [_extra_task(name, build(), master_seed) for name, build in EXTRAS.items()]


def resolve_task(name: str, master_seed: int | None = None) -> TaskInstance:
    """Build the task named by a registry id, an extra task name or an extra's SCM id.

    Raises:
        ConfigError: if nothing matches
    """
    master_seed = settings.generation.master_seed if master_seed is None else master_seed
    for extra, build in EXTRAS.items():
        scm = build()
        if name in (extra, scm.id):
            return _extra_task(extra, scm, master_seed)
    return build_registry_task(name, master_seed)


def resolve_scm(name: str, master_seed: int | None = None) -> Scm:
    """Look up an SCM by registry task id, extra task name or SCM id of an extra.

    Raises:
        ConfigError: if nothing matches
    """
    for extra, build in EXTRAS.items():
        scm = build()
        if name in (extra, scm.id):
            return scm

    master_seed = settings.generation.master_seed if master_seed is None else master_seed
    for index, entry in enumerate(load_registry_file().entries):
        if entry.id == name:
            return entry.build_scm(_task_seed(master_seed, index))
    raise ConfigError(f"unknown task or SCM {name!r}")


def registry_ids() -> list[str]:
    return [e.id for e in load_registry_file().entries]
