"""Prompt configuration, rendered prompts and their machine-checkable answers."""

import hashlib
from enum import Enum
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from carc.config import settings
from carc.grid.models import Grid, Pair


class QueryTheme(str, Enum):
    """What a prompt asks the model to do."""

    COUNTERFACTUAL = "counterfactual"
    ABSTRACT = "abstract"
    PROGRAM_SYNTHESIS = "program_synthesis"
    CAUSAL_DISCOVERY = "causal_discovery"


class DemoMode(str, Enum):
    """How demonstrations are drawn from the causal hierarchy."""

    ALL_L1 = "all_L1"
    ALTERNATING = "alternating_L1_L3"


class PromptConfig(BaseModel):
    """Prompt selection.

    ``demo_count`` is the total number of demonstration blocks; in alternating
    mode it counts L1 and L3 blocks together, so twins have equal totals.
    """

    model_config = ConfigDict(frozen=True)

    query_theme: QueryTheme
    demo_mode: DemoMode = DemoMode.ALL_L1
    demo_count: int = Field(default=3, ge=1)
    seed: int = 0


class GridAnswer(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["grid"] = "grid"
    grid: Grid


class OperatorAnswer(BaseModel):
    """Expected operator set of a logical task, with the composition for reference."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["operators"] = "operators"
    operators: tuple[str, ...]
    expression: str | None = None

    @field_validator("operators")
    @classmethod
    def _canonical(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(sorted({op.upper() for op in v}))


class ExecutionLimits(BaseModel):
    model_config = ConfigDict(frozen=True)

    wall_clock_seconds: float = Field(default_factory=lambda: settings.executor.wall_clock_seconds)
    memory_mb: int = Field(default_factory=lambda: settings.executor.memory_mb)
    max_output_bytes: int = Field(default_factory=lambda: settings.executor.max_output_bytes)


class ProgramContract(BaseModel):
    """Held-out pairs a synthesized program must reproduce.

    ``candidate`` is filled in from the model response at scoring time;
    ``reference`` is the ground-truth program when the task carries one.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["program"] = "program"
    held_out: list[Pair] = Field(min_length=1)
    limits: ExecutionLimits = Field(default_factory=ExecutionLimits)
    candidate: str = ""
    reference: str | None = None


ExpectedAnswer = Annotated[
    GridAnswer | OperatorAnswer | ProgramContract, Field(discriminator="kind")
]


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    task_id: str
    seed: int
    config: PromptConfig
    # Pool indices of the L1 demonstrations, in prompt order
    demo_indices: list[int]
    size_label: str | None = None


class Prompt(BaseModel):
    """Rendered prompt text bound to its ground truth."""

    model_config = ConfigDict(frozen=True)

    text: str
    expected: ExpectedAnswer
    provenance: Provenance

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()
