"""Evaluation records and execution results."""

from enum import Enum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from carc.grid.models import Grid
from carc.prompts.models import DemoMode, ExpectedAnswer, QueryTheme
from carc.scm.models import Theme


class ExecutionStatus(str, Enum):
    OK = "ok"
    TIMEOUT = "timeout"
    CRASH = "crash"
    INVALID_OUTPUT = "invalid_output"


class ExecutionResult(BaseModel):
    """One run of a candidate program on one input grid."""

    model_config = ConfigDict(frozen=True)

    status: ExecutionStatus
    output: Grid | None = None
    stderr: str = ""


class PairScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: ExecutionStatus
    exact: bool
    hd: float = Field(ge=0.0, le=1.0)


class ContractResult(BaseModel):
    """Scores of a candidate program over every held-out pair."""

    model_config = ConfigDict(frozen=True)

    pairs: list[PairScore]

    @property
    def hd(self) -> float:
        return sum(p.hd for p in self.pairs) / len(self.pairs)

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.pairs)


class RecordStatus(str, Enum):
    OK = "ok"
    NO_RESPONSE = "no_response"
    PARSE_FAILURE = "parse_failure"
    # Any program pair timed out, crashed or printed no grid
    PROGRAM_FAILURE = "program_failure"
    PROVIDER_ERROR = "provider_error"


class EvalRecord(BaseModel):
    """One scored model response.

    The raw response and the expected answer are kept so a record can be
    re-scored without querying the model again.
    """

    model_config = ConfigDict(frozen=True)

    task_id: str
    model: str
    query_theme: QueryTheme
    demo_mode: DemoMode
    replicate: int
    task_theme: Theme | None = None
    n_demos: int | None = None
    size_label: str | None = None
    prompt_sha256: str
    response: str | None
    expected: ExpectedAnswer
    parsed: Grid | None = None
    status: RecordStatus
    error: str | None = None
    exact: bool
    hd: float = Field(ge=0.0, le=1.0)
    attempts: int = 0

    @model_validator(mode="after")
    def _check_scores(self) -> Self:
        if self.exact != (self.hd == 0.0):
            raise ValueError(f"exact={self.exact} disagrees with hd={self.hd}")
        if self.status in (RecordStatus.PARSE_FAILURE, RecordStatus.NO_RESPONSE) and self.hd != 1.0:
            raise ValueError(f"{self.status.value} records score hd 1.0, got {self.hd}")
        return self
