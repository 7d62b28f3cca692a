"""Benchmark runner: models x tasks x themes x demo modes x replicates.

Replicate ``r`` of a task renders its prompts from
``derive_seed(stable_seed(task_id), REPLICATE, r)``, so the all-L1 and
alternating twins of a replicate share their demonstrations.
"""

import asyncio
import json
import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Annotated, Any

import pandas as pd
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from carc.config import settings
from carc.errors import ConfigError
from carc.evaluation.executor import SubprocessExecutor, extract_program, run_program_contract
from carc.evaluation.metrics import hamming_relative, score_discovery
from carc.evaluation.models import EvalRecord, ExecutionStatus, RecordStatus
from carc.grid.codec import parse_grid_from_text
from carc.grid.models import Grid, ParseFailure
from carc.llm.errors import ProviderError
from carc.llm.gateway import LMGateway
from carc.llm.models import ModelConfig
from carc.prompts.forge import oracle_response, render_prompt
from carc.prompts.models import (
    DemoMode,
    ExpectedAnswer,
    GridAnswer,
    OperatorAnswer,
    Prompt,
    PromptConfig,
    QueryTheme,
)
from carc.scm.models import Theme
from carc.scm.seeds import SeedStream, derive_seed, stable_seed
from carc.tasks.models import TaskInstance

logger = logging.getLogger(__name__)

CELL_KEYS = ["model", "query_theme", "demo_mode"]
REPORT_COLUMNS = [*CELL_KEYS, "n", "accuracy", "hd_mean", "hd_sd", "errors", "complete"]
CURVE_COLUMNS = [*CELL_KEYS, "size_label", "n", "accuracy", "hd_mean"]
THEME_KEYS = ["model", "task_theme", "query_theme", "demo_mode"]
THEME_COLUMNS = [*THEME_KEYS, "n", "accuracy", "hd_mean"]
DEMO_COLUMNS = [*CELL_KEYS, "n_demos", "n", "accuracy", "hd_mean"]


class BenchmarkMatrix(BaseModel):
    """Benchmark configuration, loaded from YAML or JSON.

    Example::

        models:
          - {provider: mock, model: oracle, behavior: oracle}
          - {provider: openai, model: gpt-4o-mini}
        tasks: [SCMdky5-xor-10x10, 31d5ba1a]
        themes: [counterfactual, abstract]
        modes: [all_L1, alternating_L1_L3]
        demo_counts: [1, 3, 5]
        replicates: 5
        out_dir: results/run1

    Every entry of ``demo_counts`` renders its own prompts, so a sweep over
    demonstration counts is one matrix.
    """

    model_config = ConfigDict(frozen=True)

    models: list[ModelConfig] = Field(min_length=1)
    tasks: list[str] = Field(min_length=1)
    themes: list[QueryTheme] = Field(default_factory=lambda: list(QueryTheme), min_length=1)
    modes: list[DemoMode] = Field(default_factory=lambda: list(DemoMode), min_length=1)
    replicates: int = Field(default_factory=lambda: settings.evaluation.replicates, ge=1)
    demo_counts: list[Annotated[int, Field(ge=1)]] = Field(
        default_factory=lambda: [settings.evaluation.demo_count], min_length=1
    )
    master_seed: int = Field(default_factory=lambda: settings.generation.master_seed)
    out_dir: Path = Path("results")
    executor: list[str] | None = None

    @classmethod
    def from_file(cls, path: Path) -> "BenchmarkMatrix":
        """Load a matrix file.

        Raises:
            ConfigError: if the file is unreadable or does not match the schema
        """
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"cannot read matrix {path}: {e}") from e
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"invalid matrix {path}: {e}") from e


def replicate_seed(task_id: str, replicate: int) -> int:
    return derive_seed(stable_seed(task_id), SeedStream.REPLICATE, replicate)


def score_response(
    expected: ExpectedAnswer,
    response: str | None,
    executor: SubprocessExecutor | None = None,
) -> tuple[Grid | None, RecordStatus, bool, float]:
    """Score a raw response against its expected answer.

    Returns:
        (parsed grid, status, exact, hd)
    """
    if response is None or not response.strip():
        return None, RecordStatus.NO_RESPONSE, False, 1.0

    if isinstance(expected, GridAnswer):
        parsed = parse_grid_from_text(response)
        if isinstance(parsed, ParseFailure):
            return None, RecordStatus.PARSE_FAILURE, False, 1.0
        hd = hamming_relative(parsed, expected.grid)
        return parsed, RecordStatus.OK, hd == 0.0, hd

    if isinstance(expected, OperatorAnswer):
        correct = score_discovery(response, expected)
        return None, RecordStatus.OK, correct, 0.0 if correct else 1.0

    contract = expected.model_copy(update={"candidate": extract_program(response)})
    result = run_program_contract(contract, executor)
    failed = any(p.status is not ExecutionStatus.OK for p in result.pairs)
    status = RecordStatus.PROGRAM_FAILURE if failed else RecordStatus.OK
    return None, status, result.exact, result.hd


def _prompts(
    task: TaskInstance, matrix: BenchmarkMatrix
) -> Iterable[tuple[DemoMode, int, int, Prompt]]:
    for theme in matrix.themes:
        if theme is QueryTheme.CAUSAL_DISCOVERY and task.theme is not Theme.LOGICAL:
            continue
        for mode in matrix.modes:
            for n_demos in matrix.demo_counts:
                for r in range(matrix.replicates):
                    cfg = PromptConfig(
                        query_theme=theme,
                        demo_mode=mode,
                        demo_count=n_demos,
                        seed=replicate_seed(task.id, r),
                    )
                    yield mode, r, n_demos, render_prompt(task, cfg)


async def run_benchmark(
    tasks: list[TaskInstance],
    matrix: BenchmarkMatrix,
    gateway: LMGateway,
    executor: SubprocessExecutor | None = None,
    records_path: Path | None = None,
) -> list[EvalRecord]:
    """Run every cell of ``matrix`` over ``tasks``.

    Cells run concurrently up to the gateway's in-flight limit. Provider
    failures become records with status ``provider_error``; discovery
    prompts are skipped for non-logical tasks.

    With ``records_path`` each record is appended to that JSON-lines file as
    soon as it is scored. The file is truncated first; its line order is
    completion order.
    """
    if not tasks:
        raise ConfigError("benchmark needs at least one task")
    if executor is None and QueryTheme.PROGRAM_SYNTHESIS in matrix.themes:
        executor = SubprocessExecutor(matrix.executor)
    if records_path is not None:
        write_records([], records_path)
    records_lock = asyncio.Lock()

    async def persist(record: EvalRecord) -> EvalRecord:
        if records_path is not None:
            async with records_lock:
                with open(records_path, "a") as f:
                    f.write(record.model_dump_json() + "\n")
        return record

    async def cell(
        model: ModelConfig,
        task: TaskInstance,
        mode: DemoMode,
        r: int,
        n_demos: int,
        prompt: Prompt,
    ) -> EvalRecord:
        base: dict[str, Any] = {
            "task_id": task.id,
            "model": model.name,
            "query_theme": prompt.provenance.config.query_theme,
            "demo_mode": mode,
            "replicate": r,
            "task_theme": task.theme,
            "n_demos": n_demos,
            "size_label": prompt.provenance.size_label,
            "prompt_sha256": prompt.sha256,
            "expected": prompt.expected,
        }
        try:
            completion = await gateway.complete(model, prompt.text)
        except ProviderError as e:
            logger.warning(f"{model.name} on {task.id}: {e}")
            return await persist(
                EvalRecord(
                    **base,
                    response=None,
                    status=RecordStatus.PROVIDER_ERROR,
                    error=str(e),
                    exact=False,
                    hd=1.0,
                )
            )
        parsed, status, exact, hd = await asyncio.to_thread(
            score_response, prompt.expected, completion.text, executor
        )
        return await persist(
            EvalRecord(
                **base,
                response=completion.text,
                parsed=parsed,
                status=status,
                exact=exact,
                hd=hd,
                attempts=completion.attempts,
            )
        )

    jobs = []
    for task in tasks:
        for mode, r, n_demos, prompt in _prompts(task, matrix):
            try:
                gateway.register_answer(prompt.text, oracle_response(prompt.expected))
            except ConfigError:
                pass
            jobs.extend(cell(model, task, mode, r, n_demos, prompt) for model in matrix.models)

    logger.debug(f"Running {len(jobs)} benchmark cells")
    return list(await asyncio.gather(*jobs))


def rescore_records(
    records: Iterable[EvalRecord], executor: SubprocessExecutor | None = None
) -> list[EvalRecord]:
    """Score persisted raw responses again; provider errors are kept as they are."""
    rescored = []
    for record in records:
        if record.status is RecordStatus.PROVIDER_ERROR:
            rescored.append(record)
            continue
        parsed, status, exact, hd = score_response(record.expected, record.response, executor)
        rescored.append(
            record.model_copy(update={"parsed": parsed, "status": status, "exact": exact, "hd": hd})
        )
    return rescored


def _frame(records: Iterable[EvalRecord]) -> pd.DataFrame:
    rows = [
        {
            "model": r.model,
            "query_theme": r.query_theme.value,
            "demo_mode": r.demo_mode.value,
            "task_theme": r.task_theme.value if r.task_theme else "",
            "n_demos": r.n_demos or 0,
            "size_label": r.size_label or "",
            "exact": r.exact,
            "hd": r.hd,
            "error": r.status is RecordStatus.PROVIDER_ERROR,
        }
        for r in records
    ]
    columns = [*CELL_KEYS, "task_theme", "n_demos", "size_label", "exact", "hd", "error"]
    return pd.DataFrame(rows, columns=columns)


def summarize(records: Iterable[EvalRecord]) -> pd.DataFrame:
    """Accuracy and mean/sd HD per (model, theme, demo mode)."""
    frame = _frame(records)
    if frame.empty:
        return pd.DataFrame(columns=REPORT_COLUMNS)
    table = (
        frame.groupby(CELL_KEYS, sort=True)
        .agg(
            n=("hd", "size"),
            accuracy=("exact", "mean"),
            hd_mean=("hd", "mean"),
            hd_sd=("hd", "std"),
            errors=("error", "sum"),
        )
        .reset_index()
    )
    table["hd_sd"] = table["hd_sd"].fillna(0.0)
    table["errors"] = table["errors"].astype(int)
    table["complete"] = table["errors"] == 0
    return table[REPORT_COLUMNS]


def size_curves(records: Iterable[EvalRecord]) -> pd.DataFrame:
    """Accuracy and mean HD per grid size, for scaling sweeps."""
    frame = _frame(records)
    if frame.empty:
        return pd.DataFrame(columns=CURVE_COLUMNS)
    table = (
        frame.groupby([*CELL_KEYS, "size_label"], sort=True)
        .agg(n=("hd", "size"), accuracy=("exact", "mean"), hd_mean=("hd", "mean"))
        .reset_index()
    )
    return table[CURVE_COLUMNS]


def theme_summary(records: Iterable[EvalRecord]) -> pd.DataFrame:
    """Accuracy and mean HD per task theme, for logical versus non-logical splits."""
    frame = _frame(records)
    if frame.empty:
        return pd.DataFrame(columns=THEME_COLUMNS)
    table = (
        frame.groupby(THEME_KEYS, sort=True)
        .agg(n=("hd", "size"), accuracy=("exact", "mean"), hd_mean=("hd", "mean"))
        .reset_index()
    )
    return table[THEME_COLUMNS]


def demo_curves(records: Iterable[EvalRecord]) -> pd.DataFrame:
    """Accuracy and mean HD per demonstration count."""
    frame = _frame(records)
    if frame.empty:
        return pd.DataFrame(columns=DEMO_COLUMNS)
    table = (
        frame.groupby([*CELL_KEYS, "n_demos"], sort=True)
        .agg(n=("hd", "size"), accuracy=("exact", "mean"), hd_mean=("hd", "mean"))
        .reset_index()
    )
    return table[DEMO_COLUMNS]


def write_records(records: Iterable[EvalRecord], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        for record in records:
            f.write(record.model_dump_json() + "\n")
    return path


def read_records(path: Path) -> list[EvalRecord]:
    with open(path) as f:
        return [EvalRecord.model_validate_json(line) for line in f if line.strip()]


def write_report(records: list[EvalRecord], out_dir: Path) -> list[Path]:
    """Write the records, report.json and one CSV per table to ``out_dir``.

    The CSVs are report.csv (model x theme x mode cells), size_curves.csv,
    theme_summary.csv (split by task theme) and demo_curves.csv.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = {
        "report.csv": summarize(records),
        "size_curves.csv": size_curves(records),
        "theme_summary.csv": theme_summary(records),
        "demo_curves.csv": demo_curves(records),
    }

    paths = [write_records(records, out_dir / "records.jsonl")]
    report = {
        "n_records": len(records),
        "cells": json.loads(tables["report.csv"].to_json(orient="records")),
        "size_curves": json.loads(tables["size_curves.csv"].to_json(orient="records")),
        "themes": json.loads(tables["theme_summary.csv"].to_json(orient="records")),
        "demo_curves": json.loads(tables["demo_curves.csv"].to_json(orient="records")),
    }
    report_json = out_dir / "report.json"
    report_json.write_text(json.dumps(report, indent=2) + "\n")
    paths.append(report_json)

    for name, table in tables.items():
        table.to_csv(out_dir / name, index=False)
        paths.append(out_dir / name)
    return paths
