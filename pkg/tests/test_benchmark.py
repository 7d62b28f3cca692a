"""Tests for the benchmark runner and report."""

import json

import pytest

from carc.errors import ConfigError
from carc.evaluation.benchmark import (
    DEMO_COLUMNS,
    REPORT_COLUMNS,
    THEME_COLUMNS,
    BenchmarkMatrix,
    demo_curves,
    read_records,
    replicate_seed,
    rescore_records,
    run_benchmark,
    score_response,
    summarize,
    theme_summary,
    write_report,
)
from carc.evaluation.models import RecordStatus
from carc.grid.models import Grid
from carc.llm.gateway import LMGateway
from carc.llm.models import RetryPolicy
from carc.prompts.models import GridAnswer, QueryTheme
from carc.tasks.registry import build_registry_task

NO_WAIT = {"max_attempts": 2, "backoff_multiplier": 0, "backoff_min": 0, "backoff_max": 0}


@pytest.fixture(scope="module")
def xor_task():
    return build_registry_task("SCMdky5-xor-10x10")


@pytest.fixture(scope="module")
def ray_task():
    return build_registry_task("SCMxray-ray-8x8")


def _matrix(behavior: str, **kwargs) -> BenchmarkMatrix:
    model = {"provider": "mock", "model": behavior, "behavior": behavior}
    model.update(kwargs.pop("model_extra", {}))
    return BenchmarkMatrix(models=[model], tasks=["unused"], **kwargs)


async def test_oracle_scores_perfectly(xor_task):
    """Test the oracle mock gets accuracy 1.0 on grid answers."""
    matrix = _matrix(
        "oracle", themes=["counterfactual", "abstract", "causal_discovery"], replicates=2
    )

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    table = summarize(records)
    assert len(records) == 12
    assert all(r.exact and r.hd == 0.0 for r in records)
    assert (table["accuracy"] == 1.0).all()
    assert list(table.columns) == REPORT_COLUMNS


async def test_record_count(xor_task):
    """Test 1 model x 1 task x 2 modes x 5 replicates gives 10 records."""
    matrix = _matrix("oracle", themes=["counterfactual"], replicates=5)

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    assert len(records) == 10
    assert sorted({r.replicate for r in records}) == [0, 1, 2, 3, 4]
    assert {r.size_label for r in records} == {"10x10"}


async def test_wrong_shape_answer(xor_task):
    """Test a constant 1x1 answer is never exact and scores HD 1.0."""
    matrix = _matrix(
        "canned", themes=["abstract"], replicates=1, model_extra={"canned": "[[0]]"}
    )

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    table = summarize(records)
    assert all(r.status is RecordStatus.OK for r in records)
    assert (table["accuracy"] == 0.0).all()
    assert (table["hd_mean"] == 1.0).all()


async def test_empty_responses(xor_task):
    """Test empty bodies are recorded as no_response with HD 1.0."""
    matrix = _matrix("empty", themes=["counterfactual"], replicates=1)

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    assert {r.status for r in records} == {RecordStatus.NO_RESPONSE}
    assert all(r.hd == 1.0 for r in records)


async def test_provider_errors_mark_cells_incomplete(xor_task):
    """Test exhausted retries become provider_error records."""
    matrix = _matrix(
        "flaky",
        themes=["abstract"],
        replicates=1,
        model_extra={"failures": 9, "retry": NO_WAIT},
    )

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    table = summarize(records)
    assert {r.status for r in records} == {RecordStatus.PROVIDER_ERROR}
    assert not table["complete"].any()
    assert (table["errors"] == 1).all()


async def test_discovery_skipped_for_other_themes(ray_task):
    """Test discovery prompts are only issued for logical tasks."""
    matrix = _matrix("oracle", themes=["abstract", "causal_discovery"], replicates=1)

    async with LMGateway() as gateway:
        records = await run_benchmark([ray_task], matrix, gateway)

    assert len(records) == 2
    assert {r.query_theme for r in records} == {QueryTheme.ABSTRACT}


async def test_program_synthesis_oracle(xor_task):
    """Test the oracle's reference program passes the held-out pairs."""
    matrix = _matrix("oracle", themes=["program_synthesis"], modes=["all_L1"], replicates=1)

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    assert len(records) == 1
    assert records[0].exact
    assert records[0].status is RecordStatus.OK


async def test_rescore_and_report(xor_task, tmp_path):
    """Test persisted records re-score to the same values and the report is written."""
    matrix = _matrix("oracle", themes=["counterfactual", "abstract"], replicates=1)
    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    paths = write_report(records, tmp_path)
    loaded = read_records(tmp_path / "records.jsonl")
    rescored = rescore_records(loaded)

    assert [p.name for p in paths] == [
        "records.jsonl",
        "report.json",
        "report.csv",
        "size_curves.csv",
        "theme_summary.csv",
        "demo_curves.csv",
    ]
    assert loaded == records
    assert [(r.exact, r.hd) for r in rescored] == [(r.exact, r.hd) for r in records]
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["n_records"] == 4
    assert len(report["cells"]) == 4
    assert report["themes"][0]["task_theme"] == "logical"
    assert report["demo_curves"][0]["n_demos"] == 3


async def test_theme_summary_splits_logical(xor_task, ray_task):
    """Test records carry their task theme and the theme table splits on it."""
    matrix = _matrix("oracle", themes=["abstract"], modes=["all_L1"], replicates=2)

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task, ray_task], matrix, gateway)

    table = theme_summary(records)
    assert {r.task_theme.value for r in records} == {"logical", "extension"}
    assert list(table.columns) == THEME_COLUMNS
    assert sorted(table["task_theme"]) == ["extension", "logical"]
    assert (table["n"] == 2).all()


async def test_demo_count_sweep(xor_task):
    """Test each demonstration count renders its own prompts and curve row."""
    matrix = _matrix(
        "oracle", themes=["abstract"], modes=["all_L1"], replicates=2, demo_counts=[1, 3]
    )

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway)

    curves = demo_curves(records)
    assert len(records) == 4
    assert sorted(r.n_demos for r in records) == [1, 1, 3, 3]
    assert len({r.prompt_sha256 for r in records}) == 4
    assert list(curves.columns) == DEMO_COLUMNS
    assert curves["n_demos"].tolist() == [1, 3]
    assert (curves["n"] == 2).all()


def test_demo_counts_must_be_positive():
    """Test an empty or non-positive demonstration sweep is rejected."""
    with pytest.raises(ValueError):
        _matrix("oracle", demo_counts=[])
    with pytest.raises(ValueError):
        _matrix("oracle", demo_counts=[2, 0])


async def test_records_are_written_as_they_finish(xor_task, tmp_path):
    """Test every record is appended to the records file during the run."""
    path = tmp_path / "run" / "records.jsonl"
    path.parent.mkdir()
    path.write_text("stale\n")
    matrix = _matrix("oracle", themes=["counterfactual"], replicates=3)

    async with LMGateway() as gateway:
        records = await run_benchmark([xor_task], matrix, gateway, records_path=path)

    streamed = read_records(path)
    assert len(path.read_text().splitlines()) == len(records) == 6
    assert sorted(r.prompt_sha256 for r in streamed) == sorted(
        r.prompt_sha256 for r in records
    )


def test_score_response_parse_failure():
    """Test prose without an array is a parse failure."""
    expected = GridAnswer(grid=Grid.from_list([[1, 0], [0, 1]]))

    parsed, status, exact, hd = score_response(expected, "I am not sure.")

    assert parsed is None
    assert status is RecordStatus.PARSE_FAILURE
    assert not exact
    assert hd == 1.0


def test_score_response_partial():
    """Test a same-shape answer scores the fraction of wrong cells."""
    expected = GridAnswer(grid=Grid.from_list([[1, 0], [0, 1]]))

    _, status, exact, hd = score_response(expected, "[[1, 0], [0, 0]]")

    assert status is RecordStatus.OK
    assert not exact
    assert hd == 0.25


def test_replicate_seeds_differ():
    """Test replicate seeds are stable per task and distinct across replicates."""
    assert replicate_seed("a", 0) == replicate_seed("a", 0)
    assert replicate_seed("a", 0) != replicate_seed("a", 1)
    assert replicate_seed("a", 0) != replicate_seed("b", 0)


def test_matrix_from_file(tmp_path):
    """Test loading a YAML matrix and rejecting a bad one."""
    good = tmp_path / "matrix.yaml"
    good.write_text(
        "models:\n"
        "  - {provider: mock, model: oracle, behavior: oracle}\n"
        "tasks: [SCMdky5-xor-10x10]\n"
        "themes: [counterfactual]\n"
        "replicates: 2\n"
    )
    bad = tmp_path / "bad.yaml"
    bad.write_text("models: []\ntasks: [x]\n")

    matrix = BenchmarkMatrix.from_file(good)

    assert matrix.replicates == 2
    assert matrix.models[0].name == "oracle"
    assert len(matrix.modes) == 2
    with pytest.raises(ConfigError):
        BenchmarkMatrix.from_file(bad)
    with pytest.raises(ConfigError):
        BenchmarkMatrix.from_file(tmp_path / "missing.yaml")


def test_retry_policy_from_matrix():
    """Test retry settings pass through the model entry."""
    matrix = _matrix("flaky", themes=["abstract"], model_extra={"retry": NO_WAIT})

    assert matrix.models[0].retry == RetryPolicy(**NO_WAIT)
