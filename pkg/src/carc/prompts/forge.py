"""Prompt rendering for counterfactual, abstract, program-synthesis and discovery queries.

A prompt is the instruction paragraph for (theme, mode) followed by
demonstration blocks joined by blank lines. In all-L1 mode every block is an
``Example input-output arrays:`` pair. In alternating mode the prompt shows
L1, L3, L1, ... where each L3 block is a counterfactual of the L1 block
before it; its L1 demonstrations are the last ``ceil(n/2)`` of the all-L1
twin's, so both twins end on the same demonstration and share the query.
"""

import logging
import math
from dataclasses import dataclass
from functools import cache
from importlib import resources
from typing import Any

import jinja2
import numpy as np
import yaml

from carc.config import settings
from carc.errors import ConfigError
from carc.grid.codec import render_array_string
from carc.grid.models import Grid, Pair
from carc.prompts.models import (
    DemoMode,
    ExpectedAnswer,
    GridAnswer,
    OperatorAnswer,
    ProgramContract,
    Prompt,
    PromptConfig,
    Provenance,
    QueryTheme,
)
from carc.scm.engine import evaluate, sample_exogenous
from carc.scm.models import CounterfactualPair, Scm, Theme
from carc.scm.seeds import SeedStream, derive_seed
from carc.tasks.logical import LogicalProgram
from carc.tasks.models import TaskInstance
from carc.tasks.sampling import build_task, sample_demo

logger = logging.getLogger(__name__)

TEMPLATE_PACKAGE = "carc.prompts"
TEMPLATE_DIR = "templates"


@cache
def load_manifest() -> dict[str, Any]:
    """Template manifest: instruction files per (theme, mode), block templates, anchors."""
    path = resources.files(TEMPLATE_PACKAGE) / TEMPLATE_DIR / "manifest.yaml"
    manifest: dict[str, Any] = yaml.safe_load(path.read_text(encoding="utf-8"))
    return manifest


@cache
def _environment() -> jinja2.Environment:
    return jinja2.Environment(
        loader=jinja2.PackageLoader(TEMPLATE_PACKAGE, TEMPLATE_DIR),
        undefined=jinja2.StrictUndefined,
        autoescape=False,
    )


def template_version() -> int:
    return int(load_manifest()["version"])


def instruction(theme: QueryTheme, mode: DemoMode) -> str:
    """Instruction paragraph for ``theme`` in ``mode``.

    Raises:
        ConfigError: if the manifest has no template for the combination
    """
    try:
        name = load_manifest()["instructions"][theme.value][mode.value]
    except KeyError as e:
        raise ConfigError(f"no instruction template for {theme.value}/{mode.value}") from e
    path = resources.files(TEMPLATE_PACKAGE) / TEMPLATE_DIR / name
    return path.read_text(encoding="utf-8").rstrip("\n")


def _block(name: str, **slots: str) -> str:
    template = _environment().get_template(load_manifest()["blocks"][name])
    return template.render(**slots)


def example_block(pair: Pair) -> str:
    return _block(
        "example",
        input=render_array_string(pair.input),
        output=render_array_string(pair.output),
    )


def counterfactual_block(
    theme: QueryTheme, cf: CounterfactualPair, output: Grid | None = None
) -> str:
    """L3 block; with ``output=None`` the block is an open query ending in ``-> ``."""
    return _block(
        "counterfactual",
        anchor=load_manifest()["anchors"][theme.value],
        description=cf.intervention.description,
        input=render_array_string(cf.pair.input),
        output=render_array_string(output) if output is not None else "",
    )


def query_block(pair: Pair) -> str:
    return _block("test", input=render_array_string(pair.input), output="")


@dataclass(frozen=True)
class _Demo:
    pair: Pair
    counterfactuals: list[CounterfactualPair]


class _DemoPool:
    """Task demonstrations, extended from the SCM when a prompt asks for more."""

    def __init__(self, task: TaskInstance, seed: int) -> None:
        self.task = task
        self.seed = task.seed if task.seed is not None else seed
        self._cache: dict[int, _Demo] = {}

    @property
    def size(self) -> int:
        return len(self.task.train)

    def get(self, k: int, with_counterfactuals: bool) -> _Demo:
        demo = self._cache.get(k)
        if demo is None:
            demo = self._load(k)
            self._cache[k] = demo
        if with_counterfactuals and not demo.counterfactuals:
            raise ConfigError(f"{self.task.id}: demonstration {k} has no counterfactuals")
        return demo

    def _load(self, k: int) -> _Demo:
        task = self.task
        if k < len(task.train) and k < len(task.counterfactuals):
            return _Demo(task.train[k], task.counterfactuals[k])
        scm = task.scm
        if scm is None or (k < len(task.train) and task.seed is None):
            if k < len(task.train):
                return _Demo(task.train[k], [])
            raise ConfigError(f"{task.id} has {len(task.train)} demonstrations and no SCM")
        n_cf = settings.generation.counterfactuals_per_demo
        _, pair, batch = sample_demo(scm, self.seed, k, n_cf)
        logger.debug(f"{task.id}: sampled extra demonstration {k}")
        return _Demo(pair, batch)


def _check_theme(task: TaskInstance, theme: QueryTheme) -> None:
    if theme is not QueryTheme.CAUSAL_DISCOVERY:
        return
    if task.theme is not Theme.LOGICAL:
        raise ConfigError(f"causal discovery prompts need a logical task, {task.id} is not one")
    if task.scm is None or not isinstance(task.scm.program, LogicalProgram):
        raise ConfigError(f"{task.id} carries no logical SCM to take the operators from")


def _size_label(task: TaskInstance) -> str:
    if task.scm is not None:
        h, w = task.scm.size_params
    else:
        h, w = task.train[0].input.shape
    return f"{h}x{w}"


def _pick(batch: list[CounterfactualPair], rng: np.random.Generator, exclude: int | None) -> int:
    choices = [m for m in range(len(batch)) if m != exclude] or list(range(len(batch)))
    return choices[int(rng.integers(len(choices)))]


def render_prompt(source: TaskInstance | Scm, cfg: PromptConfig) -> Prompt:
    """Render the prompt for ``cfg`` from a task, or from an SCM sampled at ``cfg.seed``.

    The demonstration order, the counterfactual query and the L3 picks come
    from the PROMPT stream of ``cfg.seed``; the same seed gives the same bytes.

    Raises:
        ConfigError: discovery on a non-logical task, or too few demonstrations
    """
    task = build_task(source, source.id, cfg.seed) if isinstance(source, Scm) else source
    theme = cfg.query_theme
    _check_theme(task, theme)

    n = cfg.demo_count
    pool = _DemoPool(task, cfg.seed)
    if n > pool.size and task.scm is None:
        raise ConfigError(f"{task.id} has {pool.size} demonstrations, {n} requested")

    rng = np.random.default_rng(derive_seed(cfg.seed, SeedStream.PROMPT, 0))
    order = [int(k) for k in rng.permutation(max(pool.size, n))[:n]]

    query: CounterfactualPair | None = None
    query_index: int | None = None
    if theme is QueryTheme.COUNTERFACTUAL:
        batch = pool.get(order[-1], with_counterfactuals=True).counterfactuals
        query_index = int(rng.integers(len(batch)))
        query = batch[query_index]

    blocks: list[str] = [instruction(theme, cfg.demo_mode)]
    if cfg.demo_mode is DemoMode.ALL_L1:
        shown = order
        blocks.extend(example_block(pool.get(k, False).pair) for k in shown)
    else:
        shown = order[n - math.ceil(n / 2) :]
        n_l3 = n // 2
        l3_rng = np.random.default_rng(derive_seed(cfg.seed, SeedStream.PROMPT, 1))
        for i, k in enumerate(shown):
            demo = pool.get(k, with_counterfactuals=i < n_l3)
            blocks.append(example_block(demo.pair))
            if i < n_l3:
                exclude = query_index if k == order[-1] else None
                cf = demo.counterfactuals[_pick(demo.counterfactuals, l3_rng, exclude)]
                blocks.append(counterfactual_block(theme, cf, cf.pair.output))

    expected: ExpectedAnswer
    if query is not None:
        blocks.append(counterfactual_block(theme, query))
        expected = GridAnswer(grid=query.pair.output)
    elif theme is QueryTheme.ABSTRACT:
        blocks.append(query_block(task.test[0]))
        expected = GridAnswer(grid=task.test[0].output)
    elif theme is QueryTheme.PROGRAM_SYNTHESIS:
        expected = _program_contract(task, cfg.seed)
    else:
        expected = _operator_answer(task)

    text = "\n\n".join(blocks)
    logger.debug(f"{task.id}: rendered {theme.value}/{cfg.demo_mode.value}, {len(text)} chars")
    return Prompt(
        text=text,
        expected=expected,
        provenance=Provenance(
            task_id=task.id,
            seed=cfg.seed,
            config=cfg,
            demo_indices=shown,
            size_label=_size_label(task),
        ),
    )


def _program_contract(task: TaskInstance, seed: int) -> ProgramContract:
    scm = task.scm
    if scm is None:
        return ProgramContract(held_out=list(task.test), reference=task.annotations.source_text)
    base = task.seed if task.seed is not None else seed
    held_out = [
        evaluate(scm, sample_exogenous(scm.exogenous, derive_seed(base, SeedStream.HELD_OUT, k)))
        for k in range(settings.evaluation.held_out_pairs)
    ]
    return ProgramContract(held_out=held_out, reference=scm.source_text)


def _operator_answer(task: TaskInstance) -> OperatorAnswer:
    assert task.scm is not None and isinstance(task.scm.program, LogicalProgram)
    spec = task.scm.program.spec
    return OperatorAnswer(operators=tuple(spec.operators), expression=spec.expression)


def expected_answer(prompt: Prompt) -> ExpectedAnswer:
    """Ground truth bound to ``prompt`` at render time."""
    return prompt.expected


def oracle_response(expected: ExpectedAnswer) -> str:
    """Response text a perfect model would give; used by the mock oracle provider."""
    if isinstance(expected, GridAnswer):
        return render_array_string(expected.grid)
    if isinstance(expected, OperatorAnswer):
        return f"The logical operators are {' and '.join(expected.operators)}."
    if expected.reference is None:
        raise ConfigError("program contract has no reference program to answer with")
    return f"```python\n{expected.reference}\n```"
