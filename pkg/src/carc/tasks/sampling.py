"""Task sampling: demonstrations, test pair and counterfactual batches from one seed."""

import logging

import numpy as np

from carc.config import settings
from carc.errors import ContractError
from carc.grid.models import Pair
from carc.scm.engine import counterfactual, evaluate, sample_exogenous
from carc.scm.models import (
    ColorRemap,
    CounterfactualPair,
    ExogenousContext,
    Geometric,
    GeometricOp,
    HardFix,
    Intervention,
    LogicNegate,
    Region,
    Scm,
)
from carc.scm.seeds import SeedStream, derive_seed
from carc.tasks.models import TRAIN_PAIRS, Annotations, TaskInstance

logger = logging.getLogger(__name__)

# Round-robin order of counterfactual intervention kinds within a batch
INTERVENTION_ORDER = ("color_remap", "hard_fix", "geometric", "logic_negate")


def _random_region(rng: np.random.Generator, shape: tuple[int, int]) -> Region:
    h, w = shape
    rh = int(rng.integers(1, max(1, h // 2) + 1))
    rw = int(rng.integers(1, max(1, w // 2) + 1))
    r0 = int(rng.integers(0, h - rh + 1))
    c0 = int(rng.integers(0, w - rw + 1))
    return Region(rows=(r0, r0 + rh), cols=(c0, c0 + rw))


def draw_intervention(
    scm: Scm, kind: str, base_input: np.ndarray, rng: np.random.Generator
) -> Intervention:
    """Draw an intervention of ``kind`` with parameters fitted to ``base_input``."""
    shape = scm.program.input_shape
    nonzero_palette = [c for c in scm.palette if c != 0] or [1]

    if kind == "color_remap":
        present = sorted({int(c) for c in np.unique(base_input) if c != 0})
        src = int(rng.choice(present or nonzero_palette))
        targets = [c for c in nonzero_palette if c != src]
        dst = int(rng.choice(targets or [c for c in range(1, 10) if c != src]))
        return ColorRemap(mapping={src: dst})
    if kind == "hard_fix":
        value = int(rng.choice(np.asarray(scm.palette)))
        return HardFix(cells=_random_region(rng, shape), value=value)
    if kind == "geometric":
        square = all(r1 - r0 == shape[1] for r0, r1 in scm.program.panels())
        ops = [op for op in GeometricOp if square or op.preserves_shape]
        return Geometric(op=ops[int(rng.integers(len(ops)))])
    if kind == "logic_negate":
        return LogicNegate(cells=_random_region(rng, shape))
    raise ContractError(f"unknown intervention kind {kind!r}")


def _annotations(scm: Scm) -> Annotations:
    graph = scm.graph
    adjacency = None
    if graph is not None and graph.n <= settings.generation.max_adjacency_vars:
        adjacency = graph.adjacency_matrix().ravel().tolist()
    return Annotations(
        source_text=scm.source_text,
        math_notation=scm.math_notation,
        adjacency=adjacency,
        variant=scm.variant,
        artifact_defined=scm.artifact_defined,
    )


def sample_demo(
    scm: Scm, seed: int, k: int, n_counterfactuals: int
) -> tuple[ExogenousContext, Pair, list[CounterfactualPair]]:
    """Demonstration ``k`` of the task seeded ``seed`` with its counterfactual batch."""
    u = sample_exogenous(scm.exogenous, derive_seed(seed, SeedStream.TRAIN, k))
    pair = evaluate(scm, u)
    rng = np.random.default_rng(derive_seed(seed, SeedStream.INTERVENTION, k))
    base_input = pair.input.to_array()
    ivs = [
        draw_intervention(scm, INTERVENTION_ORDER[i % len(INTERVENTION_ORDER)], base_input, rng)
        for i in range(n_counterfactuals)
    ]
    batch = [cf.model_copy(update={"base_index": k}) for cf in counterfactual(scm, u, ivs)]
    return u, pair, batch


def build_task(
    scm: Scm,
    task_id: str,
    seed: int,
    counterfactuals: int | None = None,
) -> TaskInstance:
    """Sample a task instance from ``scm``.

    Demonstration ``k`` uses the TRAIN stream at index ``k``, the test pair the
    TEST stream, and demonstration ``k``'s counterfactual parameters the
    INTERVENTION stream at index ``k``. Interventions cycle through
    :data:`INTERVENTION_ORDER`.
    """
    n_cf = counterfactuals or settings.generation.counterfactuals_per_demo

    contexts: list[ExogenousContext] = []
    train: list[Pair] = []
    batches: list[list[CounterfactualPair]] = []
    for k in range(TRAIN_PAIRS):
        u, pair, batch = sample_demo(scm, seed, k, n_cf)
        contexts.append(u)
        train.append(pair)
        batches.append(batch)

    contexts.append(sample_exogenous(scm.exogenous, derive_seed(seed, SeedStream.TEST, 0)))
    test = [evaluate(scm, contexts[-1])]

    logger.debug(f"{task_id}: sampled {len(train)} demos with {n_cf} counterfactuals each")
    return TaskInstance(
        id=task_id,
        theme=scm.theme,
        train=train,
        test=test,
        counterfactuals=batches,
        contexts=contexts,
        annotations=_annotations(scm),
        seed=seed,
        scm=scm,
    )
