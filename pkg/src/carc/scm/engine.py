"""Sampling, evaluation, interventions and counterfactuals over SCMs."""

import logging

import numpy as np

from carc.config import settings
from carc.discovery.graph import CausalGraph
from carc.errors import ContractError, OracleLimitError
from carc.grid.models import Grid, Pair
from carc.scm.models import (
    ColorRemap,
    ConstMechanism,
    CounterfactualPair,
    ExogenousContext,
    ExogenousSpec,
    FunctionReplace,
    Geometric,
    HardFix,
    Intervention,
    Level,
    LogicalMechanism,
    LogicNegate,
    ScaleMechanism,
    Scm,
    ScmDistributionSample,
)
from carc.scm.program import Features

logger = logging.getLogger(__name__)


def sample_exogenous(spec: ExogenousSpec, seed: int) -> ExogenousContext:
    """Sample an exogenous context; deterministic in (spec, seed)."""
    spec.check()
    values = spec.draw(np.random.default_rng(seed))
    return ExogenousContext.from_array(values, seed=seed)


def _run(scm: Scm, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, Features]:
    program = scm.program
    x = program.inputs(u)
    for iv in scm.edits:
        if iv.layer == "input":
            x = _apply_input_edit(scm, iv, x, u)

    y, features = program.outputs(x)
    for iv in scm.edits:
        if iv.layer == "output":
            y = _apply_output_edit(scm, iv, x, y)
    return x, y, features


def _apply_input_edit(scm: Scm, iv: Intervention, x: np.ndarray, u: np.ndarray) -> np.ndarray:
    shape = (x.shape[0], x.shape[1])
    x = x.copy()
    match iv:
        case HardFix():
            x[iv.cells.mask(shape)] = iv.value
        case ColorRemap():
            m = iv.cells.mask(shape)
            x[m] = iv.lookup_table()[x[m]]
        case LogicNegate():
            m = iv.cells.mask(shape)
            active = scm.program.active_colors(scm.palette)
            x[m] = np.where(x[m] != 0, 0, active[m])
        case Geometric():
            for r0, r1 in scm.program.panels():
                x[r0:r1] = iv.op.transform(x[r0:r1])
        case FunctionReplace():
            m = iv.target.region.mask(shape)
            if isinstance(iv.new_fn, ConstMechanism):
                x[m] = iv.new_fn.value
            elif isinstance(iv.new_fn, ScaleMechanism):
                x[m] = iv.new_fn.factor * (u[m] != 0)
    return x


def _apply_output_edit(scm: Scm, iv: Intervention, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    assert isinstance(iv, FunctionReplace)
    y = y.copy()
    m = iv.target.region.mask((y.shape[0], y.shape[1]))
    if isinstance(iv.new_fn, ConstMechanism):
        y[m] = iv.new_fn.value
    elif isinstance(iv.new_fn, LogicalMechanism):
        y[m] = scm.program.apply_operator(iv.new_fn.op.value, x)[m]
    return y


def _check_context(scm: Scm, u: ExogenousContext) -> np.ndarray:
    arr = u.to_array()
    if arr.shape != scm.exogenous.shape:
        raise ContractError(
            f"exogenous context shape {arr.shape} does not match spec {scm.exogenous.shape}"
        )
    return arr


def evaluate(scm: Scm, u: ExogenousContext) -> Pair:
    """Run the structural program on ``u`` and return the (input, output) pair."""
    pair, _ = evaluate_full(scm, u)
    return pair


def evaluate_full(scm: Scm, u: ExogenousContext) -> tuple[Pair, Features]:
    """Like :func:`evaluate`, also returning the program's array-level features."""
    x, y, features = _run(scm, _check_context(scm, u))
    return Pair(input=Grid.from_array(x), output=Grid.from_array(y)), features


def apply_intervention(scm: Scm, iv: Intervention) -> Scm:
    """Return the submodel induced by ``iv``; ``scm`` is left untouched.

    Raises:
        ContractError: if the intervention selects cells outside the grids or
            cannot be realized by the program (e.g. a quarter turn of a
            non-square panel)
    """
    program = scm.program
    in_shape = program.input_shape

    match iv:
        case HardFix() | ColorRemap() | LogicNegate():
            iv.cells.mask(in_shape)
        case Geometric():
            for r0, r1 in program.panels():
                if not iv.op.preserves_shape and (r1 - r0) != in_shape[1]:
                    raise ContractError(
                        f"{iv.op.value} needs square panels, got {r1 - r0}x{in_shape[1]}"
                    )
        case FunctionReplace():
            if iv.target.layer == "input":
                iv.target.region.mask(in_shape)
            else:
                out_shape = program.output_shape
                if out_shape is None:
                    raise ContractError(f"{program.kind} outputs have no fixed shape to target")
                iv.target.region.mask(out_shape)
                if isinstance(iv.new_fn, LogicalMechanism) and not program.supports_operator:
                    raise ContractError(f"{program.kind} programs have no logical operator")

    logger.debug(f"{scm.id}: applying {iv.kind} ({len(scm.edits)} prior edits)")
    return scm.model_copy(update={"edits": scm.edits + (iv,)})


def counterfactual(
    scm: Scm, u: ExogenousContext, ivs: list[Intervention]
) -> list[CounterfactualPair]:
    """Evaluate each intervention's submodel on the same exogenous context ``u``."""
    if not ivs:
        raise ContractError("counterfactual needs at least one intervention")

    base = evaluate(scm, u)
    return [
        CounterfactualPair(
            intervention=iv,
            base=base,
            pair=evaluate(apply_intervention(scm, iv), u),
            context=u,
        )
        for iv in ivs
    ]


def sample_distribution(
    scm: Scm,
    n: int,
    level: Level,
    seed: int,
    intervention: Intervention | None = None,
) -> ScmDistributionSample:
    """Draw ``n`` flattened (input, output) rows at level L1 or L2.

    Row ``k`` uses the ``k``-th exogenous draw of ``default_rng(seed)``, so
    the first row equals ``evaluate(scm, sample_exogenous(spec, seed))``.
    """
    if n < 1:
        raise ContractError(f"n must be >= 1, got {n}")
    if level is Level.L2 and intervention is None:
        raise ContractError("L2 sampling needs an intervention")
    if level is Level.L1 and intervention is not None:
        raise ContractError("L1 sampling takes no intervention")

    model = apply_intervention(scm, intervention) if intervention is not None else scm
    out_shape = model.program.output_shape
    if out_shape is None:
        raise ContractError(f"{scm.id} outputs vary in shape and cannot be flattened")

    in_shape = model.program.input_shape
    n_in = in_shape[0] * in_shape[1]
    n_out = out_shape[0] * out_shape[1]

    rng = np.random.default_rng(seed)
    data = np.empty((n, n_in + n_out), dtype=np.int64)
    for k in range(n):
        x, y, _ = _run(model, model.exogenous.draw(rng))
        data[k, :n_in] = x.ravel()
        data[k, n_in:] = y.ravel()

    logger.debug(f"{scm.id}: sampled {n} {level.value} rows of width {n_in + n_out}")
    return ScmDistributionSample(
        data=data,
        level=level,
        seed=seed,
        input_shape=in_shape,
        output_shape=out_shape,
        intervention=intervention,
    )


def verify_graph(
    scm: Scm,
    max_cells: int | None = None,
    random_contexts: int | None = None,
    oracle_seed: int | None = None,
) -> CausalGraph:
    """Recover the graph by flipping one exogenous cell at a time.

    Each cell is set to every value of its support starting from an all-min
    context, an all-max context and ``random_contexts`` random contexts. An
    edge ``i -> j`` is recorded when some flip of cell ``i`` changes
    variable ``j`` (input cells first, then output cells, row-major).

    Raises:
        OracleLimitError: if the grid has more than ``max_cells`` exogenous cells
        ContractError: if the output shape is not fixed
    """
    max_cells = settings.oracle.max_cells if max_cells is None else max_cells
    if random_contexts is None:
        random_contexts = settings.oracle.random_contexts
    oracle_seed = settings.oracle.seed if oracle_seed is None else oracle_seed

    spec = scm.exogenous
    if spec.n_cells > max_cells:
        raise OracleLimitError(
            f"{scm.id} has {spec.n_cells} exogenous cells; the oracle allows {max_cells}"
        )
    out_shape = scm.program.output_shape
    if out_shape is None:
        raise ContractError(f"{scm.id} outputs vary in shape; no fixed graph to verify")

    n_in = spec.n_cells
    supports = [spec.variable(k).support for k in range(n_in)]
    bases = [
        np.array([min(s) for s in supports], dtype=np.int64).reshape(spec.shape),
        np.array([max(s) for s in supports], dtype=np.int64).reshape(spec.shape),
    ]
    rng = np.random.default_rng(oracle_seed)
    bases.extend(spec.draw(rng) for _ in range(random_contexts))

    edges: set[tuple[int, int]] = set()
    for base in bases:
        x0, y0, _ = _run(scm, base)
        flat = base.ravel()
        for i in range(n_in):
            for value in supports[i]:
                if value == flat[i]:
                    continue
                flipped = flat.copy()
                flipped[i] = value
                x1, y1, _ = _run(scm, flipped.reshape(spec.shape))
                for k in np.flatnonzero(x1.ravel() != x0.ravel()):
                    if k != i:
                        edges.add((i, int(k)))
                for k in np.flatnonzero(y1.ravel() != y0.ravel()):
                    edges.add((i, n_in + int(k)))

    logger.debug(f"{scm.id}: graph oracle found {len(edges)} edges")
    return CausalGraph(n=n_in + out_shape[0] * out_shape[1], directed=frozenset(edges))
