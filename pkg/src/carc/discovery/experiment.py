"""PC baseline sweep: SHD of the recovered graph against the declared graph."""

import logging
import time
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from carc.config import settings
from carc.discovery.graph import shd
from carc.discovery.pc import pc
from carc.errors import ContractError
from carc.scm.engine import sample_distribution
from carc.scm.models import Level, LogicalOp, Scm
from carc.scm.seeds import SeedStream, derive_seed, stable_seed
from carc.tasks.logical import LogicalOpSpec, Single, build_logical

logger = logging.getLogger(__name__)

COLUMNS = ["operator", "n", "alpha", "max_cond", "shd", "runtime_seconds"]


def single_operator_scms(
    size: tuple[int, int] = (10, 10),
    operators: Sequence[LogicalOp | str] = (LogicalOp.AND, LogicalOp.OR, LogicalOp.XOR),
    block_colors: tuple[int, int] = (4, 5),
    out_color: int = 2,
) -> list[Scm]:
    """One single-operator logical SCM per operator, sharing size and colors."""
    scms = []
    for op in operators:
        spec = LogicalOpSpec(
            ops=Single(op=LogicalOp(op)), block_colors=block_colors, out_color=out_color
        )
        scms.append(build_logical(spec, size))
    return scms


def discovery_experiment(
    scms: Scm | Sequence[Scm],
    n_list: Sequence[int] | None = None,
    alpha: float | None = None,
    max_cond: int | None = None,
    seed: int | None = None,
) -> pd.DataFrame:
    """Run PC on L1 samples of each SCM at each sample size.

    Each (scm, n) cell draws its own sample from a seed derived from the SCM
    variant, so cells can be rerun independently.

    Returns:
        One row per (operator, n) with the columns in :data:`COLUMNS`

    Raises:
        ContractError: if an SCM has no declared graph
    """
    if isinstance(scms, Scm):
        scms = [scms]
    n_list = list(settings.discovery.n_list if n_list is None else n_list)
    alpha = settings.discovery.alpha if alpha is None else alpha
    max_cond = settings.discovery.max_cond if max_cond is None else max_cond
    seed = settings.generation.master_seed if seed is None else seed

    rows = []
    for scm in scms:
        truth = scm.graph
        if truth is None:
            raise ContractError(f"{scm.id} declares no causal graph to score against")
        operator = scm.variant or scm.id
        base = derive_seed(seed, SeedStream.TRAIN, stable_seed(f"{scm.id}:{operator}"))

        for k, n in enumerate(n_list):
            sample = sample_distribution(scm, n, Level.L1, derive_seed(base, SeedStream.TRAIN, k))
            started = time.perf_counter()
            result = pc(sample.data, alpha=alpha, max_cond=max_cond)
            runtime = time.perf_counter() - started
            distance = shd(result.graph, truth)
            logger.debug(f"{operator} n={n}: SHD {distance} in {runtime:.1f}s")
            rows.append(
                {
                    "operator": operator,
                    "n": n,
                    "alpha": alpha,
                    "max_cond": max_cond,
                    "shd": distance,
                    "runtime_seconds": round(runtime, 3),
                }
            )

    return pd.DataFrame(rows, columns=COLUMNS)


def write_csv(table: pd.DataFrame, path: Path) -> Path:
    """Write a discovery table with the documented column order."""
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, columns=COLUMNS, index=False)
    return path
