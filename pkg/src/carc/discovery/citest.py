"""Stratified chi-square conditional independence test for discrete data."""

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import stats

from carc.config import settings
from carc.errors import ContractError

# Mixed-radix stratum keys above this many cells are compacted with np.unique
MAX_DENSE_CELLS = 1 << 20


class DiscreteData:
    """Column-wise integer codes of a discrete data matrix.

    Each column is recoded to ``0..k-1`` once so repeated tests only count.
    """

    def __init__(self, data: np.ndarray) -> None:
        data = np.asarray(data)
        if data.ndim != 2:
            raise ContractError(f"expected a 2D data matrix, got shape {data.shape}")
        self.n_rows, self.n_vars = data.shape
        self.codes = np.empty(data.shape, dtype=np.int64)
        self.cards = np.empty(self.n_vars, dtype=np.int64)
        for k in range(self.n_vars):
            values, inverse = np.unique(data[:, k], return_inverse=True)
            self.codes[:, k] = inverse.ravel()
            self.cards[k] = len(values)


class CITestResult(BaseModel):
    """Outcome of one conditional independence test."""

    model_config = ConfigDict(frozen=True)

    statistic: float
    dof: int
    p_value: float
    independent: bool
    # Every stratum had fewer rows than the floor
    low_power: bool = False
    strata_used: int = 0


def _strata(data: DiscreteData, cond: tuple[int, ...]) -> tuple[np.ndarray, int]:
    if not cond:
        return np.zeros(data.n_rows, dtype=np.int64), 1

    key = np.zeros(data.n_rows, dtype=np.int64)
    size = 1
    for k in cond:
        card = int(data.cards[k])
        if size * card > MAX_DENSE_CELLS:
            uniq, key = np.unique(key, return_inverse=True)
            key = key.ravel()
            size = len(uniq)
        key = key * card + data.codes[:, k]
        size *= card
    return key, size


def chi_square_ci(
    data: np.ndarray | DiscreteData,
    i: int,
    j: int,
    cond: tuple[int, ...] = (),
    alpha: float | None = None,
    min_stratum: int | None = None,
) -> CITestResult:
    """Test ``X_i`` independent of ``X_j`` given ``X_cond``.

    Rows are stratified by the joint value of ``cond``. The chi-square
    statistic of the i x j table in each stratum is summed across strata,
    as is its degrees of freedom (zero-marginal rows and columns removed).
    Strata with fewer than ``min_stratum`` rows are skipped.

    Returns:
        Test result; when every stratum is skipped the variables are reported
        independent with ``low_power`` set
    """
    alpha = settings.discovery.alpha if alpha is None else alpha
    min_stratum = settings.discovery.min_stratum if min_stratum is None else min_stratum
    if not isinstance(data, DiscreteData):
        data = DiscreteData(data)
    if i == j or i in cond or j in cond:
        raise ContractError(f"conditioning set {cond} must be disjoint from ({i}, {j})")

    ka, kb = int(data.cards[i]), int(data.cards[j])
    key, n_strata = _strata(data, cond)
    if n_strata * ka * kb > MAX_DENSE_CELLS:
        uniq, key = np.unique(key, return_inverse=True)
        key = key.ravel()
        n_strata = len(uniq)

    flat = (key * ka + data.codes[:, i]) * kb + data.codes[:, j]
    counts = np.bincount(flat, minlength=n_strata * ka * kb).reshape(n_strata, ka, kb)
    counts = counts.astype(np.float64)

    totals = counts.sum(axis=(1, 2))
    kept = counts[totals >= max(min_stratum, 1)]
    if kept.shape[0] == 0:
        return CITestResult(statistic=0.0, dof=0, p_value=1.0, independent=True, low_power=True)

    n = kept.sum(axis=(1, 2))
    rows = kept.sum(axis=2)
    cols = kept.sum(axis=1)
    expected = rows[:, :, None] * cols[:, None, :] / n[:, None, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(expected > 0, (kept - expected) ** 2 / expected, 0.0)
    statistic = float(terms.sum())

    nz_rows = np.count_nonzero(rows, axis=1)
    nz_cols = np.count_nonzero(cols, axis=1)
    dof = int(np.sum(np.maximum(nz_rows - 1, 0) * np.maximum(nz_cols - 1, 0)))

    p_value = 1.0 if dof == 0 else float(stats.chi2.sf(statistic, dof))
    return CITestResult(
        statistic=statistic,
        dof=dof,
        p_value=p_value,
        independent=p_value > alpha,
        strata_used=int(kept.shape[0]),
    )
