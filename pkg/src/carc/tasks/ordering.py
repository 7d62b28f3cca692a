"""Ordering task family: lines are reordered or recolored by how full they are."""

from typing import Literal

import numpy as np

from carc.scm.models import Categorical, ExogenousSpec, Scm, Theme
from carc.scm.program import Features, StructuralProgram


def _fill_order(x: np.ndarray, axis: Literal["columns", "rows"]) -> tuple[np.ndarray, np.ndarray]:
    counts = np.count_nonzero(x, axis=0 if axis == "columns" else 1)
    # stable: ties keep their original index order
    order = np.argsort(-counts, kind="stable")
    return order, counts


class SortProgram(StructuralProgram):
    """Columns (or rows) reordered by nonzero count, fullest first, ties by index."""

    kind: Literal["sort"] = "sort"
    shape: tuple[int, int]
    axis: Literal["columns", "rows"] = "columns"

    @property
    def input_shape(self) -> tuple[int, int]:
        return self.shape

    @property
    def output_shape(self) -> tuple[int, int]:
        return self.shape

    def inputs(self, u: np.ndarray) -> np.ndarray:
        return u.copy()

    def outputs(self, x: np.ndarray) -> tuple[np.ndarray, Features]:
        order, counts = _fill_order(x, self.axis)
        y = x[:, order] if self.axis == "columns" else x[order, :]
        return y, {"counts": [int(c) for c in counts], "order": [int(k) for k in order]}

    def math_notation(self) -> str:
        line = "x[:, j]" if self.axis == "columns" else "x[i, :]"
        return (
            "x[i,j] = u[i,j]\n"
            f"n[k] = count({line} != 0)\n"
            f"y = x with {self.axis} permuted by n descending, ties by index"
        )

    def source_text(self) -> str:
        return _SORT_SOURCE.format(axis=self.axis)


_SORT_SOURCE = '''import json
import sys

AXIS = "{axis}"


def solve(grid):
    lines = [list(c) for c in zip(*grid)] if AXIS == "columns" else [r[:] for r in grid]
    order = sorted(range(len(lines)), key=lambda k: -sum(v != 0 for v in lines[k]))
    ordered = [lines[k] for k in order]
    return [list(r) for r in zip(*ordered)] if AXIS == "columns" else ordered


if __name__ == "__main__":
    print(json.dumps(solve(json.load(sys.stdin))))
'''


class RankColumnsProgram(StructuralProgram):
    """Nonzero cells are recolored by the rank of their column's nonzero count.

    The fullest column takes ``rank_colors[0]``, the next ``rank_colors[1]`` and
    so on; ranks past the end of the list reuse the last color. Ties go to the
    lower column index. Empty columns stay empty.
    """

    kind: Literal["rank_columns"] = "rank_columns"
    shape: tuple[int, int]
    rank_colors: tuple[int, ...]

    @property
    def input_shape(self) -> tuple[int, int]:
        return self.shape

    @property
    def output_shape(self) -> tuple[int, int]:
        return self.shape

    def inputs(self, u: np.ndarray) -> np.ndarray:
        return u.copy()

    def outputs(self, x: np.ndarray) -> tuple[np.ndarray, Features]:
        order, counts = _fill_order(x, "columns")
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        colors = np.asarray(self.rank_colors, dtype=np.int64)
        col_color = colors[np.minimum(rank, colors.size - 1)]
        y = np.where(x != 0, col_color[None, :], 0)
        return y, {"counts": [int(c) for c in counts], "rank": [int(r) for r in rank]}

    def source_text(self) -> str:
        return _RANK_SOURCE.format(rank_colors=list(self.rank_colors))


_RANK_SOURCE = '''import json
import sys

RANK_COLORS = {rank_colors}


def solve(grid):
    width = len(grid[0])
    counts = [sum(row[j] != 0 for row in grid) for j in range(width)]
    order = sorted(range(width), key=lambda j: -counts[j])
    color = [0] * width
    for rank, j in enumerate(order):
        color[j] = RANK_COLORS[min(rank, len(RANK_COLORS) - 1)]
    return [[color[j] if v != 0 else 0 for j, v in enumerate(row)] for row in grid]


if __name__ == "__main__":
    print(json.dumps(solve(json.load(sys.stdin))))
'''


def _sparse_spec(size: tuple[int, int], color: int, density: float) -> ExogenousSpec:
    return ExogenousSpec(
        variables=(Categorical(support=(0, color), probs=(1.0 - density, density)),),
        shape=size,
    )


def build_sort(
    size: tuple[int, int],
    color: int,
    axis: Literal["columns", "rows"],
    scm_id: str,
    variant: str,
    density: float = 0.4,
) -> Scm:
    program = SortProgram(shape=size, axis=axis)
    return Scm(
        id=scm_id,
        theme=Theme.ORDERING,
        exogenous=_sparse_spec(size, color, density),
        program=program,
        size_params=size,
        palette=(0, color),
        math_notation=program.math_notation(),
        variant=variant,
        artifact_defined=True,
    )


def build_rank_columns(
    size: tuple[int, int],
    color: int,
    rank_colors: tuple[int, ...],
    scm_id: str,
    variant: str,
    density: float = 0.4,
) -> Scm:
    return Scm(
        id=scm_id,
        theme=Theme.ORDERING,
        exogenous=_sparse_spec(size, color, density),
        program=RankColumnsProgram(shape=size, rank_colors=rank_colors),
        size_params=size,
        palette=tuple(sorted({0, color, *rank_colors})),
        variant=variant,
        artifact_defined=True,
    )
