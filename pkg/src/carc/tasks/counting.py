"""Counting task family: outputs summarize per-color counts of the input."""

from typing import Literal

import numpy as np

from carc.grid.models import MAX_SIDE
from carc.scm.models import Categorical, ExogenousSpec, Scm, Theme
from carc.scm.program import Features, StructuralProgram

HISTOGRAM_ID = "SCMm5ob"
MAJORITY_ID = "SCMxmaj"

# Background-heavy default: p = [0.8, 0.05, 0.05, 0.05, 0.05]
DEFAULT_SUPPORT = (0, 1, 2, 3, 4)
DEFAULT_PROBS = (0.8, 0.05, 0.05, 0.05, 0.05)


def _counts(x: np.ndarray, colors: tuple[int, ...]) -> list[int]:
    return [int(np.count_nonzero(x == c)) for c in colors]


class ColorCountProgram(StructuralProgram):
    """Bar chart of color counts.

    c[j] = count(x == support[j]); column j-1 of the output holds c[j] cells of
    color support[j], filled from the bottom. The height is the largest count
    (at least 1, capped at 30 rows).
    """

    kind: Literal["color_count"] = "color_count"
    shape: tuple[int, int]
    support: tuple[int, ...]

    @property
    def input_shape(self) -> tuple[int, int]:
        return self.shape

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(c for c in self.support if c != 0)

    def inputs(self, u: np.ndarray) -> np.ndarray:
        return u.copy()

    def outputs(self, x: np.ndarray) -> tuple[np.ndarray, Features]:
        counts = _counts(x, self.colors)
        height = min(max([1, *counts]), MAX_SIDE)
        y = np.zeros((height, len(self.colors)), dtype=np.int64)
        for col, (color, n) in enumerate(zip(self.colors, counts, strict=True)):
            if n:
                y[height - min(n, height) :, col] = color
        return y, {"counts": counts}

    def math_notation(self) -> str:
        probs = ", ".join(str(c) for c in self.support)
        return (
            f"u[i,j] ~ Cat(X), X = [{probs}]\n"
            "x[i,j] = u[i,j]\n"
            "c[j] = count(x == X[j])\n"
            "y[-c[j]:, j-1] = X[j] for j >= 1"
        )

    def source_text(self) -> str:
        return _COLOR_COUNT_SOURCE.format(support=list(self.support), max_rows=MAX_SIDE)


_COLOR_COUNT_SOURCE = '''import json
import sys

SUPPORT = {support}
MAX_ROWS = {max_rows}


def solve(grid):
    colors = [c for c in SUPPORT if c != 0]
    counts = [sum(row.count(c) for row in grid) for c in colors]
    height = min(max([1] + counts), MAX_ROWS)
    out = [[0] * len(colors) for _ in range(height)]
    for col, (color, n) in enumerate(zip(colors, counts)):
        for r in range(height - min(n, height), height):
            out[r][col] = color
    return out


if __name__ == "__main__":
    print(json.dumps(solve(json.load(sys.stdin))))
'''


class MajorityProgram(StructuralProgram):
    """1x1 output holding the most frequent nonzero support color.

    Ties go to the color listed first in the support; an empty input gives 0.
    """

    kind: Literal["majority"] = "majority"
    shape: tuple[int, int]
    support: tuple[int, ...]

    @property
    def input_shape(self) -> tuple[int, int]:
        return self.shape

    @property
    def output_shape(self) -> tuple[int, int]:
        return (1, 1)

    def inputs(self, u: np.ndarray) -> np.ndarray:
        return u.copy()

    def outputs(self, x: np.ndarray) -> tuple[np.ndarray, Features]:
        colors = tuple(c for c in self.support if c != 0)
        counts = _counts(x, colors)
        best = 0
        if counts and max(counts) > 0:
            best = colors[counts.index(max(counts))]
        return np.array([[best]], dtype=np.int64), {"counts": counts}

    def source_text(self) -> str:
        return _MAJORITY_SOURCE.format(support=list(self.support))


_MAJORITY_SOURCE = '''import json
import sys

SUPPORT = {support}


def solve(grid):
    colors = [c for c in SUPPORT if c != 0]
    counts = [sum(row.count(c) for row in grid) for c in colors]
    if not counts or max(counts) == 0:
        return [[0]]
    return [[colors[counts.index(max(counts))]]]


if __name__ == "__main__":
    print(json.dumps(solve(json.load(sys.stdin))))
'''


def build_color_count(
    size: tuple[int, int],
    support: tuple[int, ...] = DEFAULT_SUPPORT,
    probs: tuple[float, ...] = DEFAULT_PROBS,
    scm_id: str = HISTOGRAM_ID,
    variant: str = "histogram",
) -> Scm:
    """Build the color-count SCM.

    Args:
        size: Input grid size
        support: Colors of the categorical exogenous cells, 0 included; the
            order of the nonzero colors is the column order of the output
        probs: Probability of each support color
    """
    program = ColorCountProgram(shape=size, support=support)
    return Scm(
        id=scm_id,
        theme=Theme.COUNTING,
        exogenous=ExogenousSpec(
            variables=(Categorical(support=support, probs=probs),), shape=size
        ),
        program=program,
        size_params=size,
        palette=tuple(sorted(support)),
        math_notation=program.math_notation(),
        variant=variant,
    )


def build_majority(
    size: tuple[int, int],
    support: tuple[int, ...],
    probs: tuple[float, ...],
) -> Scm:
    program = MajorityProgram(shape=size, support=support)
    return Scm(
        id=MAJORITY_ID,
        theme=Theme.COUNTING,
        exogenous=ExogenousSpec(
            variables=(Categorical(support=support, probs=probs),), shape=size
        ),
        program=program,
        size_params=size,
        palette=tuple(sorted(support)),
        variant="majority",
        artifact_defined=True,
    )


def example_two_scm() -> Scm:
    """The 10x10 color-count SCM with support [0, 1, 2, 3, 4] and p = [0.8, 0.05 x 4]."""
    return build_color_count((10, 10), scm_id="SCMf3cd", variant="f3cdc58f")
