"""Extension task family: seed pixels are extended as rays to the border."""

from enum import Enum
from typing import Literal

import numpy as np
from pydantic import field_validator

from carc.scm.models import Categorical, ExogenousSpec, Scm, Theme
from carc.scm.program import Features, StructuralProgram


class Direction(str, Enum):
    """Ray directions."""

    RIGHT = "right"
    DOWN = "down"
    LEFT = "left"
    UP = "up"


def _fill_behind(x: np.ndarray, direction: Direction) -> np.ndarray:
    """Color of the nearest seed behind each cell along ``direction`` (0 if none).

    A seed covers its own cell.
    """
    view = x
    if direction in (Direction.DOWN, Direction.UP):
        view = view.T
    if direction in (Direction.LEFT, Direction.UP):
        view = view[:, ::-1]

    cols = np.arange(view.shape[1])
    idx = np.where(view != 0, cols[None, :], -1)
    last = np.maximum.accumulate(idx, axis=1)
    rows = np.arange(view.shape[0])[:, None]
    filled = np.where(last >= 0, view[rows, np.clip(last, 0, None)], 0)

    if direction in (Direction.LEFT, Direction.UP):
        filled = filled[:, ::-1]
    if direction in (Direction.DOWN, Direction.UP):
        filled = filled.T
    return filled


class RayProgram(StructuralProgram):
    """Every seed pixel shoots a ray in each direction until the border.

    A zero cell takes the color of the nearest seed behind it along the first
    direction (in ``directions`` order) that has one. Seeds keep their color.
    """

    kind: Literal["ray"] = "ray"
    shape: tuple[int, int]
    directions: tuple[Direction, ...] = (Direction.RIGHT,)

    @field_validator("directions")
    @classmethod
    def _check_directions(cls, v: tuple[Direction, ...]) -> tuple[Direction, ...]:
        if not v:
            raise ValueError("at least one ray direction is required")
        if len(set(v)) != len(v):
            raise ValueError(f"duplicate ray directions: {[d.value for d in v]}")
        return v

    @property
    def input_shape(self) -> tuple[int, int]:
        return self.shape

    @property
    def output_shape(self) -> tuple[int, int]:
        return self.shape

    def inputs(self, u: np.ndarray) -> np.ndarray:
        return u.copy()

    def outputs(self, x: np.ndarray) -> tuple[np.ndarray, Features]:
        y = x.copy()
        for direction in self.directions:
            y = np.where(y == 0, _fill_behind(x, direction), y)
        return y, {"seeds": [int(np.count_nonzero(x))]}

    def parents(self) -> list[list[int]]:
        h, w = self.shape
        out: list[list[int]] = []
        for i in range(h):
            for j in range(w):
                cells: set[tuple[int, int]] = {(i, j)}
                for d in self.directions:
                    if d is Direction.RIGHT:
                        cells.update((i, c) for c in range(j))
                    elif d is Direction.LEFT:
                        cells.update((i, c) for c in range(j + 1, w))
                    elif d is Direction.DOWN:
                        cells.update((r, j) for r in range(i))
                    else:
                        cells.update((r, j) for r in range(i + 1, h))
                out.append(sorted(r * w + c for r, c in cells))
        return out

    def math_notation(self) -> str:
        names = ", ".join(d.value for d in self.directions)
        return (
            "x[i,j] = u[i,j]\n"
            f"y[i,j] = x[i,j] if x[i,j] != 0, else the nearest nonzero x behind (i, j) "
            f"along the first of [{names}] that has one, else 0"
        )

    def source_text(self) -> str:
        return _RAY_SOURCE.format(directions=[d.value for d in self.directions])


_RAY_SOURCE = '''import json
import sys

DIRECTIONS = {directions}
STEPS = {{"right": (0, -1), "left": (0, 1), "down": (-1, 0), "up": (1, 0)}}


def behind(grid, i, j, direction):
    di, dj = STEPS[direction]
    r, c = i + di, j + dj
    while 0 <= r < len(grid) and 0 <= c < len(grid[0]):
        if grid[r][c] != 0:
            return grid[r][c]
        r, c = r + di, c + dj
    return 0


def solve(grid):
    out = [row[:] for row in grid]
    for i, row in enumerate(grid):
        for j, value in enumerate(row):
            if value != 0:
                continue
            for direction in DIRECTIONS:
                color = behind(grid, i, j, direction)
                if color:
                    out[i][j] = color
                    break
    return out


if __name__ == "__main__":
    print(json.dumps(solve(json.load(sys.stdin))))
'''


def build_ray(
    size: tuple[int, int],
    directions: tuple[Direction, ...],
    colors: tuple[int, ...],
    scm_id: str,
    variant: str,
    seed_density: float = 0.05,
) -> Scm:
    """Build a ray-extension SCM over sparse seed pixels of ``colors``."""
    per_color = seed_density / len(colors)
    support = (0, *colors)
    probs = (1.0 - seed_density, *(per_color for _ in colors))
    program = RayProgram(shape=size, directions=directions)
    return Scm(
        id=scm_id,
        theme=Theme.EXTENSION,
        exogenous=ExogenousSpec(
            variables=(Categorical(support=support, probs=probs),), shape=size
        ),
        program=program,
        size_params=size,
        palette=tuple(sorted(support)),
        math_notation=program.math_notation(),
        variant=variant,
        artifact_defined=True,
    )
