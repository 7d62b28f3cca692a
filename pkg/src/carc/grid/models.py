"""Grid value types."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

MAX_SIDE = 30
N_COLORS = 10


class Grid(BaseModel):
    """A rectangular grid of color integers (0-9), at most 30x30."""

    model_config = ConfigDict(frozen=True)

    cells: tuple[tuple[int, ...], ...]

    @field_validator("cells")
    @classmethod
    def _check_cells(cls, v: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        if not 1 <= len(v) <= MAX_SIDE:
            raise ValueError(f"grid must have 1..{MAX_SIDE} rows, got {len(v)}")
        width = len(v[0])
        if not 1 <= width <= MAX_SIDE:
            raise ValueError(f"grid must have 1..{MAX_SIDE} columns, got {width}")
        for i, row in enumerate(v):
            if len(row) != width:
                raise ValueError(f"ragged grid: row {i} has {len(row)} cells, expected {width}")
            for c in row:
                if not 0 <= c < N_COLORS:
                    raise ValueError(f"cell value {c} outside 0..9")
        return v

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Grid":
        """Build a grid from a 2D integer array."""
        if arr.ndim != 2:
            raise ValueError(f"expected a 2D array, got {arr.ndim}D")
        return cls(cells=tuple(tuple(int(c) for c in row) for row in arr.tolist()))

    @classmethod
    def from_list(cls, rows: list[list[int]]) -> "Grid":
        return cls(cells=tuple(tuple(row) for row in rows))

    def to_array(self) -> np.ndarray:
        return np.array(self.cells, dtype=np.int64)

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.cells]


class Pair(BaseModel):
    """An input/output grid pair."""

    model_config = ConfigDict(frozen=True)

    input: Grid
    output: Grid

    def to_json(self) -> dict[str, Any]:
        return {"input": self.input.to_list(), "output": self.output.to_list()}


class ParseFailure(BaseModel):
    """Marker value returned when no valid grid can be extracted from text."""

    model_config = ConfigDict(frozen=True)

    reason: str
