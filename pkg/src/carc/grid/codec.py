"""Array-string rendering and parsing of grids in free-form text."""

import logging
import re

from pydantic import ValidationError

from carc.grid.models import Grid, ParseFailure

logger = logging.getLogger(__name__)

_ROW = r"\[\s*-?\d+(?:\s*,\s*-?\d+)*\s*\]"
_ARRAY_2D = re.compile(rf"\[\s*{_ROW}(?:\s*,\s*{_ROW})*\s*\]")
_INT = re.compile(r"-?\d+")


def render_array_string(grid: Grid) -> str:
    """Render a grid as a Python array literal, e.g. ``[[0, 4], [5, 2]]``."""
    return "[" + ", ".join("[" + ", ".join(str(c) for c in row) + "]" for row in grid.cells) + "]"


def parse_grid_from_text(text: str) -> Grid | ParseFailure:
    """Extract the last 2D integer array literal in ``text``.

    Models often restate demonstrations before answering, so the last
    candidate wins. A ragged or out-of-range last candidate is a failure.

    Args:
        text: Free-form model response

    Returns:
        The parsed grid, or a ParseFailure describing why none was found
    """
    matches = list(_ARRAY_2D.finditer(text))
    if not matches:
        return ParseFailure(reason="no array literal found")

    literal = matches[-1].group(0)
    rows = [[int(v) for v in _INT.findall(row)] for row in re.findall(_ROW, literal)]
    try:
        return Grid.from_list(rows)
    except ValidationError as e:
        logger.debug(f"Rejected array literal: {e.errors()[0]['msg']}")
        return ParseFailure(reason=str(e.errors()[0]["msg"]))
