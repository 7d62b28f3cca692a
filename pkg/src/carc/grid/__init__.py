"""Grid value type, array-string codec and terminal rendering."""

from carc.grid.codec import parse_grid_from_text, render_array_string
from carc.grid.models import MAX_SIDE, Grid, Pair, ParseFailure

__all__ = [
    "MAX_SIDE",
    "Grid",
    "Pair",
    "ParseFailure",
    "parse_grid_from_text",
    "render_array_string",
]
