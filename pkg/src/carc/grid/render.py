"""Terminal rendering of grids with rich."""

from rich.text import Text

from carc.grid.models import Grid

# Conventional ARC display colors for 0-9
PALETTE = (
    "#000000",  # 0 black
    "#0074d9",  # 1 blue
    "#ff4136",  # 2 red
    "#2ecc40",  # 3 green
    "#ffdc00",  # 4 yellow
    "#aaaaaa",  # 5 grey
    "#f012be",  # 6 magenta
    "#ff851b",  # 7 orange
    "#7fdbff",  # 8 sky
    "#870c25",  # 9 maroon
)


def render_grid(grid: Grid, monochrome: bool = False) -> Text:
    """Render a grid as rich text, one two-character block per cell.

    Args:
        grid: Grid to draw
        monochrome: Print digits instead of colored blocks

    Returns:
        A Text object with one line per grid row
    """
    text = Text()
    for i, row in enumerate(grid.cells):
        if i:
            text.append("\n")
        for c in row:
            if monochrome:
                text.append(f"{c} ")
            else:
                text.append("  ", style=f"on {PALETTE[c]}")
    return text
