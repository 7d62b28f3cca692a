"""Representative SCMs for the counting, extension and ordering themes."""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np

from carc.errors import ConfigError
from carc.scm.models import Scm, Theme
from carc.scm.seeds import SeedStream, derive_seed
from carc.tasks.counting import HISTOGRAM_ID, MAJORITY_ID, build_color_count, build_majority
from carc.tasks.extension import Direction, build_ray
from carc.tasks.ordering import build_rank_columns, build_sort

Builder = Callable[[tuple[int, int], tuple[int, ...]], Scm]


@dataclass(frozen=True)
class ThemeVariant:
    """A documented representative of a theme.

    Attributes:
        theme: Theme the variant belongs to
        scm_id: SCM id; never collides with the logical family ids
        n_colors: Number of nonzero colors the builder takes
        build: Builder taking (size, colors)
    """

    theme: Theme
    scm_id: str
    n_colors: int
    build: Builder


def _histogram(size: tuple[int, int], colors: tuple[int, ...]) -> Scm:
    rest = 0.2 / len(colors)
    return build_color_count(size, (0, *colors), (0.8, *(rest for _ in colors)))


def _majority(size: tuple[int, int], colors: tuple[int, ...]) -> Scm:
    rest = 0.3 / len(colors)
    return build_majority(size, (0, *colors), (0.7, *(rest for _ in colors)))


def _ray(scm_id: str, variant: str, *directions: Direction) -> Builder:
    def build(size: tuple[int, int], colors: tuple[int, ...]) -> Scm:
        return build_ray(size, directions, colors, scm_id=scm_id, variant=variant)

    return build


def _sort(scm_id: str, variant: str, axis: Literal["columns", "rows"]) -> Builder:
    def build(size: tuple[int, int], colors: tuple[int, ...]) -> Scm:
        return build_sort(size, colors[0], axis, scm_id=scm_id, variant=variant)

    return build


def _rank(size: tuple[int, int], colors: tuple[int, ...]) -> Scm:
    return build_rank_columns(
        size, colors[0], colors[1:], scm_id="SCMxrnk", variant="rank-columns"
    )


VARIANTS: dict[str, ThemeVariant] = {
    "histogram": ThemeVariant(Theme.COUNTING, HISTOGRAM_ID, 4, _histogram),
    "majority": ThemeVariant(Theme.COUNTING, MAJORITY_ID, 3, _majority),
    "ray": ThemeVariant(
        Theme.EXTENSION, "SCMxray", 2, _ray("SCMxray", "ray", Direction.RIGHT)
    ),
    "ray-down": ThemeVariant(
        Theme.EXTENSION, "SCMxrdn", 2, _ray("SCMxrdn", "ray-down", Direction.DOWN)
    ),
    "ray-left": ThemeVariant(
        Theme.EXTENSION, "SCMxrlf", 2, _ray("SCMxrlf", "ray-left", Direction.LEFT)
    ),
    "ray-up": ThemeVariant(
        Theme.EXTENSION, "SCMxrup", 2, _ray("SCMxrup", "ray-up", Direction.UP)
    ),
    "cross": ThemeVariant(
        Theme.EXTENSION,
        "SCMxcrs",
        2,
        _ray("SCMxcrs", "cross", Direction.RIGHT, Direction.LEFT),
    ),
    "plus": ThemeVariant(
        Theme.EXTENSION,
        "SCMxpls",
        2,
        _ray("SCMxpls", "plus", Direction.RIGHT, Direction.DOWN, Direction.LEFT, Direction.UP),
    ),
    "sort-columns": ThemeVariant(
        Theme.ORDERING, "SCMxsrt", 1, _sort("SCMxsrt", "sort-columns", "columns")
    ),
    "sort-rows": ThemeVariant(
        Theme.ORDERING, "SCMxsrr", 1, _sort("SCMxsrr", "sort-rows", "rows")
    ),
    "rank-columns": ThemeVariant(Theme.ORDERING, "SCMxrnk", 4, _rank),
}


def draw_colors(n: int, seed: int) -> tuple[int, ...]:
    """Draw ``n`` distinct nonzero colors deterministically from ``seed``."""
    rng = np.random.default_rng(derive_seed(seed, SeedStream.REGISTRY, 0))
    return tuple(int(c) for c in rng.choice(np.arange(1, 10), size=n, replace=False))


def build_theme_representative(
    theme: Theme | str,
    variant: str,
    size: tuple[int, int],
    seed: int,
    colors: tuple[int, ...] | None = None,
) -> Scm:
    """Build the representative SCM ``variant`` of ``theme``.

    Args:
        theme: counting, extension or ordering
        variant: Key of :data:`VARIANTS`
        size: Input grid size
        seed: Seed for the color draw when ``colors`` is not given
        colors: Nonzero colors to use instead of a seeded draw

    Raises:
        ConfigError: if the variant is unknown, belongs to another theme or
            gets the wrong number of colors
    """
    theme = Theme(theme)
    entry = VARIANTS.get(variant)
    if entry is None:
        raise ConfigError(f"unknown {theme.value} variant {variant!r}; known: {sorted(VARIANTS)}")
    if entry.theme is not theme:
        raise ConfigError(f"variant {variant!r} belongs to {entry.theme.value}, not {theme.value}")

    if colors is None:
        colors = draw_colors(entry.n_colors, seed)
    if len(colors) != entry.n_colors:
        raise ConfigError(f"variant {variant!r} takes {entry.n_colors} colors, got {len(colors)}")
    return entry.build(size, colors)
