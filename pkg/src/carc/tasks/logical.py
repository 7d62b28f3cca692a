"""Logical task family: stacked input blocks combined elementwise into one output block."""

import logging
from typing import Annotated, Literal, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from carc.errors import SizeError
from carc.grid.models import MAX_SIDE
from carc.scm.models import Bernoulli, ExogenousSpec, LogicalOp, Scm, Theme
from carc.scm.program import Features, StructuralProgram

logger = logging.getLogger(__name__)

FAMILY_IDS = {"single": "SCMdky5", "alternating": "SCMu3am", "composed": "SCMtcbq"}


class Single(BaseModel):
    """One operator over two blocks."""

    model_config = ConfigDict(frozen=True)

    form: Literal["single"] = "single"
    op: LogicalOp

    @property
    def n_blocks(self) -> int:
        return 2


class AlternatingByRow(BaseModel):
    """``even`` on even output rows, ``odd`` on odd rows, over two blocks."""

    model_config = ConfigDict(frozen=True)

    form: Literal["alternating"] = "alternating"
    even: LogicalOp = LogicalOp.OR
    odd: LogicalOp = LogicalOp.AND

    @property
    def n_blocks(self) -> int:
        return 2


class Composed(BaseModel):
    """``outer(inner(b1, b2), b3)``; xor after and by default."""

    model_config = ConfigDict(frozen=True)

    form: Literal["composed"] = "composed"
    inner: LogicalOp = LogicalOp.AND
    outer: LogicalOp = LogicalOp.XOR

    @property
    def n_blocks(self) -> int:
        return 3


LogicalForm = Annotated[Single | AlternatingByRow | Composed, Field(discriminator="form")]


class LogicalOpSpec(BaseModel):
    """Operators and colors of a logical task."""

    model_config = ConfigDict(frozen=True)

    ops: LogicalForm
    block_colors: tuple[int, ...]
    out_color: int = Field(ge=1, le=9)

    @model_validator(mode="after")
    def _check_colors(self) -> Self:
        if len(self.block_colors) != self.ops.n_blocks:
            raise ValueError(
                f"{self.ops.form} needs {self.ops.n_blocks} block colors, "
                f"got {len(self.block_colors)}"
            )
        if len(set(self.block_colors)) != len(self.block_colors):
            raise ValueError(f"block colors must be distinct: {self.block_colors}")
        if any(not 1 <= c <= 9 for c in self.block_colors):
            raise ValueError(f"block colors must be nonzero colors: {self.block_colors}")
        return self

    @property
    def operators(self) -> frozenset[str]:
        """Canonical upper-case operator names."""
        ops = self.ops
        if isinstance(ops, Single):
            return frozenset({ops.op.name})
        if isinstance(ops, AlternatingByRow):
            return frozenset({ops.even.name, ops.odd.name})
        return frozenset({ops.inner.name, ops.outer.name})

    @property
    def expression(self) -> str:
        """Composition of the operators over blocks b1, b2(, b3)."""
        ops = self.ops
        if isinstance(ops, Single):
            return f"b1 {ops.op.name} b2"
        if isinstance(ops, AlternatingByRow):
            return f"b1 {ops.even.name} b2 on even rows, b1 {ops.odd.name} b2 on odd rows"
        return f"(b1 {ops.inner.name} b2) {ops.outer.name} b3"

    @property
    def label(self) -> str:
        """Short label, e.g. ``xor`` for a single operator or the form name."""
        ops = self.ops
        return ops.op.value if isinstance(ops, Single) else ops.form


class LogicalProgram(StructuralProgram):
    """x[b*h + i, j] = color_b * u; y[i, j] = out_color * op(blocks at (i, j))."""

    kind: Literal["logical"] = "logical"
    spec: LogicalOpSpec
    block_shape: tuple[int, int]

    @property
    def input_shape(self) -> tuple[int, int]:
        h, w = self.block_shape
        return (self.spec.ops.n_blocks * h, w)

    @property
    def output_shape(self) -> tuple[int, int]:
        return self.block_shape

    def inputs(self, u: np.ndarray) -> np.ndarray:
        h = self.block_shape[0]
        colors = np.repeat(np.asarray(self.spec.block_colors, dtype=np.int64), h)
        return colors[:, None] * (u != 0)

    def _blocks(self, x: np.ndarray) -> list[np.ndarray]:
        h = self.block_shape[0]
        return [x[b * h : (b + 1) * h] != 0 for b in range(self.spec.ops.n_blocks)]

    def outputs(self, x: np.ndarray) -> tuple[np.ndarray, Features]:
        blocks = self._blocks(x)
        ops = self.spec.ops
        if isinstance(ops, Single):
            z = ops.op.apply(blocks[0], blocks[1])
        elif isinstance(ops, AlternatingByRow):
            even = ops.even.apply(blocks[0], blocks[1])
            odd = ops.odd.apply(blocks[0], blocks[1])
            rows = np.arange(self.block_shape[0])[:, None]
            z = np.where(rows % 2 == 0, even, odd)
        else:
            z = ops.outer.apply(ops.inner.apply(blocks[0], blocks[1]), blocks[2])
        return self.spec.out_color * z.astype(np.int64), {}

    @property
    def supports_operator(self) -> bool:
        return True

    def apply_operator(self, op: str, x: np.ndarray) -> np.ndarray:
        operator = LogicalOp(op)
        blocks = self._blocks(x)
        z = blocks[0]
        for block in blocks[1:]:
            z = operator.apply(z, block)
        return self.spec.out_color * z.astype(np.int64)

    def panels(self) -> list[tuple[int, int]]:
        h = self.block_shape[0]
        return [(b * h, (b + 1) * h) for b in range(self.spec.ops.n_blocks)]

    def active_colors(self, palette: tuple[int, ...]) -> np.ndarray:
        h, w = self.block_shape
        colors = np.repeat(np.asarray(self.spec.block_colors, dtype=np.int64), h)
        return np.broadcast_to(colors[:, None], (len(colors), w)).copy()

    def parents(self) -> list[list[int]]:
        h, w = self.block_shape
        k = self.spec.ops.n_blocks
        return [[(b * h + i) * w + j for b in range(k)] for i in range(h) for j in range(w)]

    def math_notation(self) -> str:
        h, w = self.block_shape
        k = self.spec.ops.n_blocks
        lines = [f"u[i,j] ~ Ber(0.5), i in [0,{k * h - 1}], j in [0,{w - 1}]"]
        for b, color in enumerate(self.spec.block_colors):
            lines.append(f"x[i,j] = {color}*u[i,j] for {b * h} <= i < {(b + 1) * h}")
        args = ", ".join(f"x[i+{b * h},j]" if b else "x[i,j]" for b in range(k))
        ops = self.spec.ops
        out = self.spec.out_color
        if isinstance(ops, Single):
            lines.append(f"y[i,j] = {out}*{ops.op.value}({args})")
        elif isinstance(ops, AlternatingByRow):
            lines.append(f"y[i,j] = {out}*{ops.even.value}({args}) for even i")
            lines.append(f"y[i,j] = {out}*{ops.odd.value}({args}) for odd i")
        else:
            lines.append(
                f"y[i,j] = {out}*{ops.outer.value}({ops.inner.value}(x[i,j], x[i+{h},j]), "
                f"x[i+{2 * h},j])"
            )
        return "\n".join(lines)

    def source_text(self) -> str:
        ops = self.spec.ops
        if isinstance(ops, Single):
            expr = _py_op(ops.op, "a", "b")
        elif isinstance(ops, AlternatingByRow):
            even = _py_op(ops.even, "a", "b")
            odd = _py_op(ops.odd, "a", "b")
            expr = f"({even}) if i % 2 == 0 else ({odd})"
        else:
            expr = _py_op(ops.outer, f"({_py_op(ops.inner, 'a', 'b')})", "c")
        n_blocks = ops.n_blocks
        names = ", ".join("abc"[:n_blocks])
        return _LOGICAL_SOURCE.format(
            block_rows=self.block_shape[0],
            n_blocks=n_blocks,
            out_color=self.spec.out_color,
            names=names,
            expr=expr,
        )


def _py_op(op: LogicalOp, a: str, b: str) -> str:
    if op is LogicalOp.AND:
        return f"{a} and {b}"
    if op is LogicalOp.OR:
        return f"{a} or {b}"
    return f"{a} != {b}"


_LOGICAL_SOURCE = '''import json
import sys

BLOCK_ROWS = {block_rows}
BLOCKS = {n_blocks}
OUT_COLOR = {out_color}


def solve(grid):
    width = len(grid[0])
    out = []
    for i in range(BLOCK_ROWS):
        row = []
        for j in range(width):
            {names} = (grid[b * BLOCK_ROWS + i][j] != 0 for b in range(BLOCKS))
            row.append(OUT_COLOR if ({expr}) else 0)
        out.append(row)
    return out


if __name__ == "__main__":
    print(json.dumps(solve(json.load(sys.stdin))))
'''


def build_logical(
    spec: LogicalOpSpec,
    size: tuple[int, int],
    palette: tuple[int, ...] | None = None,
    scm_id: str | None = None,
    variant: str | None = None,
) -> Scm:
    """Build a logical SCM with ``h x w`` blocks stacked vertically.

    Args:
        spec: Operators and colors
        size: Block size (h, w); the input is k*h x w
        palette: Colors to record for the SCM; defaults to 0, block colors, output color
        scm_id: Override the family id (SCMdky5, SCMu3am, SCMtcbq)
        variant: Registry variant label

    Raises:
        SizeError: if the stacked input does not fit in 30 rows
    """
    h, w = size
    k = spec.ops.n_blocks
    if not (1 <= h and 1 <= w <= MAX_SIDE and k * h <= MAX_SIDE):
        raise SizeError(f"{k} stacked {h}x{w} blocks do not fit a {MAX_SIDE}x{MAX_SIDE} grid")

    program = LogicalProgram(spec=spec, block_shape=(h, w))
    if palette is None:
        palette = tuple(sorted({0, *spec.block_colors, spec.out_color}))

    logger.debug(f"Built logical {spec.label} SCM with {k} blocks of {h}x{w}")
    return Scm(
        id=scm_id or FAMILY_IDS[spec.ops.form],
        theme=Theme.LOGICAL,
        exogenous=ExogenousSpec(variables=(Bernoulli(p=0.5),), shape=program.input_shape),
        program=program,
        size_params=(h, w),
        palette=palette,
        math_notation=program.math_notation(),
        variant=variant or spec.label,
    )


def example_one_scm() -> Scm:
    """The 6x5 xor SCM: y[i,j] = 6*xor(x[i,j], x[i+3,j]) with blocks colored 9 and 4."""
    spec = LogicalOpSpec(ops=Single(op=LogicalOp.XOR), block_colors=(9, 4), out_color=6)
    return build_logical(spec, (3, 5), scm_id="SCM31d5", variant="31d5ba1a")
