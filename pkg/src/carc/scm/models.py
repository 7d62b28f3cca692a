"""SCM data models: exogenous specs, interventions and the SCM itself."""

import math
from enum import Enum
from typing import Annotated, Any, Literal, Self

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    SerializeAsAny,
    field_validator,
    model_validator,
)

from carc.discovery.graph import CausalGraph
from carc.errors import ContractError, SpecificationError
from carc.grid.models import MAX_SIDE, N_COLORS, Pair
from carc.scm.program import StructuralProgram

SCM_ID_PATTERN = r"^SCM[a-z0-9]{4}$"
PROB_TOLERANCE = 1e-9


class Theme(str, Enum):
    """Task themes."""

    COUNTING = "counting"
    EXTENSION = "extension"
    LOGICAL = "logical"
    ORDERING = "ordering"


class Level(str, Enum):
    """Sampling level of a distribution."""

    L1 = "L1"
    L2 = "L2"


class LogicalOp(str, Enum):
    """Elementwise logical operators over grid blocks."""

    AND = "and"
    OR = "or"
    XOR = "xor"

    def apply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self is LogicalOp.AND:
            return a & b
        if self is LogicalOp.OR:
            return a | b
        return a ^ b


# --- exogenous variables ----------------------------------------------------


class Bernoulli(BaseModel):
    """u ~ Ber(p), support {0, 1}."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["bernoulli"] = "bernoulli"
    p: float

    @model_validator(mode="after")
    def _validate(self) -> Self:
        self.check()
        return self

    def check(self) -> None:
        if not (0.0 <= self.p <= 1.0) or math.isnan(self.p):
            raise SpecificationError(f"Bernoulli p must be in [0, 1], got {self.p}")

    @property
    def support(self) -> tuple[int, ...]:
        return (0, 1)


class Categorical(BaseModel):
    """u ~ Cat(support, probs) over color integers."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["categorical"] = "categorical"
    support: tuple[int, ...]
    probs: tuple[float, ...]

    @model_validator(mode="after")
    def _validate(self) -> Self:
        self.check()
        return self

    def check(self) -> None:
        if not self.support:
            raise SpecificationError("categorical support is empty")
        if len(self.support) != len(self.probs):
            raise SpecificationError(
                f"support has {len(self.support)} values but probs has {len(self.probs)}"
            )
        if len(set(self.support)) != len(self.support):
            raise SpecificationError(f"duplicate values in support {self.support}")
        if any(not 0 <= c < N_COLORS for c in self.support):
            raise SpecificationError(f"support values must be colors 0..9, got {self.support}")
        if any(p < 0 or math.isnan(p) for p in self.probs):
            raise SpecificationError(f"negative probability in {self.probs}")
        if abs(math.fsum(self.probs) - 1.0) > PROB_TOLERANCE:
            raise SpecificationError(f"probabilities sum to {math.fsum(self.probs)}, not 1")


VariableSpec = Annotated[Bernoulli | Categorical, Field(discriminator="kind")]


class ExogenousSpec(BaseModel):
    """Distribution p(u) over a grid of exogenous cells.

    ``variables`` holds either one spec shared by every cell or one spec per
    cell in row-major order.
    """

    model_config = ConfigDict(frozen=True)

    variables: tuple[VariableSpec, ...]
    shape: tuple[int, int]

    @model_validator(mode="after")
    def _validate(self) -> Self:
        self.check()
        return self

    def check(self) -> None:
        rows, cols = self.shape
        if not (1 <= rows <= MAX_SIDE and 1 <= cols <= MAX_SIDE):
            raise SpecificationError(f"exogenous shape {self.shape} outside 1..{MAX_SIDE}")
        if len(self.variables) not in (1, rows * cols):
            raise SpecificationError(
                f"expected 1 or {rows * cols} variable specs, got {len(self.variables)}"
            )
        for v in self.variables:
            v.check()

    @property
    def n_cells(self) -> int:
        return self.shape[0] * self.shape[1]

    def variable(self, flat_index: int) -> Bernoulli | Categorical:
        if len(self.variables) == 1:
            return self.variables[0]
        return self.variables[flat_index]

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        """Draw one exogenous grid from ``rng``."""
        if len(self.variables) == 1:
            return _draw_variable(self.variables[0], rng, self.shape)

        flat = np.empty(self.n_cells, dtype=np.int64)
        for k, v in enumerate(self.variables):
            flat[k] = _draw_variable(v, rng, (1,))[0]
        return flat.reshape(self.shape)


def _draw_variable(
    v: Bernoulli | Categorical, rng: np.random.Generator, shape: tuple[int, ...]
) -> np.ndarray:
    if isinstance(v, Bernoulli):
        return (rng.random(shape) < v.p).astype(np.int64)
    probs = np.asarray(v.probs, dtype=np.float64)
    return rng.choice(np.asarray(v.support, dtype=np.int64), size=shape, p=probs / probs.sum())


class ExogenousContext(BaseModel):
    """One realization of the exogenous grid and the seed that produced it."""

    model_config = ConfigDict(frozen=True)

    values: tuple[tuple[int, ...], ...]
    seed: int

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.values), len(self.values[0]) if self.values else 0)

    @classmethod
    def from_array(cls, arr: np.ndarray, seed: int) -> "ExogenousContext":
        return cls(values=tuple(tuple(int(c) for c in row) for row in arr.tolist()), seed=seed)

    def to_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)


# --- selectors and mechanisms -----------------------------------------------


class Region(BaseModel):
    """Selects grid cells: half-open row/column ranges, optionally narrowed to a cell list.

    An empty region selects the whole grid.
    """

    model_config = ConfigDict(frozen=True)

    rows: tuple[int, int] | None = None
    cols: tuple[int, int] | None = None
    cells: tuple[tuple[int, int], ...] | None = None

    def mask(self, shape: tuple[int, int]) -> np.ndarray:
        """Boolean mask over ``shape``; raises ContractError when out of bounds."""
        h, w = shape
        r0, r1 = self.rows if self.rows is not None else (0, h)
        c0, c1 = self.cols if self.cols is not None else (0, w)
        if not (0 <= r0 < r1 <= h and 0 <= c0 < c1 <= w):
            raise ContractError(f"region rows {r0}:{r1}, cols {c0}:{c1} outside grid {shape}")

        m = np.zeros(shape, dtype=bool)
        m[r0:r1, c0:c1] = True
        if self.cells is not None:
            picked = np.zeros(shape, dtype=bool)
            for i, j in self.cells:
                if not (0 <= i < h and 0 <= j < w):
                    raise ContractError(f"cell ({i}, {j}) outside grid {shape}")
                picked[i, j] = True
            m &= picked
        return m


class ConstMechanism(BaseModel):
    """Constant mechanism: v = value."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["const"] = "const"
    value: int = Field(ge=0, le=9)


class ScaleMechanism(BaseModel):
    """Scalar color multiply of the exogenous cell: x = factor * [u != 0]."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["scale"] = "scale"
    factor: int = Field(ge=0, le=9)


class LogicalMechanism(BaseModel):
    """Output cell computed by folding ``op`` over its parent blocks."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["logical"] = "logical"
    op: LogicalOp


Mechanism = Annotated[
    ConstMechanism | ScaleMechanism | LogicalMechanism, Field(discriminator="kind")
]


class Target(BaseModel):
    """Variable selector: a layer (input or output grid) and a region on it."""

    model_config = ConfigDict(frozen=True)

    layer: Literal["input", "output"] = "input"
    region: Region = Field(default_factory=Region)


# --- interventions ----------------------------------------------------------

INTERVENTION_PHRASES: dict[str, str] = {
    "hard_fix": "fixing some values",
    "color_remap": "changing some colors",
    "logic_negate": "inverting some values",
    "geometric": "rotating or flipping it",
    "function_replace": "changing the rule for some values",
}


class GeometricOp(str, Enum):
    """Geometric transforms; quarter turns are clockwise."""

    ROT90 = "rot90"
    ROT180 = "rot180"
    ROT270 = "rot270"
    FLIP_H = "flip_h"
    FLIP_V = "flip_v"

    @property
    def preserves_shape(self) -> bool:
        return self not in (GeometricOp.ROT90, GeometricOp.ROT270)

    def transform(self, block: np.ndarray) -> np.ndarray:
        if self is GeometricOp.ROT90:
            return np.rot90(block, k=-1)
        if self is GeometricOp.ROT180:
            return np.rot90(block, k=2)
        if self is GeometricOp.ROT270:
            return np.rot90(block, k=1)
        if self is GeometricOp.FLIP_H:
            return np.fliplr(block)
        return np.flipud(block)


class _InterventionBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    @property
    def description(self) -> str:
        return INTERVENTION_PHRASES[self.kind]  # type: ignore[attr-defined]

    @property
    def layer(self) -> Literal["input", "output"]:
        return "input"


class HardFix(_InterventionBase):
    """do(x[cells] = value)."""

    kind: Literal["hard_fix"] = "hard_fix"
    cells: Region = Field(default_factory=Region)
    value: int = Field(ge=0, le=9)


class ColorRemap(_InterventionBase):
    """Soft edit x[cells] -> mapping(x[cells]); unmapped colors are left as they are."""

    kind: Literal["color_remap"] = "color_remap"
    mapping: dict[int, int] = Field(default_factory=dict)
    cells: Region = Field(default_factory=Region)

    @field_validator("mapping")
    @classmethod
    def _check_mapping(cls, v: dict[int, int]) -> dict[int, int]:
        for src, dst in v.items():
            if not (0 <= src < N_COLORS and 0 <= dst < N_COLORS):
                raise ValueError(f"color mapping {src}->{dst} outside 0..9")
        return v

    def lookup_table(self) -> np.ndarray:
        lut = np.arange(N_COLORS, dtype=np.int64)
        for src, dst in self.mapping.items():
            lut[src] = dst
        return lut


class LogicNegate(_InterventionBase):
    """Soft edit: nonzero cells become 0, zero cells take the panel's active color."""

    kind: Literal["logic_negate"] = "logic_negate"
    cells: Region = Field(default_factory=Region)


class Geometric(_InterventionBase):
    """Rotate or flip every input panel."""

    kind: Literal["geometric"] = "geometric"
    op: GeometricOp


class FunctionReplace(_InterventionBase):
    """Replace the local mechanism of the targeted variables."""

    kind: Literal["function_replace"] = "function_replace"
    target: Target = Field(default_factory=Target)
    new_fn: Mechanism

    @model_validator(mode="after")
    def _check_layer(self) -> Self:
        if self.target.layer == "input" and isinstance(self.new_fn, LogicalMechanism):
            raise ValueError("logical mechanisms apply to output cells only")
        if self.target.layer == "output" and isinstance(self.new_fn, ScaleMechanism):
            raise ValueError("scale mechanisms apply to input cells only")
        return self

    @property
    def layer(self) -> Literal["input", "output"]:
        return self.target.layer


Intervention = Annotated[
    HardFix | ColorRemap | LogicNegate | Geometric | FunctionReplace,
    Field(discriminator="kind"),
]


# --- the SCM ------------------------------------------------------------------


class Scm(BaseModel):
    """A structural causal model over grids.

    ``edits`` is empty for a base model; :func:`carc.scm.engine.apply_intervention`
    returns submodels with the intervention appended.
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(pattern=SCM_ID_PATTERN)
    theme: Theme
    exogenous: ExogenousSpec
    program: SerializeAsAny[StructuralProgram]
    size_params: tuple[int, int]
    palette: tuple[int, ...]
    math_notation: str | None = None
    variant: str | None = None
    artifact_defined: bool = False
    version: int = 1
    edits: tuple[Intervention, ...] = ()

    @field_validator("program", mode="before")
    @classmethod
    def _decode_program(cls, v: Any) -> Any:
        if isinstance(v, dict):
            return StructuralProgram.from_document(v)
        return v

    @field_validator("palette")
    @classmethod
    def _check_palette(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(not 0 <= c < N_COLORS for c in v):
            raise ValueError(f"palette values must be in 0..9, got {v}")
        return v

    @model_validator(mode="after")
    def _check_consistency(self) -> Self:
        if self.exogenous.shape != self.program.input_shape:
            raise ValueError(
                f"exogenous shape {self.exogenous.shape} does not match program input "
                f"shape {self.program.input_shape}"
            )
        graph = self.program.causal_graph()
        if graph is not None and not graph.is_dag():
            raise ValueError("declared causal graph is not acyclic")
        return self

    @property
    def graph(self) -> CausalGraph | None:
        """Declared graph of the base model; submodels carry none."""
        if self.edits:
            return None
        return self.program.causal_graph()

    @property
    def source_text(self) -> str:
        return self.program.source_text()


class CounterfactualPair(BaseModel):
    """A pair produced under an intervention with the factual exogenous context held fixed."""

    model_config = ConfigDict(frozen=True)

    intervention: Intervention
    base: Pair
    pair: Pair
    context: ExogenousContext
    base_index: int | None = None


class ScmDistributionSample(BaseModel):
    """n flattened draws: input cells then output cells, row-major."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    data: np.ndarray
    level: Level
    seed: int
    input_shape: tuple[int, int]
    output_shape: tuple[int, int]
    intervention: Intervention | None = None

    @property
    def n(self) -> int:
        return int(self.data.shape[0])

    @property
    def n_inputs(self) -> int:
        return self.input_shape[0] * self.input_shape[1]

    @property
    def n_outputs(self) -> int:
        return self.output_shape[0] * self.output_shape[1]
