"""Structural program base class.

A structural program is the deterministic part of an SCM: it maps an
exogenous grid ``u`` to an input grid ``x`` (the input mechanisms) and
``x`` to an output grid ``y`` (the output mechanisms). Concrete programs
live in :mod:`carc.tasks` and register themselves by ``kind`` so SCM
documents can be decoded back into the right class.
"""

from abc import ABC, abstractmethod
from typing import Any, ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict

from carc.discovery.graph import CausalGraph
from carc.errors import ContractError, SpecificationError

Features = dict[str, list[int]]


class StructuralProgram(BaseModel, ABC):
    """Deterministic structural functions of an SCM."""

    model_config = ConfigDict(frozen=True)

    kind: str

    kinds: ClassVar[dict[str, type["StructuralProgram"]]] = {}

    @classmethod
    def __pydantic_init_subclass__(cls, **kwargs: Any) -> None:
        super().__pydantic_init_subclass__(**kwargs)
        kind = cls.model_fields["kind"].default
        if isinstance(kind, str):
            StructuralProgram.kinds[kind] = cls

    @classmethod
    def from_document(cls, data: dict[str, Any]) -> "StructuralProgram":
        """Decode a serialized program by its ``kind`` field."""
        kind = data.get("kind")
        program_cls = cls.kinds.get(str(kind))
        if program_cls is None:
            raise SpecificationError(f"unknown structural program kind: {kind!r}")
        return program_cls.model_validate(data)

    @property
    @abstractmethod
    def input_shape(self) -> tuple[int, int]:
        """Shape of the exogenous grid and of the input grid."""

    @property
    def output_shape(self) -> tuple[int, int] | None:
        """Fixed output shape, or None when it depends on the input."""
        return None

    @abstractmethod
    def inputs(self, u: np.ndarray) -> np.ndarray:
        """Input mechanisms: x = f_x(u), cell by cell."""

    @abstractmethod
    def outputs(self, x: np.ndarray) -> tuple[np.ndarray, Features]:
        """Output mechanisms: y = f_y(x), plus array-level features."""

    @abstractmethod
    def source_text(self) -> str:
        """Standalone Python program reading a JSON grid on stdin and printing the output."""

    def math_notation(self) -> str | None:
        return None

    def panels(self) -> list[tuple[int, int]]:
        """Row ranges of the input that geometric edits transform independently."""
        return [(0, self.input_shape[0])]

    def active_colors(self, palette: tuple[int, ...]) -> np.ndarray:
        """Color a negated zero cell takes, per input cell."""
        nonzero = [c for c in palette if c != 0]
        return np.full(self.input_shape, nonzero[0] if nonzero else 1, dtype=np.int64)

    def parents(self) -> list[list[int]] | None:
        """Flat input indices feeding each output cell (row-major), when declared."""
        return None

    def apply_operator(self, op: str, x: np.ndarray) -> np.ndarray:
        """Evaluate a replacement logical operator over the input (output-layer edits)."""
        raise ContractError(f"{self.kind} programs have no replaceable logical operator")

    @property
    def supports_operator(self) -> bool:
        return False

    def causal_graph(self) -> CausalGraph | None:
        """Declared graph over input cells then output cells, flattened row-major."""
        parents = self.parents()
        out_shape = self.output_shape
        if parents is None or out_shape is None:
            return None

        n_in = int(np.prod(self.input_shape))
        n_out = out_shape[0] * out_shape[1]
        edges = frozenset((p, n_in + k) for k, ps in enumerate(parents) for p in ps)
        return CausalGraph(n=n_in + n_out, directed=edges)
