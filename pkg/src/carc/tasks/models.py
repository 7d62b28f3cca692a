"""Task instance models."""

from pydantic import BaseModel, ConfigDict, Field

from carc.errors import ContractError
from carc.grid.models import Pair
from carc.scm.models import CounterfactualPair, ExogenousContext, Scm, Theme

TRAIN_PAIRS = 5
TEST_PAIRS = 1
MIN_COUNTERFACTUALS = 5
MAX_COUNTERFACTUALS = 10


class Annotations(BaseModel):
    """Causal annotations shipped with a task."""

    model_config = ConfigDict(frozen=True)

    source_text: str | None = None
    math_notation: str | None = None
    # Flattened row-major adjacency over input cells then output cells
    adjacency: list[int] | None = None
    variant: str | None = None
    artifact_defined: bool = False


class TaskInstance(BaseModel):
    """One benchmark task: demonstrations, a test pair and jointly observed counterfactuals.

    Decoding is permissive so plain ARC documents load; registry tasks are
    checked with :meth:`check_invariants`.
    """

    model_config = ConfigDict(frozen=True)

    id: str
    theme: Theme | None = None
    train: list[Pair]
    test: list[Pair]
    counterfactuals: list[list[CounterfactualPair]] = Field(default_factory=list)
    # One context per train pair, then the test context
    contexts: list[ExogenousContext] = Field(default_factory=list)
    annotations: Annotations = Field(default_factory=Annotations)
    seed: int | None = None
    scm: Scm | None = None

    @property
    def n_counterfactuals(self) -> int:
        return sum(len(batch) for batch in self.counterfactuals)

    def check_invariants(self) -> None:
        """Raise ContractError if the task breaks the dataset shape rules.

        Five train pairs, one test pair, 5 to 10 counterfactuals per
        demonstration and every counterfactual sharing its demonstration's
        exogenous context.
        """
        if len(self.train) != TRAIN_PAIRS:
            raise ContractError(f"{self.id}: {len(self.train)} train pairs, expected {TRAIN_PAIRS}")
        if len(self.test) != TEST_PAIRS:
            raise ContractError(f"{self.id}: {len(self.test)} test pairs, expected {TEST_PAIRS}")
        if len(self.counterfactuals) != len(self.train):
            raise ContractError(
                f"{self.id}: {len(self.counterfactuals)} counterfactual batches "
                f"for {len(self.train)} demonstrations"
            )
        if len(self.contexts) < len(self.train):
            raise ContractError(f"{self.id}: missing exogenous contexts")

        for k, batch in enumerate(self.counterfactuals):
            if not MIN_COUNTERFACTUALS <= len(batch) <= MAX_COUNTERFACTUALS:
                raise ContractError(
                    f"{self.id}: demo {k} has {len(batch)} counterfactuals, "
                    f"expected {MIN_COUNTERFACTUALS}..{MAX_COUNTERFACTUALS}"
                )
            for cf in batch:
                if cf.context != self.contexts[k]:
                    raise ContractError(f"{self.id}: demo {k} counterfactual uses another context")
                if cf.base != self.train[k]:
                    raise ContractError(f"{self.id}: demo {k} counterfactual base differs")
