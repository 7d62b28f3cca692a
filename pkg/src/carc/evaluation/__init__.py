"""Scoring, program execution and benchmark runs.

The runner lives in :mod:`carc.evaluation.benchmark`; it is not imported
here so scoring stays usable without the gateway.
"""

from carc.evaluation.metrics import hamming_relative, named_operators, score_discovery
from carc.evaluation.models import (
    ContractResult,
    EvalRecord,
    ExecutionResult,
    ExecutionStatus,
    PairScore,
    RecordStatus,
)

__all__ = [
    "ContractResult",
    "EvalRecord",
    "ExecutionResult",
    "ExecutionStatus",
    "PairScore",
    "RecordStatus",
    "hamming_relative",
    "named_operators",
    "score_discovery",
]
