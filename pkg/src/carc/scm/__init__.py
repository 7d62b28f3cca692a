"""Structural causal models over grids."""

from carc.scm.document import scm_from_document, scm_to_document
from carc.scm.engine import (
    apply_intervention,
    counterfactual,
    evaluate,
    evaluate_full,
    sample_distribution,
    sample_exogenous,
    verify_graph,
)
from carc.scm.models import (
    INTERVENTION_PHRASES,
    Bernoulli,
    Categorical,
    ColorRemap,
    ConstMechanism,
    CounterfactualPair,
    ExogenousContext,
    ExogenousSpec,
    FunctionReplace,
    Geometric,
    GeometricOp,
    HardFix,
    Intervention,
    Level,
    LogicalMechanism,
    LogicalOp,
    LogicNegate,
    Region,
    ScaleMechanism,
    Scm,
    ScmDistributionSample,
    Target,
    Theme,
)
from carc.scm.program import StructuralProgram
from carc.scm.seeds import SeedStream, derive_seed, stable_seed

__all__ = [
    "INTERVENTION_PHRASES",
    "Bernoulli",
    "Categorical",
    "ColorRemap",
    "ConstMechanism",
    "CounterfactualPair",
    "ExogenousContext",
    "ExogenousSpec",
    "FunctionReplace",
    "Geometric",
    "GeometricOp",
    "HardFix",
    "Intervention",
    "Level",
    "LogicNegate",
    "LogicalMechanism",
    "LogicalOp",
    "Region",
    "ScaleMechanism",
    "Scm",
    "ScmDistributionSample",
    "SeedStream",
    "StructuralProgram",
    "Target",
    "Theme",
    "apply_intervention",
    "counterfactual",
    "derive_seed",
    "evaluate",
    "evaluate_full",
    "sample_distribution",
    "sample_exogenous",
    "scm_from_document",
    "scm_to_document",
    "stable_seed",
    "verify_graph",
]
