"""Prompt rendering for the four query themes."""

from carc.prompts.forge import expected_answer, oracle_response, render_prompt, template_version
from carc.prompts.models import (
    DemoMode,
    ExecutionLimits,
    ExpectedAnswer,
    GridAnswer,
    OperatorAnswer,
    ProgramContract,
    Prompt,
    PromptConfig,
    Provenance,
    QueryTheme,
)

__all__ = [
    "DemoMode",
    "ExecutionLimits",
    "ExpectedAnswer",
    "GridAnswer",
    "OperatorAnswer",
    "ProgramContract",
    "Prompt",
    "PromptConfig",
    "Provenance",
    "QueryTheme",
    "expected_answer",
    "oracle_response",
    "render_prompt",
    "template_version",
]
