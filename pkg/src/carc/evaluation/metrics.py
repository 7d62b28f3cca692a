"""Response metrics: relative Hamming distance and operator-set matching."""

import re

import numpy as np

from carc.grid.models import Grid, ParseFailure
from carc.prompts.models import OperatorAnswer

LEAD_IN = "the logical operators are"

_OPERATOR = re.compile(r"\b(XNOR|NAND|NOR|XOR|AND|OR|NOT)\b", re.IGNORECASE)


def hamming_relative(pred: Grid | ParseFailure | None, truth: Grid) -> float:
    """Fraction of cells where ``pred`` differs from ``truth``.

    A missing or unparseable prediction, or one of another shape, scores 1.0.
    """
    if not isinstance(pred, Grid) or pred.shape != truth.shape:
        return 1.0
    differing = np.count_nonzero(pred.to_array() != truth.to_array())
    return float(differing) / (truth.rows * truth.cols)


def _joined(text: str, left: re.Match[str], right: re.Match[str]) -> bool:
    return text[left.end() : right.start()].strip(" ,") == ""


def named_operators(text: str) -> set[str]:
    """Operator names mentioned in a response, upper-cased.

    When the response spells any operator in capitals only capitalized names
    count, so "AND and XOR" names two operators. Otherwise a lower-case "and"
    or "or" sitting between two operator names is read as a conjunction.
    """
    lowered = text.lower()
    start = lowered.find(LEAD_IN)
    if start >= 0:
        text = text[start + len(LEAD_IN) :]

    matches = list(_OPERATOR.finditer(text))
    upper = {m.group(0) for m in matches if m.group(0).isupper()}
    if upper:
        return upper

    names = set()
    for k, m in enumerate(matches):
        word = m.group(0).upper()
        if (
            word in ("AND", "OR")
            and 0 < k < len(matches) - 1
            and _joined(text, matches[k - 1], m)
            and _joined(text, m, matches[k + 1])
        ):
            continue
        names.add(word)
    return names


def score_discovery(response: str, expected: OperatorAnswer) -> bool:
    """True iff the response names exactly the expected operator set, in any order."""
    return named_operators(response) == set(expected.operators)
