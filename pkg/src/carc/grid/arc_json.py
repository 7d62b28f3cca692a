"""ARC-compatible JSON encoding of task instances.

Official ARC consumers see ``train`` and ``test``; everything causal lives
under the ``causal`` key::

    {"train": [{"input": [[...]], "output": [[...]]}, ...],
     "test": [{"input": [[...]], "output": [[...]]}],
     "causal": {"id": ..., "theme": ..., "seed": ..., "contexts": [...],
                "counterfactuals": [[{"intervention": {...}, "input": ..., "output": ...}]],
                "annotations": {...}, "scm": {...}}}
"""

import json
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from carc.errors import CarcError, DecodeError
from carc.grid.models import Grid, Pair
from carc.scm.document import scm_from_document, scm_to_document
from carc.scm.models import CounterfactualPair, ExogenousContext, Intervention, Theme
from carc.tasks.models import Annotations, TaskInstance

_intervention_adapter: TypeAdapter[Intervention] = TypeAdapter(Intervention)


class _PairDoc(BaseModel):
    model_config = ConfigDict(extra="allow")

    input: list[list[int]]
    output: list[list[int]]


class _CounterfactualDoc(BaseModel):
    intervention: dict[str, Any]
    input: list[list[int]]
    output: list[list[int]]


class _ContextDoc(BaseModel):
    seed: int
    values: list[list[int]]


class _CausalDoc(BaseModel):
    id: str = ""
    theme: Theme | None = None
    seed: int | None = None
    contexts: list[_ContextDoc] = Field(default_factory=list)
    counterfactuals: list[list[_CounterfactualDoc]] = Field(default_factory=list)
    annotations: dict[str, Any] = Field(default_factory=dict)
    scm: dict[str, Any] | None = None


class _TaskDoc(BaseModel):
    train: list[_PairDoc]
    test: list[_PairDoc]
    causal: _CausalDoc | None = None


def _loc_path(loc: tuple[int | str, ...]) -> str:
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else part
    return path


def _grid(rows: list[list[int]], path: str) -> Grid:
    try:
        return Grid.from_list(rows)
    except (ValidationError, IndexError) as e:
        raise DecodeError(path, f"invalid grid: {e}") from e


def _pair(doc: _PairDoc | _CounterfactualDoc, path: str) -> Pair:
    return Pair(input=_grid(doc.input, f"{path}.input"), output=_grid(doc.output, f"{path}.output"))


def _has_extensions(task: TaskInstance) -> bool:
    return bool(
        task.id
        or task.theme is not None
        or task.seed is not None
        or task.contexts
        or task.counterfactuals
        or task.scm is not None
        or task.annotations != Annotations()
    )


def task_to_document(task: TaskInstance) -> dict[str, Any]:
    """Encode a task as an ARC document with the ``causal`` extension key."""
    doc: dict[str, Any] = {
        "train": [p.to_json() for p in task.train],
        "test": [p.to_json() for p in task.test],
    }
    if not _has_extensions(task):
        return doc

    doc["causal"] = {
        "id": task.id,
        "theme": task.theme.value if task.theme is not None else None,
        "seed": task.seed,
        "contexts": [
            {"seed": u.seed, "values": [list(r) for r in u.values]} for u in task.contexts
        ],
        "counterfactuals": [
            [
                {
                    "intervention": cf.intervention.model_dump(mode="json"),
                    **cf.pair.to_json(),
                }
                for cf in batch
            ]
            for batch in task.counterfactuals
        ],
        "annotations": task.annotations.model_dump(mode="json"),
        # The adjacency already sits in the annotations
        "scm": scm_to_document(task.scm, max_adjacency_vars=0) if task.scm is not None else None,
    }
    return doc


def to_arc_json(task: TaskInstance, indent: int | None = None) -> str:
    """Serialize a task to ARC JSON text."""
    return json.dumps(task_to_document(task), indent=indent)


def from_arc_json(text: str, task_id: str = "") -> TaskInstance:
    """Decode ARC JSON text, with or without the ``causal`` key.

    Args:
        text: JSON document
        task_id: Id to use when the document carries none (plain ARC files)

    Raises:
        DecodeError: naming the offending path, e.g. ``train[0].output``
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DecodeError("$", f"malformed JSON: {e}") from e
    return task_from_document(raw, task_id=task_id)


def task_from_document(raw: Any, task_id: str = "") -> TaskInstance:
    try:
        doc = _TaskDoc.model_validate(raw)
    except ValidationError as e:
        err = e.errors()[0]
        raise DecodeError(_loc_path(err["loc"]) or "$", err["msg"]) from e

    train = [_pair(p, f"train[{k}]") for k, p in enumerate(doc.train)]
    test = [_pair(p, f"test[{k}]") for k, p in enumerate(doc.test)]
    causal = doc.causal
    if causal is None:
        return TaskInstance(id=task_id, train=train, test=test)

    contexts = [
        ExogenousContext(values=tuple(tuple(r) for r in c.values), seed=c.seed)
        for c in causal.contexts
    ]
    if len(causal.counterfactuals) > len(train):
        raise DecodeError("causal.counterfactuals", "more counterfactual batches than demos")
    if causal.counterfactuals and len(contexts) < len(causal.counterfactuals):
        raise DecodeError("causal.contexts", "counterfactuals need the demos' exogenous contexts")

    batches = []
    for k, batch in enumerate(causal.counterfactuals):
        decoded = []
        for m, cf in enumerate(batch):
            path = f"causal.counterfactuals[{k}][{m}]"
            try:
                intervention = _intervention_adapter.validate_python(cf.intervention)
            except ValidationError as e:
                raise DecodeError(f"{path}.intervention", str(e.errors()[0]["msg"])) from e
            decoded.append(
                CounterfactualPair(
                    intervention=intervention,
                    base=train[k],
                    pair=_pair(cf, path),
                    context=contexts[k],
                    base_index=k,
                )
            )
        batches.append(decoded)

    scm = None
    if causal.scm is not None:
        try:
            scm = scm_from_document(causal.scm)
        except (ValidationError, CarcError) as e:
            raise DecodeError("causal.scm", str(e)) from e

    try:
        annotations = Annotations.model_validate(causal.annotations)
    except ValidationError as e:
        raise DecodeError("causal.annotations", str(e.errors()[0]["msg"])) from e

    return TaskInstance(
        id=causal.id or task_id,
        theme=causal.theme,
        train=train,
        test=test,
        counterfactuals=batches,
        contexts=contexts,
        annotations=annotations,
        seed=causal.seed,
        scm=scm,
    )
