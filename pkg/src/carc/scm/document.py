"""Versioned JSON documents for SCMs."""

from typing import Any

from carc.config import settings
from carc.errors import SpecificationError
from carc.scm.models import Scm

SCHEMA_VERSION = 1


def scm_to_document(scm: Scm, max_adjacency_vars: int | None = None) -> dict[str, Any]:
    """Serialize an SCM with its source text and, for small graphs, its adjacency matrix."""
    limit = max_adjacency_vars
    if limit is None:
        limit = settings.generation.max_adjacency_vars
    data = scm.model_dump(mode="json")
    graph = scm.graph
    adjacency = None
    if graph is not None and graph.n <= limit:
        adjacency = graph.adjacency_matrix().ravel().tolist()

    return {
        "schema_version": SCHEMA_VERSION,
        **data,
        "source_text": scm.source_text,
        "adjacency": adjacency,
    }


def scm_from_document(doc: dict[str, Any]) -> Scm:
    """Rebuild an SCM from :func:`scm_to_document` output.

    Program kinds must be registered, i.e. :mod:`carc.tasks` imported.
    """
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SpecificationError(f"unsupported SCM document version {version!r}")

    derived = ("schema_version", "source_text", "adjacency")
    fields = {k: v for k, v in doc.items() if k not in derived}
    return Scm.model_validate(fields)
