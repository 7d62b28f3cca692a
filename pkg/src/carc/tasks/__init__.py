"""Task families and the static dataset registry.

Importing this package registers every structural program kind, which
:func:`carc.scm.scm_from_document` needs to decode SCM documents.
"""

from carc.tasks.counting import (
    ColorCountProgram,
    MajorityProgram,
    build_color_count,
    build_majority,
    example_two_scm,
)
from carc.tasks.extension import Direction, RayProgram, build_ray
from carc.tasks.logical import (
    AlternatingByRow,
    Composed,
    LogicalOpSpec,
    LogicalProgram,
    Single,
    build_logical,
    example_one_scm,
)
from carc.tasks.models import Annotations, TaskInstance
from carc.tasks.ordering import RankColumnsProgram, SortProgram, build_rank_columns, build_sort
from carc.tasks.registry import (
    build_extras,
    build_registry,
    build_registry_task,
    registry_ids,
    registry_manifest,
    resolve_scm,
    resolve_task,
)
from carc.tasks.sampling import build_task, draw_intervention, sample_demo
from carc.tasks.themes import VARIANTS, build_theme_representative

__all__ = [
    "VARIANTS",
    "AlternatingByRow",
    "Annotations",
    "ColorCountProgram",
    "Composed",
    "Direction",
    "LogicalOpSpec",
    "LogicalProgram",
    "MajorityProgram",
    "RankColumnsProgram",
    "RayProgram",
    "Single",
    "SortProgram",
    "TaskInstance",
    "build_color_count",
    "build_extras",
    "build_logical",
    "build_majority",
    "build_rank_columns",
    "build_ray",
    "build_registry",
    "build_registry_task",
    "build_sort",
    "build_task",
    "build_theme_representative",
    "draw_intervention",
    "example_one_scm",
    "example_two_scm",
    "registry_ids",
    "registry_manifest",
    "resolve_scm",
    "resolve_task",
    "sample_demo",
]
