"""Tests that single-cell flips recover the declared causal graphs."""

import pytest

from carc.discovery.graph import shd
from carc.errors import ContractError, OracleLimitError
from carc.scm.engine import verify_graph
from carc.scm.models import LogicalOp
from carc.tasks.counting import build_color_count
from carc.tasks.extension import Direction, build_ray
from carc.tasks.logical import Composed, LogicalOpSpec, Single, build_logical, example_one_scm


def test_xor_example_graph():
    """Test the 6x5 xor SCM: each output cell has exactly its two block parents."""
    scm = example_one_scm()

    recovered = verify_graph(scm)

    assert recovered == scm.graph
    assert recovered.n == 45
    assert recovered.parents(30) == [0, 15]
    assert recovered.parents(44) == [14, 29]


@pytest.mark.parametrize("op", list(LogicalOp))
def test_single_operator_graphs(op):
    """Test every single-operator SCM on 3x3 blocks."""
    spec = LogicalOpSpec(ops=Single(op=op), block_colors=(4, 5), out_color=2)
    scm = build_logical(spec, (3, 3))

    assert shd(verify_graph(scm), scm.graph) == 0


def test_composed_graph():
    """Test the composed SCM on 4x4 blocks: three parents per output cell."""
    spec = LogicalOpSpec(ops=Composed(), block_colors=(4, 5, 2), out_color=1)
    scm = build_logical(spec, (4, 4))

    recovered = verify_graph(scm)

    assert recovered == scm.graph
    assert all(len(recovered.parents(48 + k)) == 3 for k in range(16))


@pytest.mark.parametrize(
    "directions",
    [(Direction.RIGHT,), (Direction.RIGHT, Direction.DOWN, Direction.LEFT, Direction.UP)],
)
def test_ray_graphs(directions):
    """Test ray SCMs: an output cell depends on the cells behind it."""
    scm = build_ray((4, 4), directions, (2, 3), scm_id="SCMxray", variant="ray")

    assert verify_graph(scm) == scm.graph


def test_oracle_cell_limit():
    """Test the graph oracle refuses grids above the cell limit."""
    spec = LogicalOpSpec(ops=Single(op=LogicalOp.AND), block_colors=(4, 5), out_color=2)
    scm = build_logical(spec, (10, 10))

    with pytest.raises(OracleLimitError):
        verify_graph(scm)


def test_variable_output_shape_has_no_graph():
    """Test the graph oracle needs a fixed output shape."""
    scm = build_color_count((3, 3))

    with pytest.raises(ContractError):
        verify_graph(scm)
