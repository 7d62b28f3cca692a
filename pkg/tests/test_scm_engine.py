"""Tests for SCM sampling, interventions and counterfactuals."""

import numpy as np
import pytest

from carc.errors import ContractError
from carc.scm.engine import (
    apply_intervention,
    counterfactual,
    evaluate,
    evaluate_full,
    sample_distribution,
    sample_exogenous,
)
from carc.scm.models import (
    ColorRemap,
    ExogenousContext,
    FunctionReplace,
    Geometric,
    GeometricOp,
    HardFix,
    Level,
    LogicalMechanism,
    LogicalOp,
    LogicNegate,
    Region,
    Target,
)
from carc.tasks.counting import example_two_scm
from carc.tasks.logical import example_one_scm


@pytest.fixture
def xor_scm():
    return example_one_scm()


def test_l1_samples_follow_xor(xor_scm):
    """Test every L1 row satisfies y = 6 * xor(x[i], x[i+3])."""
    sample = sample_distribution(xor_scm, 1000, Level.L1, seed=7)

    x = sample.data[:, : sample.n_inputs].reshape(-1, 6, 5)
    y = sample.data[:, sample.n_inputs :].reshape(-1, 3, 5)
    assert sample.n == 1000
    assert set(np.unique(x[:, :3])) <= {0, 9}
    assert set(np.unique(x[:, 3:])) <= {0, 4}
    assert (y == 6 * ((x[:, :3] != 0) ^ (x[:, 3:] != 0))).all()


def test_first_row_matches_evaluate(xor_scm):
    """Test row 0 of a sample equals evaluating the context drawn from the same seed."""
    sample = sample_distribution(xor_scm, 3, Level.L1, seed=11)
    pair = evaluate(xor_scm, sample_exogenous(xor_scm.exogenous, 11))

    assert sample.data[0, :30].tolist() == pair.input.to_array().ravel().tolist()
    assert sample.data[0, 30:].tolist() == pair.output.to_array().ravel().tolist()


def test_sampling_is_deterministic(xor_scm):
    """Test the same seed gives the same context."""
    assert sample_exogenous(xor_scm.exogenous, 5) == sample_exogenous(xor_scm.exogenous, 5)


def test_color_remap_leaves_output(xor_scm):
    """Test remapping 9 to 1 changes the input colors but not the output on 500 contexts."""
    remapped = apply_intervention(xor_scm, ColorRemap(mapping={9: 1}))

    for seed in range(500):
        u = sample_exogenous(xor_scm.exogenous, seed)
        base = evaluate(xor_scm, u)

        edited = evaluate(remapped, u)

        top = base.input.to_array()[:3]
        assert (edited.input.to_array()[:3] == np.where(top == 9, 1, top)).all()
        assert edited.output == base.output


def test_hard_fix_top_block(xor_scm):
    """Test fixing the top block to 0 leaves y = 6 * [x[i+3] != 0] on 500 samples."""
    iv = HardFix(cells=Region(rows=(0, 3)), value=0)
    sample = sample_distribution(xor_scm, 500, Level.L2, seed=2, intervention=iv)

    x = sample.data[:, :30].reshape(-1, 6, 5)
    y = sample.data[:, 30:].reshape(-1, 3, 5)
    assert (x[:, :3] == 0).all()
    assert (y == 6 * (x[:, 3:] != 0)).all()


def test_logic_negate_inverts_cells(xor_scm):
    """Test negation clears nonzero cells and paints zero cells with the block color."""
    u = sample_exogenous(xor_scm.exogenous, 4)
    base = evaluate(xor_scm, u).input.to_array()

    edited = evaluate(apply_intervention(xor_scm, LogicNegate()), u).input.to_array()

    assert (edited[:3] == np.where(base[:3] != 0, 0, 9)).all()
    assert (edited[3:] == np.where(base[3:] != 0, 0, 4)).all()


def test_function_replace_output_operator(xor_scm):
    """Test swapping the output mechanism to AND."""
    iv = FunctionReplace(
        target=Target(layer="output"), new_fn=LogicalMechanism(op=LogicalOp.AND)
    )
    u = sample_exogenous(xor_scm.exogenous, 9)

    pair = evaluate(apply_intervention(xor_scm, iv), u)

    x = pair.input.to_array()
    assert (pair.output.to_array() == 6 * ((x[:3] != 0) & (x[3:] != 0))).all()


def test_flip_applies_per_panel(xor_scm):
    """Test a horizontal flip mirrors each block in place."""
    u = sample_exogenous(xor_scm.exogenous, 1)
    base = evaluate(xor_scm, u).input.to_array()

    edited = evaluate(apply_intervention(xor_scm, Geometric(op=GeometricOp.FLIP_H)), u)

    assert (edited.input.to_array() == base[:, ::-1]).all()


def test_invalid_interventions(xor_scm):
    """Test out-of-bounds regions and quarter turns of non-square panels are rejected."""
    with pytest.raises(ContractError):
        apply_intervention(xor_scm, HardFix(cells=Region(rows=(0, 9)), value=0))
    with pytest.raises(ContractError):
        apply_intervention(xor_scm, Geometric(op=GeometricOp.ROT90))


def test_intervention_returns_submodel(xor_scm):
    """Test the base SCM is untouched and the submodel drops the declared graph."""
    sub = apply_intervention(xor_scm, HardFix(value=0))

    assert xor_scm.edits == ()
    assert len(sub.edits) == 1
    assert sub.graph is None
    assert xor_scm.graph is not None


def test_counterfactuals_share_context(xor_scm):
    """Test each counterfactual is evaluated on the factual context."""
    u = sample_exogenous(xor_scm.exogenous, 6)
    ivs = [ColorRemap(mapping={4: 7}), HardFix(cells=Region(rows=(3, 6)), value=4)]

    cfs = counterfactual(xor_scm, u, ivs)

    assert len(cfs) == 2
    assert all(cf.context == u for cf in cfs)
    assert all(cf.base == evaluate(xor_scm, u) for cf in cfs)
    assert cfs[1].pair.output.to_array().tolist() == (
        6 * (cfs[1].pair.input.to_array()[:3] == 0)
    ).tolist()


def test_counterfactual_needs_intervention(xor_scm):
    """Test an empty intervention list is a contract error."""
    with pytest.raises(ContractError):
        counterfactual(xor_scm, sample_exogenous(xor_scm.exogenous, 0), [])


def test_level_checks(xor_scm):
    """Test L2 needs an intervention and L1 takes none."""
    with pytest.raises(ContractError):
        sample_distribution(xor_scm, 10, Level.L2, seed=0)
    with pytest.raises(ContractError):
        sample_distribution(xor_scm, 10, Level.L1, seed=0, intervention=HardFix(value=0))


def test_context_shape_checked(xor_scm):
    """Test evaluating a context of the wrong shape fails."""
    u = ExogenousContext(values=((0, 1), (1, 0)), seed=0)

    with pytest.raises(ContractError):
        evaluate(xor_scm, u)


def test_evaluate_full_reports_counts():
    """Test the histogram program exposes its per-color counts."""
    values = [[0] * 10 for _ in range(10)]
    values[0][:3] = [1, 1, 2]
    u = ExogenousContext(values=tuple(tuple(row) for row in values), seed=0)

    pair, features = evaluate_full(example_two_scm(), u)

    assert features == {"counts": [2, 1, 0, 0]}
    assert pair.output.to_list() == [[1, 0, 0, 0], [1, 2, 0, 0]]
