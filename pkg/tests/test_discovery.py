"""Tests for the CI test, graph value type and PC."""

import itertools

import numpy as np
import pytest

from carc.discovery import (
    CausalGraph,
    DiscreteData,
    EdgeStatus,
    chi_square_ci,
    meek_closure,
    pc,
    pc_skeleton,
    shd,
)
from carc.errors import ContractError


def _rows(counts: dict[tuple[int, ...], int]) -> np.ndarray:
    """Data matrix holding each row ``key`` exactly ``counts[key]`` times."""
    return np.array([key for key, c in counts.items() for _ in range(c)], dtype=np.int64)


def _product(repeat: int = 250) -> dict[tuple[int, ...], int]:
    """Balanced design over two binary causes."""
    return {(a, b): repeat for a in (0, 1) for b in (0, 1)}


@pytest.fixture
def xor_data() -> np.ndarray:
    base = _rows(_product())
    return np.column_stack([base, base[:, 0] ^ base[:, 1]])


@pytest.fixture
def or_data() -> np.ndarray:
    base = _rows(_product())
    return np.column_stack([base, base[:, 0] | base[:, 1]])


@pytest.fixture
def chain_data() -> np.ndarray:
    """x -> y -> z with z independent of x given y exactly."""
    return _rows(
        {
            (0, 0, 0): 225,
            (0, 0, 1): 75,
            (1, 0, 0): 75,
            (1, 0, 1): 25,
            (0, 1, 0): 25,
            (0, 1, 1): 75,
            (1, 1, 0): 75,
            (1, 1, 1): 225,
        }
    )


@pytest.fixture
def diamond_data() -> np.ndarray:
    """x -> y, x -> z, y -> w <- z with every implied independence exact."""
    counts = {}
    for x, y, z, w in itertools.product((0, 1), repeat=4):
        weight = (3 if y == x else 1) * (3 if z == x else 1) * (3 if w == (y | z) else 1)
        counts[(x, y, z, w)] = 16 * weight
    return _rows(counts)


def _brute_force_cpdag(data: np.ndarray, alpha: float = 0.01) -> CausalGraph:
    """Skeleton from every conditioning subset, then colliders, for three variables."""
    n = data.shape[1]
    sepsets = {}
    for i, j in itertools.combinations(range(n), 2):
        rest = [k for k in range(n) if k not in (i, j)]
        for size in range(len(rest) + 1):
            found = next(
                (
                    cond
                    for cond in itertools.combinations(rest, size)
                    if chi_square_ci(data, i, j, cond, alpha=alpha).independent
                ),
                None,
            )
            if found is not None:
                sepsets[(i, j)] = found
                break
    edges = {pair for pair in itertools.combinations(range(n), 2) if pair not in sepsets}
    directed = set()
    for (i, j), cond in sepsets.items():
        for k in range(n):
            linked = {tuple(sorted((i, k))), tuple(sorted((j, k)))}
            if k not in (i, j, *cond) and linked <= edges:
                directed |= {(i, k), (j, k)}
    undirected = {(a, b) for a, b in edges if (a, b) not in directed and (b, a) not in directed}
    return CausalGraph(n=n, directed=frozenset(directed), undirected=frozenset(undirected))


def test_copy_is_dependent():
    """Test a copied column is strongly dependent."""
    x = np.tile([0, 1], 100)

    result = chi_square_ci(np.column_stack([x, x]), 0, 1, alpha=0.01)

    assert not result.independent
    assert result.dof == 1
    assert result.p_value < 1e-10


def test_balanced_product_is_independent(xor_data):
    """Test an exactly balanced design has statistic 0."""
    result = chi_square_ci(xor_data, 0, 1, alpha=0.01)

    assert result.independent
    assert result.statistic == 0.0
    assert result.p_value == 1.0


def test_xor_hides_marginal_dependence(xor_data):
    """Test XOR inputs look independent of the output until the other input is known."""
    assert chi_square_ci(xor_data, 0, 2, alpha=0.01).independent
    assert not chi_square_ci(xor_data, 0, 2, (1,), alpha=0.01).independent


def test_chain_screening_off(chain_data):
    """Test the middle of a chain separates its ends."""
    assert not chi_square_ci(chain_data, 0, 2, alpha=0.01).independent
    conditional = chi_square_ci(chain_data, 0, 2, (1,), alpha=0.01)

    assert conditional.independent
    assert conditional.strata_used == 2
    assert conditional.dof == 2


def test_independent_coins_are_calibrated():
    """Test two fair coins at n=5000 pass at alpha 0.01 in at least 95 of 100 seeded trials."""
    passed = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        coins = rng.integers(0, 2, size=(5000, 2))
        passed += chi_square_ci(coins, 0, 1, alpha=0.01).independent

    assert passed >= 95


def test_constant_column_has_no_dof():
    """Test a constant variable is reported independent with zero dof."""
    data = np.column_stack([np.tile([0, 1], 50), np.full(100, 7)])

    result = chi_square_ci(data, 0, 1)

    assert result.independent
    assert result.dof == 0


def test_low_power_strata(chain_data):
    """Test strata below the row floor are skipped."""
    result = chi_square_ci(chain_data, 0, 2, (1,), min_stratum=10_000)

    assert result.independent
    assert result.low_power


def test_ci_arguments():
    """Test overlapping variables and non-matrix data are rejected."""
    data = np.zeros((10, 3), dtype=int)

    with pytest.raises(ContractError):
        chi_square_ci(data, 0, 0)
    with pytest.raises(ContractError):
        chi_square_ci(data, 0, 1, (1,))
    with pytest.raises(ContractError):
        DiscreteData(np.zeros(10))


def test_graph_validation():
    """Test self-loops, out-of-range nodes and doubled pairs are rejected."""
    with pytest.raises(ValueError):
        CausalGraph(n=2, directed=frozenset({(0, 0)}))
    with pytest.raises(ValueError):
        CausalGraph(n=2, directed=frozenset({(0, 2)}))
    with pytest.raises(ValueError):
        CausalGraph(n=2, directed=frozenset({(0, 1)}), undirected=frozenset({(1, 0)}))


def test_graph_from_matrix():
    """Test one-way marks are directed and two-way marks undirected."""
    graph = CausalGraph.from_matrix(np.array([[0, 1, 1], [0, 0, 1], [0, 1, 0]]))

    assert graph.directed == frozenset({(0, 1), (0, 2)})
    assert graph.undirected == frozenset({(1, 2)})
    assert graph.status(2, 1) is EdgeStatus.UNDIRECTED
    assert graph.status(1, 0) is EdgeStatus.FORWARD
    assert not graph.is_dag()
    assert CausalGraph.from_matrix(graph.adjacency_matrix()) == graph


def test_shd_counts_pairs():
    """Test reversed, missing and extra edges each count once."""
    truth = CausalGraph(n=3, directed=frozenset({(0, 1), (1, 2)}))
    pred = CausalGraph(n=3, directed=frozenset({(1, 0)}), undirected=frozenset({(0, 2)}))

    assert shd(truth, truth) == 0
    assert shd(pred, truth) == 3
    assert shd(truth, pred) == 3
    assert shd(CausalGraph.empty(3), truth) == 2
    with pytest.raises(ContractError):
        shd(CausalGraph.empty(2), truth)


def test_meek_rule_one():
    """Test a -> b - c with a, c apart orients b -> c."""
    graph = CausalGraph(n=3, directed=frozenset({(0, 1)}), undirected=frozenset({(1, 2)}))

    assert meek_closure(graph).directed == frozenset({(0, 1), (1, 2)})


def test_meek_rule_two():
    """Test a -> b -> c with a - c orients a -> c."""
    graph = CausalGraph(
        n=3, directed=frozenset({(0, 1), (1, 2)}), undirected=frozenset({(0, 2)})
    )

    assert meek_closure(graph).directed == frozenset({(0, 1), (1, 2), (0, 2)})


def test_meek_rule_three():
    """Test two non-adjacent parents of d both undirected to a orient a -> d."""
    graph = CausalGraph(
        n=4,
        directed=frozenset({(1, 3), (2, 3)}),
        undirected=frozenset({(0, 1), (0, 2), (0, 3)}),
    )

    closed = meek_closure(graph)

    assert closed.directed == frozenset({(1, 3), (2, 3), (0, 3)})
    assert closed.undirected == frozenset({(0, 1), (0, 2)})


def test_pc_collider(or_data):
    """Test OR recovers the v-structure x -> z <- y."""
    result = pc(or_data, alpha=0.01, max_cond=2)

    assert result.graph.directed == frozenset({(0, 2), (1, 2)})
    assert result.graph.undirected == frozenset()
    assert result.conflicts == []


def test_pc_chain(chain_data):
    """Test a chain leaves an undirected path with the ends separated by the middle."""
    skeleton = pc_skeleton(chain_data, alpha=0.01, max_cond=1)
    result = pc(chain_data, alpha=0.01, max_cond=1)
    truth = CausalGraph(n=3, directed=frozenset({(0, 1), (1, 2)}))

    assert skeleton.sepset(2, 0) == (1,)
    assert result.graph.undirected == frozenset({(0, 1), (1, 2)})
    assert shd(result.graph, truth) == 2


def test_pc_xor_faithfulness_failure(xor_data):
    """Test XOR data leaves PC with no edges at all."""
    truth = CausalGraph(n=3, directed=frozenset({(0, 2), (1, 2)}))

    result = pc(xor_data, alpha=0.01)

    assert result.graph.n_edges == 0
    assert shd(result.graph, truth) == 2


def test_pc_constant_output():
    """Test a constant output gets no edges."""
    x = np.tile([0, 1], 200)
    data = np.column_stack([x, x, np.zeros_like(x)])

    result = pc(data, alpha=0.01)

    assert result.graph.status(0, 2) is EdgeStatus.NONE
    assert result.graph.status(1, 2) is EdgeStatus.NONE
    assert result.graph.status(0, 1) is EdgeStatus.UNDIRECTED


def test_pc_rejects_negative_depth(or_data):
    """Test a negative conditioning depth is refused."""
    with pytest.raises(ContractError):
        pc_skeleton(or_data, max_cond=-1)


def test_pc_diamond(diamond_data):
    """Test the diamond keeps its collider at w and leaves x's edges undirected."""
    truth = CausalGraph(n=4, directed=frozenset({(0, 1), (0, 2), (1, 3), (2, 3)}))

    skeleton = pc_skeleton(diamond_data, alpha=0.01, max_cond=2)
    result = pc(diamond_data, alpha=0.01, max_cond=2)

    assert skeleton.sepset(1, 2) == (0,)
    assert skeleton.sepset(0, 3) == (1, 2)
    assert result.graph.directed == frozenset({(1, 3), (2, 3)})
    assert result.graph.undirected == frozenset({(0, 1), (0, 2)})
    assert shd(result.graph, truth) == 2


def test_skeleton_monotone_in_alpha(or_data, xor_data, chain_data, diamond_data):
    """Test a larger alpha never keeps fewer edges on the fixtures."""
    alphas = [0.001, 0.01, 0.05, 0.2]
    for data in (or_data, xor_data, chain_data, diamond_data):
        edges = [pc_skeleton(data, alpha=a, max_cond=2).graph.undirected for a in alphas]

        assert all(small <= large for small, large in itertools.pairwise(edges))


def test_separating_sets_hold_at_smaller_alpha():
    """Test every edge removed at a large alpha is separated by the same set at a smaller one."""
    rng = np.random.default_rng(4)
    x = rng.integers(0, 2, 400)
    y = np.where(rng.random(400) < 0.8, x, 1 - x)
    z = np.where(rng.random(400) < 0.8, y, 1 - y)
    data = np.column_stack([x, y, z, rng.integers(0, 2, 400)])

    skeleton = pc_skeleton(data, alpha=0.2, max_cond=2)

    assert skeleton.sepsets
    for (i, j), cond in skeleton.sepsets.items():
        assert chi_square_ci(data, i, j, cond, alpha=0.01).independent


def test_pc_matches_brute_force_on_three_variables(or_data, xor_data, chain_data):
    """Test PC equals exhaustive conditional-independence search on three variables."""
    coins = _rows({key: 125 for key in itertools.product((0, 1), repeat=3)})
    fork = chain_data[:, [1, 0, 2]]
    for data in (or_data, xor_data, chain_data, fork, coins):
        assert pc(data, alpha=0.01, max_cond=1).graph == _brute_force_cpdag(data)
