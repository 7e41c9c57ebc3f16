import random

import pytest

from plabic_workbench.errors import CapExceeded, WrongBoundaryCount
from plabic_workbench.plabic import BLACK, WHITE, insert_bivalent
from plabic_workbench.tree import (
    canonicalize,
    count_amplitrees,
    enumerate_amplitrees,
    is_m_balanced,
    iter_trees,
    k2_recurrence_check,
    k3_gf_check,
    k_statistic,
    non_balanced_trees,
    pyramidal,
    series_report,
    to_bipartite_trivalent_black,
)


@pytest.mark.parametrize("m, expected", [(1, 1), (2, 5), (3, 14), (4, 30), (5, 55), (6, 91)])
def test_k2_counts(m, expected):
    assert count_amplitrees(2, m) == expected
    assert pyramidal(m) == expected


@pytest.mark.parametrize("m, expected", [(1, 1), (2, 35), (3, 280), (4, 1274), (5, 4228), (6, 11438)])
def test_k3_counts(m, expected):
    assert count_amplitrees(3, m) == expected


@pytest.mark.parametrize("m", range(1, 7))
def test_k1_has_a_single_amplitree(m):
    assert count_amplitrees(1, m) == 1


@pytest.mark.parametrize("m, expected", [(1, 1), (2, 285), (3, 6565)])
def test_k4_counts(m, expected):
    assert count_amplitrees(4, m) == expected


def test_generating_functions_are_read_at_m_minus_one():
    assert k2_recurrence_check(8)
    assert k3_gf_check(4)
    report = series_report(3, 4)
    assert report.matches_shifted
    assert not report.matches_unshifted


def test_emitted_trees_are_distinct_amplitrees():
    result = enumerate_amplitrees(2, 2, emit=True)
    assert result.count == 5
    assert len({t.encoding for t in result.trees}) == 5
    for tree in result.trees:
        assert k_statistic(tree.graph) == 2
        assert is_m_balanced(tree.graph, 2).balanced


def test_tree_cap():
    with pytest.raises(CapExceeded):
        enumerate_amplitrees(3, 4, cap=10)


def test_unbalanced_tree_has_a_witness():
    (tree,) = non_balanced_trees(2, 2, limit=1)
    result = is_m_balanced(tree, 2)
    assert not result.balanced
    assert result.witness_edge in tree.edges
    assert not 1 <= result.witness_value <= 2


def test_balance_needs_the_right_boundary_count():
    tree = next(iter_trees(1, 1))
    assert is_m_balanced(tree, 1).balanced
    with pytest.raises(WrongBoundaryCount):
        is_m_balanced(tree, 2)


def test_canonical_form_ignores_move_order():
    tree = next(iter_trees(2, 3))
    reference = canonicalize(tree).encoding
    padded = tree
    for edge in sorted(tree.edges)[:3]:
        padded = insert_bivalent(padded, edge, WHITE)
    for seed in range(5):
        assert canonicalize(padded, random.Random(seed)).encoding == reference


def test_bipartite_trivalent_black_form():
    for tree in iter_trees(3, 2):
        moved = to_bipartite_trivalent_black(tree)
        assert moved.is_bipartite()
        assert all(moved.degree(v) == 3 for v in moved.internal_vertices() if moved.color(v) == BLACK)
        assert k_statistic(moved) == 3
        break
