from fractions import Fraction
from itertools import islice

import pytest

from plabic_workbench.errors import NotGeneric
from plabic_workbench.plabic import BLACK, WHITE, PlabicGraph, find_acyclic_reverse_po, positroid_bases
from plabic_workbench.scalar import Mat
from plabic_workbench.tree import iter_trees, non_balanced_trees, to_bipartite_trivalent_black
from plabic_workbench.vrc import (
    VRC,
    boundary_coefficients,
    build_tree_vrc,
    gauge,
    gauge_equivalent,
    lift_to_big_vrc,
    matches_gc_coefficients,
    random_vrc,
    solve_with_redraws,
    subspace_labels,
    transport_contract,
    transport_expand,
    transport_square_move,
    vectors_from_paths,
)


def _tree(k: int, m: int):
    return to_bipartite_trivalent_black(next(iter_trees(k, m)))


@pytest.fixture
def k2_vrc(rng):
    tree = _tree(2, 2)
    vrc, z = solve_with_redraws(lambda point: build_tree_vrc(tree, point), rng, 2, tree.n, bound=100)
    return vrc, z


def test_tree_configuration_has_the_requested_boundary(k2_vrc):
    vrc, z = k2_vrc
    assert vrc.violations() == []
    assert vrc.boundary() == z


def test_single_white_vertex_matches_bracket_coefficients(rng):
    tree = _tree(1, 4)
    z = Mat.random(rng, 4, 5, 100)
    vrc = build_tree_vrc(tree, z)
    assert vrc.is_valid()
    assert matches_gc_coefficients(vrc, z)


def test_bracket_coefficients_differ_from_the_relation_by_edge_signs():
    tree = _tree(1, 3)
    z = Mat([[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]])
    vrc = build_tree_vrc(tree, z)
    f = boundary_coefficients(tree, z)
    (white,) = [v for v in tree.internal_vertices() if tree.color(v) == WHITE]
    ratios = {vrc.coeffs[e] / f[e] for e in tree.rotation[white]}
    assert len(ratios) == 2
    assert sum(ratios) == 0
    assert matches_gc_coefficients(vrc, z)


def test_degenerate_boundary_is_rejected():
    with pytest.raises(NotGeneric):
        build_tree_vrc(_tree(2, 2), Mat.zeros(2, 5))


def test_gauge_keeps_the_configuration_valid(k2_vrc):
    vrc, _ = k2_vrc
    for v in vrc.graph.internal_vertices():
        moved = gauge(vrc, v, Fraction(-3, 7))
        assert moved.is_valid()
        assert gauge_equivalent(vrc, moved)


def test_lift_contains_the_boundary(k2_vrc):
    vrc, _ = k2_vrc
    lifted = lift_to_big_vrc(vrc)
    assert lifted.big.nrows == len(lifted.orientation.sources)
    assert lifted.big.row_space_contains(vrc.boundary())
    for row in lifted.complement.rows():
        assert all(x == 0 for x in lifted.big.apply(row))


def test_expand_then_contract_round_trip(k2_vrc):
    vrc, _ = k2_vrc
    black = next(v for v in sorted(vrc.graph.internal_vertices()) if vrc.graph.color(v) == BLACK)
    expanded = transport_expand(vrc, black, (0, 2))
    assert expanded.is_valid()
    assert expanded.boundary() == vrc.boundary()
    (middle,) = set(expanded.graph.vertices) - set(vrc.graph.vertices) - {
        v for v in expanded.graph.vertices if expanded.graph.color(v) == BLACK
    }
    restored = transport_contract(expanded, middle)
    assert restored.graph == vrc.graph
    assert restored.is_valid()
    assert gauge_equivalent(vrc, restored)


def test_random_configuration_is_valid(rng):
    tree = _tree(2, 2)
    vrc = random_vrc(tree, 2, rng, bound=50)
    assert vrc.is_valid()


def _square_with_legs() -> PlabicGraph:
    """Alternating square; the legs at the two blacks pass through bivalent whites"""
    colors = {"W1": WHITE, "B1": BLACK, "W2": WHITE, "B2": BLACK, "X1": WHITE, "X2": WHITE}
    adjacency = {
        "d1": ["W1"],
        "d2": ["X1"],
        "d3": ["W2"],
        "d4": ["X2"],
        "W1": ["d1", "B1", "B2"],
        "B1": ["X1", "W2", "W1"],
        "W2": ["B1", "d3", "B2"],
        "B2": ["W1", "W2", "X2"],
        "X1": ["B1", "d2"],
        "X2": ["B2", "d4"],
    }
    return PlabicGraph.from_adjacency(colors, adjacency, {"d1": 1, "d2": 2, "d3": 3, "d4": 4})


def test_square_move_transport_keeps_the_boundary(rng):
    graph = _square_with_legs()
    (face,) = graph.square_faces()
    vrc = random_vrc(graph, 2, rng, bound=100)
    moved = transport_square_move(vrc, face)
    assert moved.violations() == []
    assert moved.boundary() == vrc.boundary()
    assert moved.graph.color("W1") == BLACK
    assert moved.graph.color("B1") == WHITE
    assert "X1" not in moved.graph.vertices


def _square_with_fans(m: int) -> PlabicGraph:
    """The square with legs, with white fans behind its white corners so the boundary reaches rank m"""
    colors = {"W1": WHITE, "B1": BLACK, "W2": WHITE, "B2": BLACK, "X1": WHITE, "X2": WHITE, "P": BLACK, "U": WHITE}
    adjacency = {
        "a1": ["U"],
        "a2": ["U"],
        "U": ["a1", "a2", "P"],
        "P": ["U", "W1"],
        "W1": ["P", "B1", "B2"],
        "B1": ["X1", "W2", "W1"],
        "X1": ["B1", "c"],
        "c": ["X1"],
        "B2": ["W1", "W2", "X2"],
        "X2": ["B2", "e"],
        "e": ["X2"],
    }
    labels = {"a1": 1, "a2": 2, "c": 3}
    if m == 3:
        adjacency.update(W2=["B1", "d", "B2"], d=["W2"])
        labels.update(d=4, e=5)
    else:
        colors.update(Q=BLACK, V=WHITE)
        adjacency.update(W2=["B1", "Q", "B2"], Q=["W2", "V"], V=["d1", "d2", "Q"], d1=["V"], d2=["V"])
        labels.update(d1=4, d2=5, e=6)
    return PlabicGraph.from_adjacency(colors, adjacency, labels)


@pytest.mark.parametrize("m", [3, 4])
def test_square_move_transport_in_higher_dimension(m, rng):
    graph = _square_with_fans(m)
    (face,) = graph.square_faces()
    vrc = random_vrc(graph, m, rng, bound=100)
    assert vrc.boundary().rank() == m
    moved = transport_square_move(vrc, face)
    assert moved.violations() == []
    assert moved.boundary() == vrc.boundary()
    assert "P" not in moved.graph.vertices
    assert moved.graph.color("W2") == BLACK
    assert moved.graph.color("B2") == WHITE


def test_paths_rebuild_the_stored_vectors(k2_vrc):
    vrc, _ = k2_vrc
    orientation = find_acyclic_reverse_po(vrc.graph)
    assert orientation.is_acyclic(vrc.graph)
    rebuilt = vectors_from_paths(vrc.graph, orientation, vrc.boundary(), vrc.coeffs)
    assert {v: tuple(x) for v, x in rebuilt.items()} == {v: tuple(x) for v, x in vrc.vectors.items()}


def test_subspace_labels_of_a_single_white_vertex(rng):
    tree = _tree(1, 4)
    root = next(v for v in tree.internal_vertices() if tree.color(v) == WHITE)
    labels = subspace_labels(tree, root, Mat.random(rng, 4, 5, 100))
    assert labels.in_bounds and labels.generic
    assert labels.expected[root] == 5
    assert labels.labels[root].is_zero()
    assert all(labels.actual[v] == 1 for v in tree.boundary_vertices())


@pytest.mark.parametrize(
    "k, m, limit", [(1, 3, 1), (1, 4, 1), (1, 5, 1), (2, 2, 5), (2, 3, 14), (2, 4, 8), (3, 4, 3)]
)
def test_amplitree_configurations_lift_into_the_positroid(k, m, limit, rng):
    n = k * m + 1
    trees = [to_bipartite_trivalent_black(t) for t in islice(iter_trees(k, m), limit)]
    assert len(trees) == limit
    for tree in trees:
        orientation = find_acyclic_reverse_po(tree)

        def solve(point):
            vrc = build_tree_vrc(tree, point)
            return vrc, lift_to_big_vrc(vrc, orientation)

        (vrc, lifted), z = solve_with_redraws(solve, rng, m, n, bound=100)
        assert vrc.violations() == []

        gauged = vrc
        for v in sorted(tree.internal_vertices())[:2]:
            gauged = gauge(gauged, v, Fraction(-2, 3))
        rebuilt = vectors_from_paths(tree, orientation, z, gauged.coeffs)
        assert gauge_equivalent(VRC(graph=tree, m=m, vectors=rebuilt, coeffs=gauged.coeffs), vrc)

        assert lifted.big.nrows == n - k
        assert lifted.big.vstack(z).rank() == n - k
        assert all(x == 0 for row in lifted.complement.rows() for x in z.apply(row))
        support = {frozenset(c + 1 for c in cols) for cols, value in lifted.complement.pluckers() if value}
        assert support == positroid_bases(tree, cap=80)


@pytest.mark.parametrize("k, m", [(2, 2), (2, 3), (3, 2)])
def test_unbalanced_trees_have_no_configuration(k, m, rng):
    trees = non_balanced_trees(k, m, limit=3)
    assert trees
    for tree in trees:
        with pytest.raises(NotGeneric):
            build_tree_vrc(to_bipartite_trivalent_black(tree), Mat.random(rng, m, tree.n, 100))
