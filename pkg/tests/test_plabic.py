from fractions import Fraction
from itertools import combinations

import pytest

from plabic_workbench.errors import PatternMismatch, WorkbenchError
from plabic_workbench.plabic import (
    PlabicGraph,
    contract_edge,
    enumerate_perfect_orientations,
    apply_move,
    expand_vertex,
    flow_plucker,
    gauge_fix,
    gauge_weights,
    insert_bivalent,
    path_matrix,
    positroid_bases,
    remove_bivalent,
    square_move,
    top_cell_network,
    type_and_dim,
)


@pytest.fixture
def top_cell():
    return top_cell_network(2, 4)


@pytest.fixture
def weights(top_cell, rng):
    graph, _ = top_cell
    return {e: Fraction(rng.randint(1, 30), rng.randint(1, 30)) for e in graph.edges}


def test_top_cell_network_shape(top_cell):
    graph, orientation = top_cell
    assert graph.n == 4
    assert orientation.sources == frozenset({1, 2})
    assert orientation.is_acyclic(graph)
    assert graph.euler_faces() == 5
    assert graph.to_networkx().number_of_nodes() == len(graph.vertices)


def test_path_matrix_has_identity_on_sources(top_cell, weights):
    graph, orientation = top_cell
    z = path_matrix(graph, orientation, weights)
    assert z.shape == (2, 4)
    assert z.column(0) == (1, 0)
    assert z.column(1) == (0, 1)


def test_path_matrix_is_totally_positive(top_cell, weights):
    z = path_matrix(*top_cell, weights)
    assert all(value > 0 for _, value in z.pluckers())


def test_minors_count_disjoint_flows(top_cell, weights):
    graph, orientation = top_cell
    z = path_matrix(graph, orientation, weights)
    for columns in combinations(range(1, 5), 2):
        assert z.plucker([c - 1 for c in columns]) == flow_plucker(graph, orientation, weights, columns)


def test_top_cell_positroid_is_uniform(top_cell):
    graph, _ = top_cell
    assert positroid_bases(graph) == {frozenset(c) for c in combinations(range(1, 5), 2)}
    assert all(len(o.sources) == 2 for o in enumerate_perfect_orientations(graph))


def test_bivalent_insert_then_remove(top_cell):
    graph, _ = top_cell
    edge = next(iter(graph.edges))
    bigger = insert_bivalent(graph, edge, "w")
    assert len(bigger.vertices) == len(graph.vertices) + 1
    (added,) = set(bigger.vertices) - set(graph.vertices)
    smaller = remove_bivalent(bigger, added)
    smaller.validate()
    assert len(smaller.vertices) == len(graph.vertices)
    assert len(smaller.edges) == len(graph.edges)


def test_expand_then_contract_restores_the_graph(top_cell):
    graph, _ = top_cell
    expanded = expand_vertex(graph, "B2_1", (0, 2))
    (new_edge,) = set(expanded.edges) - set(graph.edges)
    assert contract_edge(expanded, new_edge) == graph


def test_contract_refuses_mixed_colours(top_cell):
    graph, _ = top_cell
    edge = graph.edge_between("B1_1", "W1_1")
    with pytest.raises(PatternMismatch):
        contract_edge(graph, edge)


def test_square_move_needs_a_square(top_cell):
    graph, _ = top_cell
    with pytest.raises(PatternMismatch):
        square_move(graph, ("B1_1", "W1_1", "B1_2", "W1_2"))


def test_op_twice_is_identity(top_cell):
    graph, _ = top_cell
    assert graph.op().op() == graph
    assert graph.op().color("B1_1") == "w"


def test_gauge_fix_leaves_one_boundary_per_tree(top_cell):
    graph, _ = top_cell
    forest, rest = gauge_fix(graph)
    assert len(forest) == len(graph.vertices) - graph.n
    assert forest | rest == set(graph.edges)


def test_boundary_positions_must_be_contiguous():
    with pytest.raises(WorkbenchError):
        PlabicGraph.from_adjacency({"w": "w"}, {"a": ["w"], "b": ["w"], "w": ["a", "b"]}, {"a": 1, "b": 3})


def test_type_and_dim_of_the_top_cell(top_cell):
    graph, _ = top_cell
    assert type_and_dim(graph) == (2, 4, 4)


@pytest.mark.parametrize("vertex", ["B1_1", "W1_1"])
def test_gauge_leaves_the_path_matrix_alone(top_cell, weights, vertex):
    graph, orientation = top_cell
    rescaled = gauge_weights(graph, weights, vertex, Fraction(7, 3))
    assert sum(rescaled[e] != weights[e] for e in graph.edges) == graph.degree(vertex)
    assert path_matrix(graph, orientation, rescaled) == path_matrix(graph, orientation, weights)


def test_apply_move_dispatch(top_cell):
    graph, _ = top_cell
    edge = graph.edge_between("B1_1", "W1_1")
    assert apply_move(graph, "insert_bivalent", edge, "w") == insert_bivalent(graph, edge, "w")
    with pytest.raises(PatternMismatch):
        apply_move(graph, "flip", edge)
    with pytest.raises(PatternMismatch):
        apply_move(graph, "square", ("B1_1", "W1_1", "B1_2", "W1_2"))
