import pytest

from plabic_workbench.cluster import rectangles_seed
from plabic_workbench.errors import FormatError
from plabic_workbench.formats import (
    read_matrix,
    read_plabic,
    read_plabic_stream,
    read_seed,
    write_matrix,
    write_plabic,
    write_seed,
)
from plabic_workbench.plabic import top_cell_network
from plabic_workbench.scalar import Mat
from plabic_workbench.tangle import star_tangle
from plabic_workbench.tree import iter_trees, to_bipartite_trivalent_black
from plabic_workbench.vrc import build_tree_vrc, solve_with_redraws


def test_plabic_text_is_stable():
    graph, _ = top_cell_network(2, 4)
    text = write_plabic(graph)
    document = read_plabic(text)
    assert document.vrc is None and document.tangle is None
    assert document.graph.n == 4
    assert write_plabic(document.graph) == text


def test_configuration_survives_the_text_form(rng):
    tree = to_bipartite_trivalent_black(next(iter_trees(2, 2)))
    vrc, _ = solve_with_redraws(lambda point: build_tree_vrc(tree, point), rng, 2, tree.n, bound=100)
    text = write_plabic(tree, vrc)
    document = read_plabic(text)
    assert document.vrc.violations() == []
    assert write_plabic(document.graph, document.vrc) == text


def test_tangle_survives_the_text_form():
    tangle = star_tangle(4, 6)
    text = write_plabic(tangle.core, tangle=tangle)
    document = read_plabic(text)
    assert document.tangle.same_as(tangle)
    assert document.tangle.blobs[0].names == (1, 3, 4, 5, 6)
    assert write_plabic(document.graph, tangle=document.tangle) == text


def test_stream_of_blocks():
    graph, _ = top_cell_network(2, 4)
    text = write_plabic(graph) + "\n" + write_plabic(graph)
    assert len(read_plabic_stream(text)) == 2


def test_plabic_errors_carry_line_numbers():
    with pytest.raises(FormatError) as excinfo:
        read_plabic("plabic v2\nn 3\n")
    assert excinfo.value.line_no == 1
    with pytest.raises(FormatError) as excinfo:
        read_plabic("plabic v1\nn 3\nvertex v1 r int\n")
    assert excinfo.value.line_no == 3
    with pytest.raises(FormatError) as excinfo:
        read_plabic("plabic v1\n\nn x\n")
    assert excinfo.value.line_no == 3
    with pytest.raises(FormatError):
        read_plabic("plabic v1\nvertex v1 b int\n")


def test_seed_text_is_stable():
    seed = rectangles_seed(2, range(1, 6))
    text = write_seed(seed)
    again = read_seed(text)
    assert again.frozen == seed.frozen
    assert again.arrows == seed.arrows
    assert write_seed(again) == text


def test_seed_errors():
    with pytest.raises(FormatError) as excinfo:
        read_seed("seed v1\nvar a mutable <12>\nvar b sleepy <13>\n")
    assert excinfo.value.line_no == 3
    with pytest.raises(FormatError):
        read_seed("seed v1\nvar a mutable <12>\narrow a b 0\n")
    with pytest.raises(FormatError):
        read_seed("seed v1\nvar a mutable <12>\nvar b mutable <13>\narrow a b 1\narrow b a 1\n")


def test_matrix_text(rng):
    z = Mat.random(rng, 3, 5, 100)
    assert read_matrix(write_matrix(z)) == z
    assert read_matrix("1 -2/3\n\n4 5\n").shape == (2, 2)


def test_matrix_errors():
    with pytest.raises(FormatError) as excinfo:
        read_matrix("1 2\n3\n")
    assert excinfo.value.line_no == 2
    with pytest.raises(FormatError):
        read_matrix("1 x\n")
    with pytest.raises(FormatError):
        read_matrix("\n")
