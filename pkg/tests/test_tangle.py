import pytest
from pydantic import ValidationError

from plabic_workbench.errors import ArityMismatch, WorkbenchError
from plabic_workbench.tangle import (
    Anchor,
    Blob,
    bcfw_tangle,
    check_operad_axioms,
    compose,
    compose_brushed,
    find_brushing,
    identity_tangle,
    permute_blobs,
    spurion_tangle,
    star_tangle,
)


def test_star_tangle_shape():
    tangle = star_tangle(4, 6)
    assert len(tangle.blobs) == 1
    blob = tangle.blobs[0]
    assert blob.size == 5
    assert blob.names == (1, 3, 4, 5, 6)
    assert tangle.pass_through() == [6]
    assert tangle.is_planar()


def test_bcfw_tangle_blob_names():
    tangle = bcfw_tangle(10, 3)
    assert [blob.names for blob in tangle.blobs] == [(1, 2, 3, 4, 10), (4, 5, 6, 7, 8, 9, 10)]


def test_anchor_needs_exactly_one_target():
    with pytest.raises(ValidationError):
        Anchor()
    with pytest.raises(ValidationError):
        Anchor(vertex="b1")
    with pytest.raises(ValidationError):
        Anchor(vertex="b1", after="e1", outer=3)
    assert Anchor(outer=3).is_pass_through


def test_blob_needs_two_vertices():
    with pytest.raises(ValidationError):
        Blob(anchors=(Anchor(outer=1),), names=(1,))


def test_identity_is_a_unit():
    tangle = star_tangle(4, 6)
    assert compose(identity_tangle(6), 0, tangle).same_as(tangle)
    assert compose(tangle, 0, identity_tangle(5)).same_as(tangle)


def test_compose_checks_arity():
    with pytest.raises(ArityMismatch):
        compose(star_tangle(4, 6), 0, star_tangle(4, 7))


def test_permute_blobs():
    tangle = bcfw_tangle(10, 3)
    swapped = permute_blobs(tangle, [1, 0])
    assert swapped.blobs == tangle.blobs[::-1]
    assert permute_blobs(swapped, [1, 0]).blobs == tangle.blobs
    with pytest.raises(WorkbenchError):
        permute_blobs(tangle, [0, 0])


def test_brushing_of_star_uses_distinct_starts():
    tangle = star_tangle(4, 6)
    brushing = find_brushing(tangle)
    assert len(brushing.blobs) == 1
    starts = brushing.blobs[0].starts
    assert sorted(starts) == [0, 1, 2, 3, 4]
    assert len(set(starts.values())) == 5
    assert starts[4] == 6


def test_shipped_tangles_check_their_size():
    with pytest.raises(WorkbenchError):
        spurion_tangle(8)
    with pytest.raises(WorkbenchError):
        star_tangle(4, 4)


def test_operad_axioms_on_bcfw_with_stars():
    fillers = [star_tangle(4, size) for size in range(5, 11)]
    report = check_operad_axioms(bcfw_tangle(10, 3), fillers)
    assert report.checks > 0
    assert report.failures == []


def test_composed_star_tangles_brush():
    glued, brushing = compose_brushed(star_tangle(4, 7), 0, star_tangle(4, 6))
    assert glued.same_as(compose(star_tangle(4, 7), 0, star_tangle(4, 6)))
    assert len(brushing.blobs) == len(glued.blobs) == 1
