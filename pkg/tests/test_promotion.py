import random

import pytest

from plabic_workbench.errors import WorkbenchError
from plabic_workbench.families import bcfw_promotion, named_promotion, star_promotion
from plabic_workbench.gca import Evaluator, evaluate_scalar, parse
from plabic_workbench.promotion import brushed_promotion, verify_composition
from plabic_workbench.scalar import Mat
from plabic_workbench.tangle import star_tangle


def _bracket(*vectors):
    return evaluate_scalar(parse("<1234>"), {p + 1: v for p, v in enumerate(vectors)})


def test_star_images_lie_in_the_expected_spans(rng):
    z = Mat.random(rng, 4, 7, 100)
    images = star_promotion(4, 7).point_map(z)
    z1, z2, z3, z5 = z.column(0), z.column(1), z.column(2), z.column(4)
    assert _bracket(z1, z2, images[3], z5) == 0
    assert _bracket(z1, z2, z3, images[4]) == 0
    assert images[1] == z1
    assert images[7] == z.column(6)


def test_bcfw_image_of_b_lies_on_both_lines(rng):
    n, a = 10, 3
    z = Mat.random(rng, 4, n, 100)
    promotion = bcfw_promotion(n, a)
    w = promotion.point_map(z, 0)[a + 1]
    col = {label: z.column(label - 1) for label in range(1, n + 1)}
    assert _bracket(col[a], col[a + 1], w, col[1]) == 0
    assert _bracket(col[n - 2], col[n - 1], col[n], w) == 0


def test_pullback_agrees_with_the_point_map(rng):
    z = Mat.random(rng, 4, 7, 100)
    promotion = star_promotion(4, 7)
    expr = parse("<1345>")
    assert evaluate_scalar(promotion.pullback(expr), z) == Evaluator(promotion.point_map(z)).scalar(expr)


def test_blob_point_columns_follow_the_domain(rng):
    z = Mat.random(rng, 4, 7, 100)
    promotion = star_promotion(4, 7)
    point = promotion.blob_point(z)
    images = promotion.point_map(z)
    assert point.shape == (4, 6)
    assert [point.column(p) for p in range(6)] == [images[label] for label in promotion.domains[0]]


def test_labels_outside_the_domain_are_rejected():
    promotion = star_promotion(4, 7)
    with pytest.raises(WorkbenchError):
        promotion.column(2)
    with pytest.raises(WorkbenchError):
        promotion.pullback(parse("<1234>"))
    with pytest.raises(WorkbenchError):
        named_promotion("nope")


def test_brushed_promotion_has_no_formulas():
    promotion = brushed_promotion(star_tangle(4, 6))
    assert not promotion.has_formulas
    assert promotion.domains == ((1, 3, 4, 5, 6),)
    with pytest.raises(WorkbenchError):
        promotion.column(1)


def test_star_into_star_composes(rng):
    z = Mat.random(rng, 4, 7, 1000)
    report = verify_composition(star_promotion(4, 7), 0, star_promotion(4, 6), z)
    assert report.passed, report.mismatches
    assert report.glued_valid
    assert report.formula_columns_checked == report.columns_checked


def test_star_into_bcfw_composes(rng):
    z = Mat.random(rng, 4, 10, 1000)
    report = verify_composition(bcfw_promotion(10, 3), 0, star_promotion(4, 5), z)
    assert report.passed, report.mismatches


@pytest.mark.parametrize("seed", range(10))
def test_compositions_with_white_inner_vertices_hold_at_many_points(seed):
    rng = random.Random(seed)
    report = verify_composition(star_promotion(4, 7), 0, star_promotion(4, 6), Mat.random(rng, 4, 7, 1000))
    assert report.passed, report.mismatches
    assert report.glued_valid
    assert report.columns_checked == 5
    report = verify_composition(bcfw_promotion(10, 3), 0, star_promotion(4, 5), Mat.random(rng, 4, 10, 1000))
    assert report.passed, report.mismatches
    assert report.glued_valid
