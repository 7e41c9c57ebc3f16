import random

import pytest

from plabic_workbench.cluster import (
    cell,
    discover_frozen_factor,
    draw_points,
    random_points,
    similar_pair,
    verify_quasi_cluster,
)
from plabic_workbench.errors import WorkbenchError
from plabic_workbench.named_seeds import (
    CHAIN50,
    SPURION11,
    X_DISPLAY_SIGNS,
    chain50_vertices,
    forest_closed_forms,
    named_seed,
    quasi_case,
    resolve_chain_signs,
    run_mutation_sequence,
    star_case,
    star_target,
)


def test_star_target_freezes_the_first_column():
    seed = star_target(4, 8)
    assert {"1:5", "2:5", "3:5", "4:5"} <= seed.frozen
    assert len(seed.mutable) == 3 * 3 - 3


def test_star_case_pairs_every_mutable_source_vertex():
    case = star_case(4, 8)
    assert set(case.pairing) == set(case.source.mutable)
    assert case.promotion.domains == ((1, 3, 4, 5, 6, 7, 8),)
    with pytest.raises(WorkbenchError):
        star_case(4, 6)


def test_star_promotion_is_quasi_cluster():
    case = quasi_case("star", m=4, n=8)
    points = draw_points(case, 4, random.Random(2), bound=1000)
    report = verify_quasi_cluster(case, points)
    assert report.passed, report.violations
    assert report.vertices_checked == len(case.pairing)


def test_unknown_names_are_rejected():
    with pytest.raises(WorkbenchError):
        quasi_case("nope")
    with pytest.raises(WorkbenchError):
        named_seed("nope")
    with pytest.raises(WorkbenchError):
        run_mutation_sequence("nope", 11, [])


def test_named_rectangles_seed():
    seed = named_seed("rectangles", m=4, n=9)
    assert len(seed.vertices) == 4 * 5 + 1


def test_chain_schedule_has_fifty_steps():
    vertices = chain50_vertices()
    assert len(vertices) == len(CHAIN50) == 50
    assert vertices[0] == "3:C"


def test_spurion_schedule_matches_its_closed_forms():
    points = random_points(random.Random(5), 4, 11, 3, bound=1000)
    report = run_mutation_sequence("spurion11", 11, points)
    assert len(report.steps) == len(SPURION11)
    assert all(step.sign in (1, -1) for step in report.steps)


def test_frozen_factor_search_recovers_the_star_factors():
    case = star_case(4, 8)
    points = draw_points(case, 4, random.Random(2), bound=1000)
    assert discover_frozen_factor(case, "3:6", points).text == "1"
    found = discover_frozen_factor(case, "1:6", points)
    assert found is not None
    with pytest.raises(WorkbenchError):
        discover_frozen_factor(case, "1:6", points[:1])


def test_similar_pair_reports_on_the_mutated_seeds():
    case = star_case(4, 8)
    points = draw_points(case, 3, random.Random(2), bound=1000)
    report = similar_pair(case, "3:6", points)
    assert report.family == "star"
    assert report.trials == 3
    assert (report.vertices_checked > 0) == any("after mutating 3:6" in note for note in report.notes)


@pytest.mark.parametrize(
    "name, params",
    [("spurion", {"n": 11}), ("chain", {"n": 14}), ("forest", {"n": 9, "a": 5})],
)
def test_named_promotions_are_quasi_cluster(name, params):
    case = quasi_case(name, **params)
    points = draw_points(case, 3, random.Random(7), bound=1000)
    report = verify_quasi_cluster(case, points)
    assert report.violations == []
    assert report.passed
    assert report.vertices_checked == len(case.pairing)


def test_chain_schedule_reaches_the_chain_target():
    points = random_points(random.Random(5), 4, 14, 3, bound=1000)
    report = run_mutation_sequence("chain50", 14, points)
    assert len(report.steps) == 50
    assert report.violations == []
    assert report.arrows_compared == 225


def test_chain_x_signs_agree_between_promotion_and_mutations():
    points = random_points(random.Random(5), 4, 14, 3, bound=1000)
    signs, notes = resolve_chain_signs(14, points)
    assert len(notes) == 4
    assert not any("unresolved" in note for note in notes)
    report = run_mutation_sequence("chain50", 14, points)
    for r in range(1, 5):
        flipped = f"{cell(r, 12)} matched with the relative sign flipped" in report.notes
        assert flipped == (signs[r] != X_DISPLAY_SIGNS[r])


def test_forest_schedule_matches_its_closed_forms():
    points = random_points(random.Random(5), 3, 9, 3, bound=1000)
    report = run_mutation_sequence("forest3", 9, points, a=5)
    assert [step.expected for step in report.steps] == [text for _, text in forest_closed_forms(5)]
    assert all(step.sign in (1, -1) for step in report.steps)
    assert report.violations == []
