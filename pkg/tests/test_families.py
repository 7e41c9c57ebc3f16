import random

import pytest

from plabic_workbench.errors import NegativeDiscriminant, WorkbenchError
from plabic_workbench.families import (
    FAMILIES,
    IdentityCheck,
    chain_promotion,
    four_mass_box,
    four_mass_box_identities,
    identity_signs,
    named_promotion,
    quadratic_coefficients,
    spurion_promotion,
    y_entry,
)
from plabic_workbench.gca import Evaluator, evaluate_scalar, parse, to_string
from plabic_workbench.possample import sample_positive
from plabic_workbench.scalar import Mat, QuadExt, make_quad


def _box_point(n: int = 9) -> Mat:
    """First random point with a positive discriminant"""
    for seed in range(200):
        z = Mat.random(random.Random(seed), 4, n, 50)
        a, b, c = quadratic_coefficients(z)
        if a and b * b - 4 * a * c > 0:
            return z
    raise AssertionError("no point with a positive discriminant")


def test_y_entry_text():
    assert to_string(y_entry(7, 8)) == to_string(parse("<127*43*568>"))


def test_named_promotion_dispatch():
    assert set(FAMILIES) == {"star", "bcfw", "spurion", "chain", "forest"}
    assert named_promotion("forest", n=9, a=5).m == 3
    assert named_promotion("star", m=4, n=6).domains == ((1, 3, 4, 5, 6),)


def test_spurion_and_chain_tables():
    assert sorted(spurion_promotion(10).substitutions[0]) == [2, 7, 8]
    assert sorted(chain_promotion(13).substitutions[0]) == [2, 3, 11, 12]


@pytest.mark.parametrize("branch", [1, -1])
def test_four_mass_box_root_solves_the_quadratic(branch):
    z = _box_point()
    box = four_mass_box(z, branch)
    assert box.a * box.alpha * box.alpha + box.b * box.alpha + box.c == 0
    # Y(X, X) vanishes with X in the slot of 7
    assert evaluate_scalar(parse("<127*43*567>"), box.with_x(z)) == 0


def test_four_mass_box_image_of_2_is_on_the_line_12():
    z = _box_point()
    box = four_mass_box(z, 1)
    point = {1: z.column(0), 2: z.column(1), 3: box.w, 4: z.column(8)}
    assert evaluate_scalar(parse("<1234>"), point) == 0
    assert box.domain == (1, 2, 7, 8, 9)
    assert box.blob_point().shape == (4, 5)


def test_four_mass_box_argument_checks():
    z = _box_point()
    with pytest.raises(WorkbenchError):
        four_mass_box(z, 0)
    with pytest.raises(WorkbenchError):
        four_mass_box(Mat.random(random.Random(0), 4, 7, 50), 1)


def test_four_mass_box_needs_a_positive_discriminant():
    for seed in range(200):
        z = Mat.random(random.Random(seed), 4, 9, 50)
        a, b, c = quadratic_coefficients(z)
        if a and b * b - 4 * a * c < 0:
            with pytest.raises(NegativeDiscriminant):
                four_mass_box(z, 1)
            return
    pytest.skip("no point with a negative discriminant among the seeds")


def test_identities_hold_at_a_positive_point():
    z = sample_positive(4, 10, rng=random.Random(3)).matrix
    checks = four_mass_box_identities(z)
    assert len(checks) == 2 * 2 + 2
    assert all(check.holds for check in checks)
    assert all(sign != 0 for sign in identity_signs(checks).values())


def test_identities_hold_at_a_random_point(rng):
    z = Mat.random(rng, 4, 9, 100)
    checks = four_mass_box_identities(z)
    assert all(check.holds for check in checks), [c.name for c in checks if not c.holds]


def test_promoted_point_evaluates_the_bracket_with_x():
    z = _box_point()
    box = four_mass_box(z, -1)
    promoted = Evaluator(box.images)
    assert promoted.scalar(parse("<1789>")) == evaluate_scalar(parse("<1789>"), box.with_x(z))


@pytest.mark.parametrize("branch", [1, -1])
def test_four_mass_box_at_a_positive_point_keeps_the_exact_root(branch):
    z = sample_positive(4, 9, "moment_curve", random.Random(3)).matrix
    box = four_mass_box(z, branch)
    assert box.a * box.alpha * box.alpha + box.b * box.alpha + box.c == 0
    assert box.alpha != four_mass_box(z, -branch).alpha
    assert box.blob_point().shape == (4, 5)


def test_identity_checks_hold_quadratic_values():
    value = make_quad(1, 3, 2)
    assert isinstance(value, QuadExt)
    check = IdentityCheck(family="f", name="n", lhs=value, rhs=-value, sign=-1)
    assert check.lhs is value
    assert check.holds
