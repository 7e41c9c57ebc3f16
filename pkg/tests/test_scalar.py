from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plabic_workbench.errors import DeltaMismatch, DimensionMismatch
from plabic_workbench.scalar import Mat, QuadExt, format_scalar, make_quad, parse_rat, quad_sign, sqrt_rational

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
non_squares = st.sampled_from([Fraction(2), Fraction(3), Fraction(5), Fraction(7, 3)])


def test_parse_and_format_rationals():
    assert parse_rat(" -6/4 ") == Fraction(-3, 2)
    assert format_scalar(Fraction(-3, 2)) == "-3/2"
    assert format_scalar(Fraction(4)) == "4"


def test_sqrt_rational():
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
    assert sqrt_rational(Fraction(2)) is None
    assert sqrt_rational(Fraction(-1)) is None


def test_make_quad_collapses_rational_values():
    assert make_quad(1, 2, 4) == Fraction(5)
    assert make_quad(3, 0, 2) == Fraction(3)
    assert isinstance(make_quad(1, 1, 2), QuadExt)


def test_mixing_radicands_raises():
    with pytest.raises(DeltaMismatch):
        make_quad(0, 1, 2) + make_quad(0, 1, 3)


def test_quad_sign_when_parts_disagree():
    assert quad_sign(make_quad(-1, 1, 2)) == 1
    assert quad_sign(make_quad(2, -1, 3)) == 1
    assert quad_sign(make_quad(1, -1, 2)) == -1
    assert quad_sign(Fraction(0)) == 0


@given(rationals, rationals, rationals, rationals, non_squares)
def test_field_operations(a, b, c, d, delta):
    x = make_quad(a, b, delta)
    y = make_quad(c, d, delta)
    assert (x + y) - y == x
    assert x * y == y * x
    if y != 0:
        assert (x / y) * y == x


@given(rationals, rationals, non_squares)
def test_sign_matches_float(a, b, delta):
    x = make_quad(a, b, delta)
    value = float(a) + float(b) * float(delta) ** 0.5
    if abs(value) > 1e-9:
        assert quad_sign(x) == (1 if value > 0 else -1)


def test_determinant_and_kernel():
    z = Mat([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert z.det() == Fraction(-3)
    flat = Mat([[1, 2, 3], [2, 4, 6]])
    assert flat.rank() == 1
    for vector in flat.kernel():
        assert flat.apply(vector) == (0, 0)
    assert len(flat.kernel()) == 2


def test_plucker_order_and_containment():
    z = Mat([[1, 0, 1], [0, 1, 1]])
    assert z.plucker([0, 1]) == 1
    assert z.plucker([1, 0]) == -1
    assert dict(z.pluckers())[(1, 2)] == -1
    assert z.row_space_contains(Mat([[2, 3, 5]]))
    assert not z.row_space_contains(Mat([[0, 0, 1]]))


def test_ragged_rows_rejected():
    with pytest.raises(DimensionMismatch):
        Mat([[1, 2], [3]])


def test_matrix_over_quadratic_extension():
    r = make_quad(0, 1, 2)
    z = Mat([[1, r], [r, 1]])
    assert z.det() == Fraction(-1)
