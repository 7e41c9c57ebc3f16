from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from plabic_workbench.errors import EvaluationDivisionByZero, GradeError
from plabic_workbench.gca import (
    Col,
    Evaluator,
    Multivector,
    br,
    bracket,
    chain,
    char_label,
    columns_blade,
    erase,
    evaluate,
    evaluate_scalar,
    label_char,
    labels_of,
    neg,
    parse,
    shuffle,
    substitute,
    to_string,
    wedge,
    wedge_all,
)
from plabic_workbench.scalar import Mat

entries = st.integers(min_value=-9, max_value=9)


def matrices(rows: int, columns: int):
    return st.lists(st.lists(entries, min_size=columns, max_size=columns), min_size=rows, max_size=rows).map(Mat)


def test_labels_use_a_single_character():
    assert label_char(10) == "A"
    assert char_label("c") == 12
    with pytest.raises(ValueError):
        char_label("?")


def test_wedge_anticommutes():
    e1 = Multivector(3, {(0,): Fraction(1)})
    e2 = Multivector(3, {(1,): Fraction(1)})
    assert wedge(e1, e2) == -wedge(e2, e1)
    assert wedge(e1, e1).is_zero()
    assert Multivector.basis(3, [1, 0]) == -Multivector.basis(3, [0, 1])


def test_shuffle_below_complementary_grade_vanishes():
    e1 = Multivector(4, {(0,): Fraction(1)})
    e2 = Multivector(4, {(1,): Fraction(1)})
    assert shuffle(e1, e2).is_zero()


def test_bracket_is_the_maximal_minor(point4x8):
    assert evaluate_scalar(br([1, 2, 3, 4]), point4x8) == point4x8.plucker([0, 1, 2, 3])
    assert evaluate_scalar(br([2, 1, 3, 4]), point4x8) == -point4x8.plucker([0, 1, 2, 3])


def test_complementary_shuffle_is_the_bracket(point4x8):
    assert evaluate_scalar(parse("12*34"), point4x8) == evaluate_scalar(parse("<1234>"), point4x8)


def test_shuffle_grade_drops_by_m(point4x8):
    assert evaluate(parse("123*456"), point4x8).grade == 2
    assert evaluate(parse("123*45"), point4x8).grade == 1


def test_chain_polynomial_matches_expression(point4x8):
    assert chain([1, 2, 3], [4, 5, 6], [7, 8], point4x8) == evaluate_scalar(parse("<123*456*78>"), point4x8)


def test_chain_rejects_bad_sizes(point4x8):
    with pytest.raises(GradeError):
        chain([1, 2], [3, 4], [5, 6], point4x8)


@given(matrices(4, 6))
def test_three_term_plucker_relation(z):
    relation = parse("<1234><1256>-<1235><1246>+<1236><1245>")
    assert evaluate_scalar(relation, z) == 0


def test_span_of_a_decomposable_blade(point4x8):
    blade = columns_blade(point4x8, [1, 2])
    basis = blade.span()
    assert len(basis) == 2
    assert Mat(basis).row_space_contains(Mat([point4x8.column(0), point4x8.column(1)]))


def test_print_then_parse_is_stable():
    for text in ["12*34/<124>", "<123*456*89>", "(12*34)/<134>", "<1234>-<1235>+#2"]:
        assert to_string(parse(to_string(parse(text)))) == to_string(parse(text))
    assert to_string(parse("(12*34)/<124>")) == "12*34/<124>"


def test_erase_removes_a_column_from_its_group():
    assert to_string(erase(parse("<123*456*789>"), 7)) == "<123*456*89>"


def test_substitute_pulls_back_columns(point4x8):
    moved = substitute(parse("<1234>"), {1: Col(5)})
    assert evaluate_scalar(moved, point4x8) == -point4x8.plucker([1, 2, 3, 4])
    assert labels_of(moved) == {2, 3, 4, 5}


def test_zero_denominator_is_reported(point4x8):
    with pytest.raises(EvaluationDivisionByZero):
        evaluate_scalar(parse("<1234>/<1123>"), point4x8)


def test_bracket_of_wrong_grade(point4x8):
    with pytest.raises(GradeError):
        evaluate_scalar(parse("<123>"), point4x8)


def test_evaluator_agrees_with_direct_evaluation(point4x8):
    evaluator = Evaluator(point4x8)
    for text in ["<1234>", "<123*456*78>", "12*34/<1345>"]:
        expr = parse(text)
        assert evaluator.value(expr) == evaluate(expr, point4x8)


def test_negation_flips_the_value():
    z = Mat([[1, 2, 0], [3, 1, 5]])
    assert evaluate_scalar(neg(br([1, 2])), z) == -z.plucker([0, 1]) == 5


def test_evaluator_is_not_fooled_by_discarded_trees(point4x8):
    evaluator = Evaluator(point4x8)
    for _ in range(3):
        for text in ["<1234>", "<1235>", "12*34/<1345>", "<123*456*78>"]:
            assert evaluator.value(parse(text)) == evaluate(parse(text), point4x8)


def test_evaluate_takes_no_outside_memo(point4x8):
    with pytest.raises(TypeError):
        evaluate(parse("<1234>"), point4x8, {})


def homogeneous(m: int, grade: int):
    blades = list(combinations(range(m), grade))
    return st.lists(entries, min_size=len(blades), max_size=len(blades)).map(
        lambda coeffs: Multivector(m, {b: Fraction(c) for b, c in zip(blades, coeffs)})
    )


def _shuffle_by_definition(a, b, m: int) -> Multivector:
    """Signed sum over the ways to pick m - q vectors of A to complete B"""
    total = Multivector(m)
    for front in combinations(range(len(a)), m - len(b)):
        rest = [i for i in range(len(a)) if i not in front]
        sign = (-1) ** sum(1 for f in front for r in rest if f > r)
        det = Mat.from_columns([a[i] for i in front] + list(b), nrows=m).plucker(list(range(m)))
        total = total + wedge_all((Multivector.vector(a[i]) for i in rest), m).scale(sign * det)
    return total


@given(st.data())
def test_shuffle_is_associative(data):
    m = data.draw(st.integers(2, 5))
    a, b, c = [data.draw(homogeneous(m, data.draw(st.integers(1, m)))) for _ in range(3)]
    assert shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c))


@given(st.data())
def test_shuffle_swaps_with_the_grade_sign(data):
    m = data.draw(st.integers(2, 5))
    p, q = data.draw(st.integers(1, m)), data.draw(st.integers(1, m))
    a, b = data.draw(homogeneous(m, p)), data.draw(homogeneous(m, q))
    assert shuffle(a, b) == shuffle(b, a).scale((-1) ** ((m - p) * (m - q)))


@given(st.data())
def test_shuffle_matches_the_sum_over_shuffles(data):
    m = data.draw(st.integers(2, 5))
    p = data.draw(st.integers(1, m))
    q = data.draw(st.integers(max(1, m - p), m))
    z = data.draw(matrices(m, p + q))
    a = [z.column(i) for i in range(p)]
    b = [z.column(i) for i in range(p, p + q)]
    blades = columns_blade(z, range(1, p + 1)), columns_blade(z, range(p + 1, p + q + 1))
    assert shuffle(*blades) == _shuffle_by_definition(a, b, m)


@given(st.data())
def test_signed_wedge_shuffle_sum_vanishes(data):
    m = data.draw(st.integers(2, 6))
    p = data.draw(st.integers(2, min(4, m + 1)))
    cuts = sorted(data.draw(st.lists(st.integers(1, m), min_size=p - 1, max_size=p - 1, unique=True)))
    bounds = [0] + cuts + [m + 1]
    dims = [bounds[i + 1] - bounds[i] for i in range(p)]
    z = data.draw(matrices(m, m + 1))
    blocks = [columns_blade(z, range(bounds[i] + 1, bounds[i + 1] + 1)) for i in range(p)]
    total = Multivector(m)
    for i, block in enumerate(blocks):
        others = wedge_all((x for j, x in enumerate(blocks) if j != i), m)
        total = total + shuffle(others, block).scale((-1) ** (dims[i] * sum(dims[i:])))
    assert total.is_zero()


@given(matrices(4, 6), st.sampled_from([2, 3]))
def test_shuffle_spans_the_intersection(z, q):
    a_cols = [z.column(i) for i in range(3)]
    b_cols = [z.column(i) for i in range(3, 3 + q)]
    assume(Mat.from_columns(a_cols, nrows=4).rank() == 3)
    assume(Mat.from_columns(b_cols, nrows=4).rank() == q)
    assume(Mat.from_columns(a_cols + b_cols, nrows=4).rank() == 4)
    basis = shuffle(columns_blade(z, [1, 2, 3]), columns_blade(z, range(4, 4 + q))).span()
    assert len(basis) == q - 1
    relations = Mat.from_columns(a_cols + [tuple(-x for x in col) for col in b_cols], nrows=4).kernel()
    meet = [tuple(sum(x[i] * a_cols[i][r] for i in range(3)) for r in range(4)) for x in relations]
    assert Mat(basis).rank() == Mat(meet).rank() == q - 1
    assert Mat(basis).row_space_contains(Mat(meet))


@given(matrices(4, 8))
def test_chain_is_the_same_in_both_associations(z):
    a, b, c = (columns_blade(z, labels) for labels in ([1, 2, 3], [4, 5, 6], [7, 8]))
    assert chain([1, 2, 3], [4, 5, 6], [7, 8], z) == bracket(shuffle(a, shuffle(b, c)))


@given(matrices(3, 6))
def test_chain_in_three_dimensions_expands_into_brackets(z):
    def det(*labels):
        return z.plucker([i - 1 for i in labels])

    expected = det(1, 3, 4) * det(2, 5, 6) - det(2, 3, 4) * det(1, 5, 6)
    assert chain([1, 2], [3, 4], [5, 6], z) == expected
