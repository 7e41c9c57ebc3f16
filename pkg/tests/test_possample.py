import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plabic_workbench.errors import CertificateFailure, WorkbenchError
from plabic_workbench.possample import (
    certify_4mb,
    is_totally_positive,
    moment_curve_point,
    sample_many,
    sample_positive,
)
from plabic_workbench.scalar import Mat


@given(st.sets(st.fractions(min_value=Fraction(1, 100), max_value=100), min_size=5, max_size=7))
def test_moment_curve_is_totally_positive(ts):
    assert is_totally_positive(moment_curve_point(3, sorted(ts)))


@pytest.mark.parametrize("mode", ["moment_curve", "top_cell_weights"])
def test_sample_positive_modes(mode):
    point = sample_positive(3, 6, mode, random.Random(4))
    assert point.matrix.shape == (3, 6)
    assert point.mode == mode
    assert is_totally_positive(point.matrix)


def test_sample_positive_argument_checks():
    with pytest.raises(WorkbenchError):
        sample_positive(4, 3)
    with pytest.raises(WorkbenchError):
        sample_positive(2, 4, "grid")


def test_sample_many_is_deterministic_across_threads():
    serial = sample_many(4, 9, 4, seed=7)
    threaded = sample_many(4, 9, 4, seed=7, threads=3)
    assert [p.matrix for p in serial] == [p.matrix for p in threaded]
    assert serial[0].matrix != serial[1].matrix


def test_four_mass_box_certificates_at_positive_points():
    points = [p.matrix for p in sample_many(4, 9, 3, seed=1)]
    report = certify_4mb(points)
    assert report.passed, [f.statement for f in report.failures]
    assert report.samples == 3
    assert report.checks > 0


def test_certificates_report_and_raise_on_a_bad_point():
    z = sample_positive(4, 9, rng=random.Random(1)).matrix
    flipped = z.with_column(8, [-x for x in z.column(8)])
    report = certify_4mb([flipped])
    assert not report.passed
    assert len(report.counterexamples) == 1
    with pytest.raises(CertificateFailure):
        certify_4mb([flipped], strict=True)


def test_certificates_need_points_of_the_right_shape():
    with pytest.raises(WorkbenchError):
        certify_4mb([])
    with pytest.raises(WorkbenchError):
        certify_4mb([Mat.random(random.Random(0), 4, 8, 10)])
