import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cube_sections.sections import (
    central_volume,
    cone_volume,
    diagonal_direction,
    diagonal_section_volume,
    facet_section_volume,
    normalized_section,
    parallel_section,
    section_report,
    slab_identity_check,
)
from cube_sections.weights import InvalidInputError

interior_st = st.lists(
    st.floats(0.05, 1.0, allow_nan=False), min_size=3, max_size=6
).map(np.asarray)

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


# -- frozen geometry ----------------------------------------------------


def test_axis_sections():
    assert central_volume((1.0, 0.0, 0.0)) == pytest.approx(4.0, rel=1e-14)
    assert normalized_section((0.0, 1.0, 0.0)) == pytest.approx(math.pi, rel=1e-14)
    assert central_volume((0.0, 0.0, 0.0, 5.0)) == pytest.approx(8.0, rel=1e-14)


def test_two_diagonal_sections():
    assert central_volume((1.0, 1.0)) == pytest.approx(2.0 * SQRT2, rel=1e-13)
    assert normalized_section((1.0, 1.0, 0.0)) == pytest.approx(
        SQRT2 * math.pi, rel=1e-13
    )


def test_full_diagonal_volumes():
    # n = 3, 4, 5 full diagonals, normalized by the facet volume 2^(n-1)
    assert diagonal_section_volume(3, 3) / 4.0 == pytest.approx(
        3.0 * SQRT3 / 4.0, rel=1e-13
    )
    assert diagonal_section_volume(4, 4) / 8.0 == pytest.approx(4.0 / 3.0, rel=1e-13)
    assert diagonal_section_volume(5, 5) / 16.0 == pytest.approx(
        115.0 * math.sqrt(5.0) / 192.0, rel=1e-13
    )


def test_diagonal_normalized_volume_depends_only_on_k():
    for n in (4, 6, 9):
        for k in range(1, n + 1):
            assert diagonal_section_volume(n, k) / 2.0 ** (n - 1) == pytest.approx(
                diagonal_section_volume(k, k) / 2.0 ** (k - 1), rel=1e-12
            )


def test_special_direction_four_dims():
    a = (1.0, 1.0, 2.0, 2.0)
    assert central_volume(a) == pytest.approx(10.0 * math.sqrt(10.0) / 3.0, rel=1e-13)
    assert normalized_section(a) == pytest.approx(
        5.0 * math.sqrt(10.0) * math.pi / 12.0, rel=1e-13
    )


def test_parallel_section_triangle():
    a = (1.0, 1.0)
    norm = SQRT2
    assert parallel_section(a, 0.0) == pytest.approx(4.0 * norm * 0.5, rel=1e-13)
    assert parallel_section(a, 1.5) == pytest.approx(4.0 * norm * 0.125, rel=1e-13)
    assert parallel_section(a, 2.5) == 0.0


def test_parallel_section_degenerate_flag():
    value, flag = parallel_section((2.0, 0.0), 2.0, with_flag=True)
    assert (value, flag) == (2.0, True)
    value, flag = parallel_section((2.0, 0.0), 1.9, with_flag=True)
    assert (value, flag) == (2.0, False)
    value, flag = parallel_section((2.0, 0.0), 2.1, with_flag=True)
    assert (value, flag) == (0.0, False)


def test_facet_and_cone_at_three_diagonal():
    a = diagonal_direction(3, 3)
    for k in range(3):
        assert facet_section_volume(a, k) == pytest.approx(SQRT2, rel=1e-13)
        assert cone_volume(a, k) == pytest.approx(SQRT3 / 2.0, rel=1e-13)


def test_facet_and_cone_at_axis():
    e1 = (1.0, 0.0, 0.0)
    assert facet_section_volume(e1, 0) == 0.0
    assert cone_volume(e1, 0) == 0.0
    assert facet_section_volume(e1, 1) == pytest.approx(2.0, rel=1e-14)
    assert cone_volume(e1, 2) == pytest.approx(1.0, rel=1e-14)


def test_cone_requires_two_dims():
    with pytest.raises(InvalidInputError):
        cone_volume((1.0,), 0)


# -- identities ---------------------------------------------------------


@given(interior_st)
@settings(deadline=None)
def test_cone_sum_identity_interior(a):
    # needs n >= 3: in the plane the section endpoints can sit on a
    # corner shared by two facets, which double-counts the cone
    report = section_report(a)
    assert report.degenerate_facets == ()
    assert report.cone_sum == pytest.approx(report.volume / 2.0, rel=1e-10)


def test_cone_sum_identity_plane():
    report = section_report((0.3, 1.0))
    assert report.cone_sum == pytest.approx(report.volume / 2.0, rel=1e-12)


@given(interior_st)
@settings(deadline=None)
def test_slab_identity_interior(a):
    report = section_report(a)
    assert report.slab_max_error <= 1e-10 * max(report.volume, 1.0)


@given(interior_st, st.floats(0.1, 20.0))
@settings(deadline=None)
def test_scale_invariance(a, c):
    assert central_volume(c * a) == pytest.approx(central_volume(a), rel=1e-12)
    assert normalized_section(c * a) == pytest.approx(
        normalized_section(a), rel=1e-12
    )


@given(interior_st, st.floats(-1.0, 1.0))
@settings(deadline=None)
def test_parallel_section_even(a, frac):
    r = frac * float(np.sum(a))
    assert parallel_section(a, r) == pytest.approx(
        parallel_section(a, -r), rel=1e-10, abs=1e-9
    )


@given(st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=7).map(np.asarray))
@settings(deadline=None)
def test_normalized_section_bounds(a):
    if float(np.max(np.abs(a))) < 1e-6:
        return
    # a coordinate at ~1e-13 of the largest is kept by the weight floor
    # but sits in an ill-conditioned band (corner pairs differ by under
    # an ulp); snap those to exact zero rather than loosening the bound
    a = np.where(np.abs(a) < 1e-4 * np.max(np.abs(a)), 0.0, a)
    sigma = normalized_section(a)
    assert math.pi - 1e-9 <= sigma <= SQRT2 * math.pi + 1e-9


def test_slab_identity_axis_cases():
    lhs, rhs = slab_identity_check((1.0, 0.0, 0.0), 0)
    assert lhs == pytest.approx(rhs, rel=1e-14)
    with pytest.raises(InvalidInputError):
        slab_identity_check((1.0, 0.0, 0.0), 1)


def test_report_boundary_direction():
    # one zero coordinate: facet slices through x_k = +-1 are cube edges,
    # where the half-open density convention drops the cone contribution
    report = section_report((1.0, 1.0, 0.0))
    assert report.degenerate_facets == (2,)
    assert report.volume == pytest.approx(4.0 * SQRT2, rel=1e-13)
    assert report.slab_max_error <= 1e-12
    assert report.cone_volumes[2] == pytest.approx(SQRT2, rel=1e-13)


def test_report_serializes():
    report = section_report((1.0, 1.0, 2.0, 2.0))
    payload = json.loads(json.dumps(report.to_dict()))
    assert payload["sigma"] == pytest.approx(
        5.0 * math.sqrt(10.0) * math.pi / 12.0, rel=1e-13
    )
    assert len(payload["cone_volumes"]) == 4
    assert payload["degenerate_facets"] == []
    assert payload["cone_sum"] == pytest.approx(payload["volume"] / 2.0, rel=1e-12)


def test_diagonal_direction_validation():
    v = diagonal_direction(2, 4)
    np.testing.assert_allclose(v, [0.0, 0.0, 1.0 / SQRT2, 1.0 / SQRT2])
    with pytest.raises(InvalidInputError):
        diagonal_direction(0, 3)
    with pytest.raises(InvalidInputError):
        diagonal_direction(4, 3)
