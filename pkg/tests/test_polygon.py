from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omideals.polygon import (PolygonError, first_touch, intercept_int, lower_envelope,
                              principal_part, render_ascii, side_of_slope)

clouds = st.lists(st.tuples(st.integers(0, 30), st.integers(-20, 40)), min_size=1, max_size=25)
slopes = st.fractions(min_value=Fraction(-12), max_value=Fraction(-1, 12)).filter(lambda q: q < 0)


def test_envelope_examples():
    N = lower_envelope([(0, 3), (1, 1), (2, 0)])
    assert N.vertices == ((0, 3), (1, 1), (2, 0))
    assert [S.slope for S in N.sides] == [-2, -1]
    N = lower_envelope([(0, 2), (1, 2), (2, 0)])
    assert N.vertices == ((0, 2), (2, 0))
    N = lower_envelope([(4, 7)])
    assert N.vertices == ((4, 7),) and N.sides == []


def test_empty_cloud():
    with pytest.raises(PolygonError):
        lower_envelope([])
    with pytest.raises(PolygonError):
        first_touch([], Fraction(-1))


def test_principal_part_examples():
    assert [S.slope for S in principal_part(lower_envelope([(0, 3), (1, 1), (2, 0)]))] == [-2, -1]
    N = lower_envelope([(0, 2), (1, 1), (2, 1), (4, 2)])
    assert [S.slope for S in N.sides] == [-1, 0, Fraction(1, 2)]
    assert [S.slope for S in principal_part(N)] == [-1]
    assert principal_part(lower_envelope([(0, 0), (3, 5)])) == []


def test_side_data():
    (S,) = principal_part(lower_envelope([(0, 1), (2, 0)]))
    assert (S.h, S.e, S.degree, S.length) == (1, 2, 1, 2)
    (S,) = principal_part(lower_envelope([(0, 6), (4, 0)]))
    assert (S.h, S.e, S.degree) == (3, 2, 2)
    assert S.u0 - S.u1 == S.h * S.degree


def test_first_touch_examples():
    contact, s, u, H = first_touch([(0, 1), (1, 0)], Fraction(-1))
    assert contact == [(0, 1), (1, 0)] and (s, u, H) == (0, 1, 1)
    # a steeper line first meets the left end, a flatter one the right end
    contact, s, u, H = first_touch([(0, 1), (1, 0)], Fraction(-2))
    assert contact == [(0, 1)] and (s, u, H) == (0, 1, 1)
    contact, s, u, H = first_touch([(0, 1), (1, 0)], Fraction(-1, 2))
    assert contact == [(1, 0)] and (s, u, H) == (1, 0, Fraction(1, 2))


def test_side_of_slope():
    N = lower_envelope([(0, 4), (1, 2), (3, 1)])
    assert side_of_slope(N, 2, 1).s0 == 0
    assert side_of_slope(N, 4, 2).s1 == 1
    assert side_of_slope(N, 1, 2).s0 == 1
    assert side_of_slope(N, 3, 1) is None


def test_render_ascii_marks_vertices():
    text = render_ascii(lower_envelope([(0, 1), (1, 1), (2, 0)]), [(0, 1), (1, 1), (2, 0)])
    assert text.splitlines()[0].endswith("o*.")


@settings(max_examples=200, deadline=None)
@given(clouds)
def test_envelope_is_convex_and_below_cloud(cloud):
    N = lower_envelope(cloud)
    sl = [S.slope for S in N.sides]
    assert sl == sorted(sl) and len(set(sl)) == len(sl)
    for S in N.sides:
        assert S.slope == Fraction(S.u1 - S.u0, S.s1 - S.s0)
    for s, u in cloud:
        for S in N.sides:
            if S.s0 <= s <= S.s1:
                assert u >= S.u0 + S.slope * (s - S.s0)
    assert lower_envelope(N.vertices) == N


@settings(max_examples=200, deadline=None)
@given(clouds, slopes)
def test_first_touch_is_min_intercept(cloud, lam):
    contact, s, u, H = first_touch(cloud, lam)
    assert H == min(uu + ss * -lam for ss, uu in cloud)
    assert (s, u) == min(contact)
    assert all(uu + ss * -lam == H for ss, uu in contact)
    if lam.denominator < 10:
        W, touch = intercept_int(cloud, -lam.numerator, lam.denominator)
        assert W == H * lam.denominator
        assert set(touch) <= set(cloud)
