"""Finite unions of closed intervals: normal form, lattice operations,
endpoint maps, and the reconstruction of a union from its endpoint sets.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intlat.fci import (
    EMPTY_FCI,
    FciSet,
    Segment,
    build_from_endpoints,
    difference_closed,
    embed_finset,
    embed_point,
    endpoint_condition,
    format_fci,
    normalize,
    parse_fci,
    witness_d,
    zero_fci,
)
from intlat.finset import FinSet
from intlat.oracle import enum_fcis

F = Fraction
fs = FinSet.of


def seg_pairs():
    pair = st.tuples(
        st.fractions(min_value=0, max_value=12),
        st.fractions(min_value=0, max_value=12),
    ).map(lambda ab: (min(ab), max(ab)))
    return st.lists(pair, max_size=4)


fcis = st.tuples(
    seg_pairs(), st.none() | st.fractions(min_value=0, max_value=12)
).map(lambda t: normalize(t[0], rays=[] if t[1] is None else [t[1]]))


def test_segment_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        Segment(F(2), F(1))


def test_normalize_merges_touching_and_overlapping_parts():
    got = normalize([(F(0), F(1)), (F(1), F(2)), (F(4), F(5))], rays=[F(7)])
    assert format_fci(got) == "[0,2] + [4,5] + [7,*)"


def test_normalize_lets_the_ray_swallow_later_segments():
    got = normalize([(F(0), F(1)), (F(6), F(8))], rays=[F(5)])
    assert format_fci(got) == "[0,1] + [5,*)"


def test_normalize_keeps_lowest_ray():
    got = normalize([], rays=[F(3), F(1)])
    assert format_fci(got) == "[1,*)"


@given(fcis, fcis)
def test_union_intersect_commute(a, b):
    assert a.union(b) == b.union(a)
    assert a.intersect(b) == b.intersect(a)


@given(fcis, fcis)
def test_absorption(a, b):
    assert a.union(a.intersect(b)) == a
    assert a.intersect(a.union(b)) == a


@given(fcis, fcis)
def test_subset_agrees_with_intersection(a, b):
    assert a.issubset(b) == (a.intersect(b) == a)


def test_intersect_hand_values():
    a = parse_fci("[0,2] + [5,*)")
    assert format_fci(a.intersect(parse_fci("[1,6]"))) == "[1,2] + [5,6]"
    assert format_fci(a.intersect(parse_fci("[3,4]"))) == "empty"
    assert format_fci(a.intersect(parse_fci("[6,*)"))) == "[6,*)"


def test_min_max_pick_extreme_points():
    a = parse_fci("[1,2] + [4,*)")
    assert a.min_set() == embed_point(F(1))
    assert a.max_set() == EMPTY_FCI  # unbounded: no greatest point
    assert parse_fci("[1,2]").max_set() == embed_point(F(2))
    assert EMPTY_FCI.min_set() == EMPTY_FCI


def test_endpoint_maps():
    a = parse_fci("[0,1] + {2} + [5,*)")
    assert a.left_endpoints() == fs([0, 2, 5])
    assert a.right_endpoints() == fs([0 + 1, 2])  # the ray has no right end
    assert a.boundary() == fs([0, 1, 2, 5])


def test_membership_and_finiteness():
    a = parse_fci("[0,1] + {3}")
    assert a.contains(F(1, 2)) and a.contains(F(3)) and not a.contains(F(2))
    assert not a.is_finite_set()
    b = embed_finset(fs([1, 2]))
    assert b.is_finite_set() and b.as_finset() == fs([1, 2])
    assert zero_fci() == embed_point(F(0))


def test_endpoint_condition_requires_alternation_from_the_left():
    assert endpoint_condition(fs([0, 3]), fs([1]))
    assert endpoint_condition(fs([0]), fs([0]))  # the single point {0}
    assert not endpoint_condition(fs([1]), fs([0]))  # would close before opening
    assert not endpoint_condition(fs([0, 1]), fs([0, 1, 2]))
    # the empty pair names no nonempty set; callers special-case it
    assert not endpoint_condition(FinSet(), FinSet())


def test_build_from_endpoints_hand_values():
    assert format_fci(build_from_endpoints(fs([0, 3]), fs([1]))) == "[0,1] + [3,*)"
    assert format_fci(build_from_endpoints(fs([0]), fs([2]))) == "[0,2]"
    with pytest.raises(ValueError):
        build_from_endpoints(fs([1]), fs([0]))
    with pytest.raises(ValueError):
        build_from_endpoints(FinSet(), FinSet())


@given(fcis)
def test_a_union_is_determined_by_its_endpoint_sets(a):
    if not a:
        return
    b, c = a.left_endpoints(), a.right_endpoints()
    assert endpoint_condition(b, c)
    assert build_from_endpoints(b, c) == a


def test_endpoint_reconstruction_exhaustively_on_a_small_pool():
    pool = fs([0, 1, 2])
    for a in enum_fcis(pool, 3, True):
        if a:
            assert build_from_endpoints(a.left_endpoints(), a.right_endpoints()) == a


def test_witness_d_hand_value():
    d = witness_d(fs([1, 2, 5]), fs([2, 5]), fs([1, 2]))
    assert format_fci(d) == "[0,1] + {2} + [5,*)"
    assert d.right_endpoints() == fs([1, 2])
    assert not d.max_set()


def test_difference_closed_returns_none_when_the_difference_is_not_closed():
    a = parse_fci("[0,2]")
    assert difference_closed(a, parse_fci("{1}")) is None
    assert difference_closed(a, parse_fci("[0,1]")) is None
    assert difference_closed(a, parse_fci("[1,3]")) is None


def test_difference_closed_hand_values():
    a = parse_fci("[0,1] + {2}")
    assert difference_closed(a, parse_fci("{2}")) == parse_fci("[0,1]")
    assert difference_closed(a, parse_fci("[4,5]")) == a
    assert difference_closed(a, a) == EMPTY_FCI
    assert difference_closed(parse_fci("[0,*)"), EMPTY_FCI) == parse_fci("[0,*)")


@given(fcis, fcis)
def test_difference_closed_is_the_set_difference_when_defined(a, b):
    d = difference_closed(a, b)
    if d is None:
        return
    assert d.intersect(b) == EMPTY_FCI
    assert d.union(a.intersect(b)) == a
    assert d.issubset(a)


def test_parse_accepts_both_spaced_and_compact_forms():
    assert parse_fci("[0,1]+{2}+[5,*)") == parse_fci("[0,1] + {2} + [5,*)")
    assert parse_fci("empty") == EMPTY_FCI
    assert parse_fci("{1/2}") == embed_point(F(1, 2))


def test_parse_rejects_malformed_input():
    for bad in ["", "[1,0]", "[0,1)", "[0,1] + ", "(0,1]", "[*,1]"]:
        with pytest.raises(ValueError):
            parse_fci(bad)


@given(fcis)
def test_format_parse_round_trip(a):
    assert parse_fci(format_fci(a)) == a
