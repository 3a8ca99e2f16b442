"""Bounded evaluation: terms, quantifier-free formulas, and quantified
formulas over witness pools.

The quantified cases lean on the fact that bounded evaluation is exact
for the relativized semantics: a formula holds over the pool iff the
solver says so, which the hand-checked examples here pin down.
"""

from fractions import Fraction

import pytest

from intlat.fci import EMPTY_FCI, embed_finset, parse_fci
from intlat.finset import EMPTY_FS, FinSet, parse_finset
from intlat.oracle import enum_fcis, enum_finsets
from intlat.semantics import (
    EvalCache,
    EvalError,
    WitnessPool,
    default_pool,
    eval_bounded,
    eval_qf,
    eval_term,
    universe,
)
from intlat.syntax import SIG_L, SIG_W, parse

F = Fraction
fs = FinSet.of


def term(text: str, sig):
    return parse("X = " + text, sig).rhs


def test_eval_term_finite_sets():
    a = {"X": fs([0, 1, 3]), "Y": fs([1, 2])}
    assert eval_term(term("cup(X, Y)", SIG_W), a, SIG_W) == fs([0, 1, 2, 3])
    assert eval_term(term("cap(X, Y)", SIG_W), a, SIG_W) == fs([1])
    assert eval_term(term("min(X)", SIG_W), a, SIG_W) == fs([0])
    assert eval_term(term("max(X)", SIG_W), a, SIG_W) == fs([3])
    assert eval_term(term("ips(X, Y)", SIG_W), a, SIG_W) == fs([0])
    assert eval_term(term("bot", SIG_W), a, SIG_W) == EMPTY_FS
    assert eval_term(term("cz", SIG_W), a, SIG_W) == fs([0])


def test_eval_term_interval_unions():
    a = {"X": parse_fci("[1,2] + [4,*)")}
    assert eval_term(term("min(X)", SIG_L), a, SIG_L) == parse_fci("{1}")
    assert eval_term(term("max(X)", SIG_L), a, SIG_L) == EMPTY_FCI
    assert eval_term(term("l(X)", SIG_L), a, SIG_L) == embed_finset(fs([1, 4]))
    assert eval_term(term("r(X)", SIG_L), a, SIG_L) == embed_finset(fs([2]))


def test_eval_term_rejects_unbound_variables():
    with pytest.raises(EvalError):
        eval_term(term("cup(X, Y)", SIG_W), {"X": EMPTY_FS}, SIG_W)


def test_eval_qf():
    a = {"X": fs([0, 2]), "Y": fs([2])}
    assert eval_qf(parse("cap(X, Y) = Y", SIG_W), a, SIG_W)
    assert eval_qf(parse("!X = bot", SIG_W), a, SIG_W)
    assert not eval_qf(parse("min(X) = max(X)", SIG_W), a, SIG_W)
    assert eval_qf(parse("X = bot | Y sub X", SIG_W), a, SIG_W)
    with pytest.raises(EvalError):
        eval_qf(parse("E Z. Z = X", SIG_W), a, SIG_W)


def test_default_pool_adds_midpoints_and_a_point_above():
    pool = default_pool({"X": parse_fci("[1,2]")})
    assert pool.points == fs([0, F(1, 2), 1, F(3, 2), 2, 3])
    assert pool.allow_ray
    pool0 = default_pool({})
    assert pool0.points == fs([0, 1])


def test_witness_pool_validation():
    with pytest.raises(ValueError):
        WitnessPool(points=FinSet(), max_segments=1)
    with pytest.raises(ValueError):
        WitnessPool(points=fs([1]), max_segments=1)  # missing 0
    with pytest.raises(ValueError):
        WitnessPool(points=fs([0]), max_segments=-1)
    with pytest.raises(ValueError):
        WitnessPool(points=fs([0, 1]), max_segments=2, pair_points=fs([0, 2]))


def test_universe_sizes():
    pool = WitnessPool(points=fs([0, 1]), max_segments=2)
    assert len(universe(pool, SIG_W)) == 4
    # segments over 2 points: empty, {0}, {1}, [0,1], {0}+{1}, plus rays
    names = {str(u) for u in universe(pool, SIG_L)}
    assert "empty" in names and "[0,*)" in names


def test_exists_finds_a_witness_inside_the_pool():
    pool = WitnessPool(points=fs([0, 1, 2]), max_segments=3)
    a = {"X": fs([1, 2])}
    assert eval_bounded(parse("E Y. cup(Y, X) = X & !Y = bot & cap(Y, max(X)) = bot", SIG_W), a, pool)
    assert not eval_bounded(parse("E Y. cap(Y, X) = Y & min(Y) = cz", SIG_W), a, pool)


def test_forall_is_exact_over_the_pool():
    pool = WitnessPool(points=fs([0, 1]), max_segments=2)
    a = {"X": fs([0, 1])}
    # every subset of X is a subset of X: trivially true
    assert eval_bounded(parse("A Y. (cap(Y, X) = Y -> Y sub X)", SIG_W), a, pool)
    # every set is a subset of X: false, the pool holds sets beyond X
    smaller = {"X": fs([0])}
    assert not eval_bounded(parse("A Y. Y sub X", SIG_W), smaller, pool)


def test_nested_quantifiers_and_reused_names():
    pool = WitnessPool(points=fs([0, 1, 2]), max_segments=3)
    f = parse("E Y. !Y = bot & (A Z. (cap(Z, Y) = Z -> min(Z) = min(Y) | Z = bot))", SIG_W)
    # singletons work: their only nonempty subset is themselves
    assert eval_bounded(f, {}, pool, SIG_W)


def test_quantifiers_over_interval_unions():
    pool = WitnessPool(points=fs([0, 1, 2]), max_segments=3)
    a = {"X": parse_fci("[0,2]")}
    assert eval_bounded(parse("E Y. min(X) = Y & min(Y) = Y", SIG_L), a, pool)
    assert eval_bounded(parse("E Y. l(Y) = r(Y) & cap(Y, X) = Y & !Y = bot", SIG_L), a, pool)
    # [0,2] is bounded, so its max is a point, never bot
    assert not eval_bounded(parse("E Y. max(X) = Y & Y = bot & !X = bot", SIG_L), a, pool)


def test_bounded_agreement_with_direct_enumeration():
    # E Y. cup(X, Y) = X & min(Y) = cz  says: X has a sub-part containing 0,
    # which over any pool just means 0 is a member of X
    pool = WitnessPool(points=fs([0, 1]), max_segments=2)
    f = parse("E Y. cup(X, Y) = X & min(Y) = cz & !Y = bot", SIG_W)
    for x in enum_finsets(pool.points):
        direct = any(
            y.union(x) == x and y and min(y) == 0 for y in enum_finsets(pool.points)
        )
        assert eval_bounded(f, {"X": x}, pool) == direct


def test_shared_cache_is_consistent_across_assignments():
    pool = WitnessPool(points=fs([0, 1, 2]), max_segments=3)
    f = parse("E Y. cap(Y, X) = Y & max(Y) = max(X)", SIG_W)
    cache = EvalCache()
    fresh = [
        eval_bounded(f, {"X": x}, pool, SIG_W)
        for x in enum_finsets(pool.points)
    ]
    shared = [
        eval_bounded(f, {"X": x}, pool, SIG_W, cache=cache)
        for x in enum_finsets(pool.points)
    ]
    assert fresh == shared


def test_missing_assignment_and_wrong_sort_raise():
    pool = WitnessPool(points=fs([0]), max_segments=1)
    with pytest.raises(EvalError):
        eval_bounded(parse("X = bot", SIG_W), {}, pool, SIG_W)
    with pytest.raises(EvalError):
        eval_bounded(parse("X = bot", SIG_W), {"X": EMPTY_FCI}, pool, SIG_W)
