"""Formula layer: parsing, printing, classification, and unnesting."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intlat.syntax import (
    SIG_L,
    SIG_W,
    And,
    Atomic,
    App,
    Exists,
    Forall,
    Not,
    Or,
    ParseError,
    Var,
    classify,
    format_formula,
    free_vars,
    is_unnested,
    is_unnested_atom,
    nnf,
    parse,
    rename_bound_apart,
    substitute,
    unnest,
)

W_TEXTS = [
    "X = bot",
    "min(X) = cz",
    "cup(X, Y) = cap(Y, X)",
    "ips(X, Y) = Z",
    "min(X) = cz & !X = bot",
    "X = bot | Y = bot",
    "E Y. ips(X, Y) = Y",
    "A Y. (Y sub X -> Y = X)",
    "E Y. A Z. (cap(Y, Z) = bot -> Z = bot)",
    "max(cup(X, cz)) = min(X)",
]

L_TEXTS = [
    "l(X) = r(X)",
    "min(X) = max(X)",
    "X sub Y",
    "E Y. l(Y) = r(Y) & cup(Y, cz) = Y",
    "!(X = bot) & r(X) = cz",
]


@pytest.mark.parametrize("text", W_TEXTS)
def test_print_parse_round_trip_w(text):
    f = parse(text, SIG_W)
    assert parse(format_formula(f), SIG_W) == f


@pytest.mark.parametrize("text", L_TEXTS)
def test_print_parse_round_trip_l(text):
    f = parse(text, SIG_L)
    assert parse(format_formula(f), SIG_L) == f


def test_subset_sugar_prints_back_as_sugar():
    f = parse("X sub Y", SIG_W)
    assert f == Atomic(App("cap", (Var("X"), Var("Y"))), Var("X"))
    assert format_formula(f) == "X sub Y"


def test_negated_atom_prints_without_parens():
    f = parse("!(X = bot)", SIG_W)
    assert format_formula(f) == "!X = bot"
    assert parse("!X = bot", SIG_W) == f


def test_precedence_and_is_tighter_than_or():
    f = parse("X = bot & Y = bot | Z = bot", SIG_W)
    assert isinstance(f, Or) and isinstance(f.lhs, And)
    g = parse("X = bot | Y = bot & Z = bot", SIG_W)
    assert isinstance(g, Or) and isinstance(g.rhs, And)


def test_quantifier_scope_extends_right():
    f = parse("E Y. Y = X & Y = bot", SIG_W)
    assert isinstance(f, Exists) and isinstance(f.body, And)


def test_signatures_reject_each_others_symbols():
    with pytest.raises(ParseError):
        parse("l(X) = r(X)", SIG_W)
    with pytest.raises(ParseError):
        parse("ips(X, Y) = Z", SIG_L)


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as ei:
        parse("min(X", SIG_W)
    assert ei.value.position == 5
    with pytest.raises(ParseError) as ei:
        parse("cup(X Y) = Z", SIG_W)
    assert ei.value.position == 6
    with pytest.raises(ParseError) as ei:
        parse("min() = cz", SIG_W)
    assert ei.value.position > 0


def test_arity_is_enforced():
    with pytest.raises(ParseError):
        parse("cup(X) = Y", SIG_W)
    with pytest.raises(ParseError):
        parse("min(X, Y) = Z", SIG_W)


def test_classify_by_quantifier_shape():
    # positive_existential takes precedence: a negation-free atom is both
    assert classify(parse("X = bot", SIG_W)) == "positive_existential"
    assert classify(parse("min(X) = cz & !X = bot", SIG_W)) == "quantifier_free"
    assert classify(parse("E Y. Y = X", SIG_W)) == "positive_existential"
    assert classify(parse("E Y. !(Y = X)", SIG_W)) == "existential"
    assert classify(parse("A Y. Y = X", SIG_W)) == "other"
    assert classify(parse("E Y. (Y = X -> Y = bot)", SIG_W)) == "existential"
    assert classify(parse("!(E Y. Y = X)", SIG_W)) == "other"


def test_free_vars_respect_binders():
    f = parse("E Y. cap(X, Y) = Z", SIG_W)
    assert free_vars(f) == {"X", "Z"}


def test_substitute_avoids_capture():
    f = Exists("Y", Atomic(App("cup", (Var("X"), Var("Y"))), Var("Y")))
    g = substitute(f, {"X": Var("Y")})
    assert isinstance(g, Exists) and g.var != "Y"
    assert free_vars(g) == {"Y"}


def test_rename_bound_apart_gives_distinct_binders():
    f = parse("E Y. Y = X & (E Y. Y = bot)", SIG_W)
    g = rename_bound_apart(f)

    def binders(h):
        if isinstance(h, (Exists, Forall)):
            return [h.var] + binders(h.body)
        if isinstance(h, (And, Or)):
            return binders(h.lhs) + binders(h.rhs)
        if isinstance(h, Not):
            return binders(h.body)
        return []

    bs = binders(g)
    assert len(bs) == len(set(bs))


def test_nnf_pushes_negations_to_atoms():
    f = parse("!(X = bot & (E Y. Y = X))", SIG_W)
    g = nnf(f)
    assert isinstance(g, Or) and isinstance(g.rhs, Forall)
    assert format_formula(nnf(parse("!!X = bot", SIG_W))) == "X = bot"


def test_unnest_flattens_compound_terms():
    f = parse("min(cup(X, Y)) = cz", SIG_W)
    g = unnest(f)
    assert is_unnested(g)
    assert not is_unnested_atom(f)


def test_unnest_keeps_already_flat_formulas_flat():
    f = parse("cup(X, Y) = Z", SIG_W)
    assert is_unnested(f)
    assert is_unnested(unnest(f))


@pytest.mark.parametrize("text", W_TEXTS)
def test_unnest_output_is_always_flat(text):
    assert is_unnested(unnest(parse(text, SIG_W)))
