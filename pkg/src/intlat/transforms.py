"""Constructive translations between the two formula languages.

Finite sets sit inside the interval structure as the sets whose left and
right endpoint maps agree; conversely an interval union is pinned down by
its endpoint pair.  This module realizes both directions on formulas:

* ``to_positive_existential`` removes negated equations from finite-set
  formulas (a nonempty witness inside the symmetric difference replaces
  each one);
* ``translate_W_to_L`` rewrites a positive existential finite-set formula
  over embedded finite sets, replacing ``ips`` equations by their
  interval characterization ``phi_ips``;
* ``translate_L_to_W`` rewrites an interval formula in terms of endpoint
  coordinates, with membership and containment expressed by ``phi_in``
  and ``phi_subseteq``;
* ``pipeline`` composes the three so that supported interval formulas
  come out existential.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    And,
    App,
    Atomic,
    Exists,
    Forall,
    Formula,
    FreshNames,
    Implies,
    Not,
    Or,
    SIG_L,
    SIG_W,
    SIG_W_DIFF,
    Term,
    Var,
    all_names,
    and_all,
    bot,
    cap,
    classify,
    cup,
    cz,
    diff_t,
    exists_all,
    fits_signature,
    formula_symbols,
    free_vars,
    ips_t,
    l_t,
    max_t,
    min_t,
    nnf,
    r_t,
    subset_atom,
    substitute,
    term_vars,
    unnest,
)


class FragmentError(ValueError):
    """The input formula lies outside the translatable fragment."""


# -- small definable pieces ----------------------------------------------------------


def diffdef(a: Term, b: Term, c: Term) -> Formula:
    """``c`` is the set difference ``a`` minus ``b``: the unique solution of
    ``(a cap b) cup c = a`` and ``b cap c = bot``."""
    return And(Atomic(cup(cap(a, b), c), a), Atomic(cap(b, c), bot()))


def delta_term(q1: Term, q2: Term) -> Term:
    """Symmetric difference, in the signature extended with ``diff``."""
    return cup(diff_t(q1, q2), diff_t(q2, q1))


def notbot(y: Term) -> Formula:
    """Nonemptiness without negation: y is {0}, or some element of y has
    its successor within y once 0 is adjoined."""
    return Or(Atomic(y, cz()), subset_atom(cz(), ips_t(cup(y, cz()), y)))


# -- simplifier ----------------------------------------------------------------------

TRUE = Atomic(bot(), bot())
FALSE = Atomic(cz(), bot())


def _is_op(t: Term, op: str) -> bool:
    return isinstance(t, App) and t.op == op


def _simp_term(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    args = tuple(_simp_term(x) for x in t.args)
    op = t.op
    if op == "cup":
        a, b = args
        if _is_op(a, "bot"):
            return b
        if _is_op(b, "bot") or a == b:
            return a
    elif op == "cap":
        a, b = args
        if _is_op(a, "bot") or _is_op(b, "bot"):
            return bot()
        if a == b:
            return a
    elif op in ("min", "max"):
        (a,) = args
        if _is_op(a, "bot"):
            return bot()
        if _is_op(a, "cz"):
            return cz()
        if _is_op(a, "min") or (op == "min" and _is_op(a, "max")):
            # min and max yield at most one point, so they absorb
            return a
        if op == "max" and _is_op(a, "max"):
            return a
    elif op == "ips":
        a, b = args
        if _is_op(a, "bot") or _is_op(b, "bot") or _is_op(a, "cz"):
            return bot()
    elif op == "diff":
        a, b = args
        if _is_op(b, "bot"):
            return a
        if _is_op(a, "bot") or a == b:
            return bot()
    elif op in ("l", "r"):
        (a,) = args
        if _is_op(a, "bot"):
            return bot()
        if _is_op(a, "cz"):
            return cz()
    return App(op, args)


def _and_list(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _and_list(f.lhs) + _and_list(f.rhs)
    return [f]


def _simple_def(t: Term) -> bool:
    return isinstance(t, Var) or (isinstance(t, App) and not t.args)


def _simp(f: Formula) -> Formula:
    if isinstance(f, Atomic):
        lhs, rhs = _simp_term(f.lhs), _simp_term(f.rhs)
        if lhs == rhs:
            return TRUE
        pair = {lhs, rhs}
        if pair == {bot(), cz()}:
            return FALSE
        return Atomic(lhs, rhs)
    if isinstance(f, Not):
        body = _simp(f.body)
        if body == TRUE:
            return FALSE
        if body == FALSE:
            return TRUE
        if isinstance(body, Not):
            return body.body
        return Not(body)
    if isinstance(f, And):
        a, b = _simp(f.lhs), _simp(f.rhs)
        if FALSE in (a, b):
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        return And(a, b)
    if isinstance(f, Or):
        a, b = _simp(f.lhs), _simp(f.rhs)
        if TRUE in (a, b):
            return TRUE
        if a == FALSE:
            return b
        if b == FALSE or a == b:
            return a
        return Or(a, b)
    if isinstance(f, Implies):
        a, b = _simp(f.lhs), _simp(f.rhs)
        if a == FALSE or b == TRUE:
            return TRUE
        if a == TRUE:
            return b
        return Implies(a, b)
    if isinstance(f, Exists):
        body = _simp(f.body)
        if f.var not in free_vars(body):
            return body
        parts = _and_list(body)
        for i, c in enumerate(parts):
            if not isinstance(c, Atomic):
                continue
            for x, t in ((c.lhs, c.rhs), (c.rhs, c.lhs)):
                if x == Var(f.var) and _simple_def(t) and f.var not in term_vars(t):
                    rest = parts[:i] + parts[i + 1 :]
                    if not rest:
                        return TRUE
                    inlined = substitute(and_all(rest), {f.var: t})
                    return _simp(inlined)
        return Exists(f.var, body)
    if isinstance(f, Forall):
        body = _simp(f.body)
        if f.var not in free_vars(body):
            return body
        return Forall(f.var, body)
    raise TypeError(f"cannot simplify {type(f).__name__}")


def simplify(f: Formula) -> Formula:
    """Constant folding plus inlining of definitional equations under
    their own quantifier.  Equivalence-preserving in both structures."""
    for _ in range(100):
        g = _simp(f)
        if g == f:
            return g
        f = g
    return f


# -- negation elimination ------------------------------------------------------------


def _find_forall(f: Formula) -> Optional[str]:
    if isinstance(f, Forall):
        return f.var
    if isinstance(f, (And, Or, Implies)):
        return _find_forall(f.lhs) or _find_forall(f.rhs)
    if isinstance(f, (Not, Exists)):
        return _find_forall(f.body if isinstance(f, Not) else f.body)
    return None


def _eliminate_negations(f: Formula, names: FreshNames) -> Formula:
    if isinstance(f, Atomic):
        return f
    if isinstance(f, Not):
        if not isinstance(f.body, Atomic):
            raise AssertionError("negation not at an equation after nnf")
        y = names.fresh("Y")
        witness = And(notbot(Var(y)), subset_atom(Var(y), delta_term(f.body.lhs, f.body.rhs)))
        return Exists(y, witness)
    if isinstance(f, And):
        return And(_eliminate_negations(f.lhs, names), _eliminate_negations(f.rhs, names))
    if isinstance(f, Or):
        return Or(_eliminate_negations(f.lhs, names), _eliminate_negations(f.rhs, names))
    if isinstance(f, Exists):
        return Exists(f.var, _eliminate_negations(f.body, names))
    raise AssertionError(f"unexpected {type(f).__name__} after nnf")


def _eliminate_diff(f: Formula, names: FreshNames) -> Formula:
    if isinstance(f, Atomic):
        defs: list[tuple[str, Term, Term]] = []

        def strip(t: Term) -> Term:
            if isinstance(t, Var):
                return t
            args = tuple(strip(x) for x in t.args)
            if t.op == "diff":
                c = names.fresh("C")
                defs.append((c, args[0], args[1]))
                return Var(c)
            return App(t.op, args)

        lhs, rhs = strip(f.lhs), strip(f.rhs)
        if not defs:
            return f
        body = and_all([diffdef(a, b, Var(c)) for c, a, b in defs] + [Atomic(lhs, rhs)])
        return exists_all([c for c, _, _ in defs], body)
    if isinstance(f, And):
        return And(_eliminate_diff(f.lhs, names), _eliminate_diff(f.rhs, names))
    if isinstance(f, Or):
        return Or(_eliminate_diff(f.lhs, names), _eliminate_diff(f.rhs, names))
    if isinstance(f, Exists):
        return Exists(f.var, _eliminate_diff(f.body, names))
    raise AssertionError(f"unexpected {type(f).__name__} during difference elimination")


def to_positive_existential(f: Formula) -> Formula:
    """Rewrite a finite-set formula without universal quantifiers into an
    equivalent one with no negation at all.

    Each negated equation becomes an existential witness: the two sides
    differ exactly when some nonempty set fits inside their symmetric
    difference, and nonemptiness is definable positively (``notbot``).
    """
    foreign = formula_symbols(f) - {s for s, _ in SIG_W_DIFF.symbols}
    if foreign:
        raise FragmentError(f"not a finite-set formula: uses {sorted(foreign)}")
    g = nnf(f)
    offender = _find_forall(g)
    if offender is not None:
        raise FragmentError(f"universal quantifier on {offender} cannot be eliminated")
    names = FreshNames(all_names(g))
    g = _eliminate_negations(g, names)
    g = _eliminate_diff(g, names)
    if classify(g) != "positive_existential":
        raise AssertionError("negation elimination left a non-positive formula")
    return g


# -- the interval characterization of ips --------------------------------------------


def phi_ips() -> Formula:
    """``ips(X, Y) = Z`` for embedded finite sets, as an interval formula.

    Write B for Y within X.  Z collects the points of X whose successor
    in X lands in B, which happens exactly when some unbounded interval
    union D has left endpoints B (0 adjoined, and the least point of B
    dropped when it is also the least of X), right endpoints Z, and is
    entered by X.  Unboundedness of D matters: without it, D built from a
    too-small Z can close off early and accept spurious triples.
    """
    x, y, z, d, e = Var("X"), Var("Y"), Var("Z"), Var("D"), Var("E")
    b = cap(y, x)
    common = [
        Atomic(r_t(d), z),
        subset_atom(z, x),
        subset_atom(x, d),
        Atomic(max_t(d), bot()),
    ]
    takes_least = And(
        subset_atom(min_t(x), b),
        Exists(
            "E",
            Exists(
                "D",
                and_all([diffdef(b, min_t(b), e), Atomic(l_t(d), cup(e, cz()))] + common),
            ),
        ),
    )
    skips_least = And(
        Atomic(cap(min_t(x), b), bot()),
        Exists("D", and_all([Atomic(l_t(d), cup(b, cz()))] + common)),
    )
    empty = And(Atomic(b, bot()), Atomic(z, bot()))
    return Or(empty, And(Not(Atomic(b, bot())), Or(takes_least, skips_least)))


# -- membership and containment through endpoint coordinates -------------------------


def phi_bdd_member() -> Formula:
    """Membership of the point Z in a bounded set with endpoints Xl, Xr."""
    xl, xr, z = Var("Xl"), Var("Xr"), Var("Z")
    bd = cup(xl, xr)
    return And(
        subset_atom(ips_t(cup(bd, z), z), diff_t(xl, xr)),
        Not(Atomic(cap(ips_t(cup(bd, z), diff_t(xr, xl)), z), bot())),
    )


def phi_nbdd_member() -> Formula:
    """Membership in an unbounded set: as in the bounded case, or Z lies
    at or beyond every endpoint."""
    xl, xr, z = Var("Xl"), Var("Xr"), Var("Z")
    return Or(phi_bdd_member(), Atomic(z, max_t(cup(cup(xl, xr), z))))


def at() -> Formula:
    """Z is a single point."""
    z = Var("Z")
    return And(Not(Atomic(z, bot())), Atomic(z, min_t(z)))


def phi_in() -> Formula:
    """The point Z belongs to the set with endpoint coordinates Xl, Xr."""
    xl, xr = Var("Xl"), Var("Xr")
    bd = cup(xl, xr)
    bounded = subset_atom(max_t(bd), xr)
    return And(
        Not(Atomic(bd, bot())),
        Or(
            subset_atom(Var("Z"), bd),
            Or(And(bounded, phi_bdd_member()), And(Not(bounded), phi_nbdd_member())),
        ),
    )


def phi_subseteq() -> Formula:
    """Containment between sets given by coordinates (Xl, Xr) and (Yl, Yr):
    every single point of the first belongs to the second."""
    member_x = phi_in()
    member_y = substitute(phi_in(), {"Xl": Var("Yl"), "Xr": Var("Yr")})
    return Forall("Z", Implies(at(), Implies(member_x, member_y)))


def delta_domain() -> Formula:
    """(B, C) is the endpoint pair of some nonempty interval union."""
    b, c = Var("B"), Var("C")
    bd = cup(b, c)
    gained = diff_t(c, b)
    kept = diff_t(b, c)
    closed = And(subset_atom(max_t(bd), c), Atomic(ips_t(bd, gained), kept))
    open_end = And(
        subset_atom(max_t(bd), kept),
        Atomic(cup(ips_t(bd, gained), max_t(bd)), kept),
    )
    return And(
        Not(Atomic(b, bot())),
        And(subset_atom(min_t(bd), b), Or(closed, open_end)),
    )


def valid_pair(vl: str, vr: str) -> Formula:
    """(vl, vr) is the coordinate image of some interval union."""
    dom = substitute(delta_domain(), {"B": Var(vl), "C": Var(vr)})
    return Or(dom, And(Atomic(Var(vl), bot()), Atomic(Var(vr), bot())))


# -- interval formulas to finite-set formulas ----------------------------------------


@dataclass(frozen=True)
class CoordinatePair:
    """The two finite-set variables standing for one interval variable."""

    left: str
    right: str


def _grow_finite(conjuncts: list[Formula], finite: frozenset[str]) -> frozenset[str]:
    """Variables forced to be embedded finite sets by equations that hold
    in the current conjunction."""
    known = set(finite)
    changed = True
    while changed:
        changed = False
        for c in conjuncts:
            if not isinstance(c, Atomic):
                continue
            for a, b in ((c.lhs, c.rhs), (c.rhs, c.lhs)):
                if isinstance(a, Var) and isinstance(b, Var):
                    if a.name in known and b.name not in known:
                        known.add(b.name)
                        changed = True
                if not (isinstance(a, App) and isinstance(b, Var)):
                    continue
                if a.op in ("l", "r", "min", "max", "bot", "cz") and b.name not in known:
                    known.add(b.name)
                    changed = True
                if a.op in ("cup", "cap") and all(isinstance(x, Var) for x in a.args):
                    u, v = (x.name for x in a.args)
                    if a.op == "cup":
                        if u in known and v in known and b.name not in known:
                            known.add(b.name)
                            changed = True
                        if b.name in known and {u, v} - known:
                            known.update((u, v))
                            changed = True
                    elif (u in known or v in known) and b.name not in known:
                        known.add(b.name)
                        changed = True
    return frozenset(known)


def _sub_pair(p: CoordinatePair, q: CoordinatePair) -> Formula:
    return substitute(
        phi_subseteq(),
        {"Xl": Var(p.left), "Xr": Var(p.right), "Yl": Var(q.left), "Yr": Var(q.right)},
    )


def translate_L_to_W(f: Formula) -> Formula:
    """Rewrite an interval formula over endpoint coordinates.

    Every variable X becomes a pair (Xl, Xr) of finite-set variables;
    quantifiers are relativized to coordinate pairs of actual interval
    unions.  Lattice operations between variables not forced finite by
    their context are expressed order-theoretically through
    ``phi_subseteq``, which costs universal quantifiers."""
    return _l2w(f)[0]


def _l2w(f: Formula) -> tuple[Formula, dict[str, CoordinatePair]]:
    if not fits_signature(f, SIG_L):
        foreign = formula_symbols(f) - {s for s, _ in SIG_L.symbols}
        raise FragmentError(f"not an interval formula: uses {sorted(foreign)}")
    g = unnest(f)
    names = FreshNames(all_names(g))
    pairs: dict[str, CoordinatePair] = {}

    def pair_of(v: str) -> CoordinatePair:
        got = pairs.get(v)
        if got is None:
            got = CoordinatePair(names.fresh(v + "l"), names.fresh(v + "r"))
            pairs[v] = got
        return got

    for v in sorted(free_vars(g)):
        pair_of(v)

    def walk(h: Formula, finite: frozenset[str]) -> Formula:
        if isinstance(h, And):
            parts = _and_list(h)
            grown = _grow_finite(parts, finite)
            return and_all([walk(p, grown) for p in parts])
        if isinstance(h, Or):
            return Or(walk(h.lhs, finite), walk(h.rhs, finite))
        if isinstance(h, Not):
            return Not(walk(h.body, finite))
        if isinstance(h, Implies):
            return Implies(walk(h.lhs, finite), walk(h.rhs, finite))
        if isinstance(h, Exists):
            p = pair_of(h.var)
            body = walk(h.body, finite)
            return Exists(p.left, Exists(p.right, And(valid_pair(p.left, p.right), body)))
        if isinstance(h, Forall):
            p = pair_of(h.var)
            body = walk(h.body, finite)
            return Forall(p.left, Forall(p.right, Implies(valid_pair(p.left, p.right), body)))
        return atom(h, finite)

    def atom(h: Atomic, finite: frozenset[str]) -> Formula:
        a, b = h.lhs, h.rhs
        if isinstance(a, Var) and isinstance(b, Var):
            pa, pb = pair_of(a.name), pair_of(b.name)
            return And(
                Atomic(Var(pa.left), Var(pb.left)), Atomic(Var(pa.right), Var(pb.right))
            )
        if isinstance(a, Var):
            a, b = b, a
        if not (isinstance(a, App) and isinstance(b, Var)):
            raise AssertionError("atom not in unnested shape")
        p = pair_of(b.name)
        wl, wr = Var(p.left), Var(p.right)
        op = a.op
        if op == "bot":
            return And(Atomic(wl, bot()), Atomic(wr, bot()))
        if op == "cz":
            return And(Atomic(wl, cz()), Atomic(wr, cz()))
        if op == "l":
            q = pair_of(a.args[0].name)
            return And(Atomic(wl, Var(q.left)), Atomic(wr, Var(q.left)))
        if op == "r":
            q = pair_of(a.args[0].name)
            return And(Atomic(wl, Var(q.right)), Atomic(wr, Var(q.right)))
        if op == "min":
            q = pair_of(a.args[0].name)
            least = min_t(cup(Var(q.left), Var(q.right)))
            return And(Atomic(least, wl), Atomic(least, wr))
        if op == "max":
            q = pair_of(a.args[0].name)
            bd = cup(Var(q.left), Var(q.right))
            bounded = subset_atom(max_t(bd), Var(q.right))
            greatest = max_t(Var(q.right))
            return Or(
                and_all([bounded, Atomic(greatest, wl), Atomic(greatest, wr)]),
                and_all([Not(bounded), Atomic(wl, bot()), Atomic(wr, bot())]),
            )
        if op in ("cup", "cap"):
            u, v = (x.name for x in a.args)
            pu, pv = pair_of(u), pair_of(v)
            if u in finite and v in finite:
                lo = App(op, (Var(pu.left), Var(pv.left)))
                hi = App(op, (Var(pu.right), Var(pv.right)))
                return And(Atomic(lo, wl), Atomic(hi, wr))
            tl, tr = names.fresh("Tl"), names.fresh("Tr")
            tp = CoordinatePair(tl, tr)
            rel = valid_pair(tl, tr)
            if op == "cup":
                above_both = And(_sub_pair(pu, p), _sub_pair(pv, p))
                least_such = Implies(And(_sub_pair(pu, tp), _sub_pair(pv, tp)), _sub_pair(p, tp))
                return And(above_both, Forall(tl, Forall(tr, Implies(rel, least_such))))
            below_both = And(_sub_pair(p, pu), _sub_pair(p, pv))
            greatest_such = Implies(And(_sub_pair(tp, pu), _sub_pair(tp, pv)), _sub_pair(tp, p))
            return And(below_both, Forall(tl, Forall(tr, Implies(rel, greatest_such))))
        raise AssertionError(f"unexpected operation {op}")

    return walk(g, frozenset()), pairs


# -- finite-set formulas to interval formulas ----------------------------------------


def _has_ips(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return t.op == "ips" or any(_has_ips(x) for x in t.args)


def _finite_coords(v: str) -> Formula:
    return Atomic(l_t(Var(v)), r_t(Var(v)))


def _phi_ips_at(s: Term, t: Term, u: Term) -> Formula:
    return substitute(phi_ips(), {"X": s, "Y": t, "Z": u})


def translate_W_to_L(f: Formula) -> Formula:
    """Reinterpret a positive existential finite-set formula over the
    embedded finite sets of the interval structure.

    Shared-signature equations transfer verbatim; each ``ips`` equation
    becomes its interval characterization; every quantifier is
    relativized to the embedded finite sets (equal endpoint maps)."""
    kind = classify(f)
    if kind != "positive_existential":
        raise FragmentError(f"input must be positive existential, got {kind}")
    foreign = formula_symbols(f) - {s for s, _ in SIG_W.symbols}
    if foreign:
        raise FragmentError(f"not a finite-set formula: uses {sorted(foreign)}")
    names = FreshNames(all_names(f))

    def walk(g: Formula) -> Formula:
        if isinstance(g, And):
            return And(walk(g.lhs), walk(g.rhs))
        if isinstance(g, Or):
            return Or(walk(g.lhs), walk(g.rhs))
        if isinstance(g, Exists):
            return Exists(g.var, And(_finite_coords(g.var), walk(g.body)))
        if isinstance(g, Atomic):
            return atom(g)
        raise AssertionError(f"unexpected {type(g).__name__} in a positive formula")

    def atom(g: Atomic) -> Formula:
        for a, b in ((g.lhs, g.rhs), (g.rhs, g.lhs)):
            if (
                isinstance(a, App)
                and a.op == "ips"
                and not _has_ips(b)
                and not any(_has_ips(x) for x in a.args)
            ):
                return _phi_ips_at(a.args[0], a.args[1], b)
        if not _has_ips(g.lhs) and not _has_ips(g.rhs):
            return g
        defs: list[tuple[str, Term, Term]] = []

        def strip(t: Term) -> Term:
            if isinstance(t, Var):
                return t
            args = tuple(strip(x) for x in t.args)
            if t.op == "ips":
                u = names.fresh("U")
                defs.append((u, args[0], args[1]))
                return Var(u)
            return App(t.op, args)

        lhs, rhs = strip(g.lhs), strip(g.rhs)
        parts = [
            And(_finite_coords(u), _phi_ips_at(s, t, Var(u))) for u, s, t in defs
        ]
        body = and_all(parts + [Atomic(lhs, rhs)])
        return exists_all([u for u, _, _ in defs], body)

    return walk(f)


# -- the composed pipeline -----------------------------------------------------------


def pipeline(f: Formula) -> Formula:
    """Turn a supported interval formula into an equivalent existential one.

    Coordinates first, then negation elimination, then back to interval
    terms; the simplifier runs between stages.  Inputs whose coordinate
    form needs a universal quantifier (order-theoretic cup or cap over
    possibly-unbounded sets, or an explicit one) raise FragmentError."""
    w, pairs = _l2w(f)
    w = simplify(w)
    p = simplify(to_positive_existential(w))
    out = simplify(translate_W_to_L(p))
    back: dict[str, Term] = {}
    for v, pr in pairs.items():
        back[pr.left] = l_t(Var(v))
        back[pr.right] = r_t(Var(v))
    out = substitute(out, back)
    if classify(out) not in ("positive_existential", "existential", "quantifier_free"):
        raise AssertionError("pipeline produced a non-existential formula")
    return out
