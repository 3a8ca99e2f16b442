"""Bounded evaluation of formulas in both structures.

Quantifiers cannot range over everything, so they range over a witness
pool: every subset of the pool's points on the finite-set side, every
normalized interval union with endpoints among those points (segment
count and ray permitting) on the interval side.  ``eval_bounded`` is
exact for that relativized semantics.  The solver prunes candidate
witnesses only when a conjunct forces the value outright (a definitional
pin) or bounds it to a small shape (a guard atom); pruning never changes
the answer, it only skips values that could not satisfy the conjuncts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional, Union

from .fci import (
    EMPTY_FCI,
    FciSet,
    build_from_endpoints,
    difference_closed,
    embed_finset,
    embed_point,
    endpoint_condition,
    zero_fci,
)
from .finset import EMPTY_FS, FinSet, zero_set
from .order import ZERO, above, midpoint
from .oracle import enum_fcis, enum_finsets
from .syntax import (
    And,
    App,
    Atomic,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    SIG_L,
    SIG_W,
    SIG_W_DIFF,
    Signature,
    Term,
    Var,
    formula_symbols,
    free_vars,
    substitute,
    term_vars,
)

Value = Union[FinSet, FciSet]
Assignment = dict


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessPool:
    """The points quantified witnesses may be built from.

    ``pair_points``, when set, restricts the endpoint pairs enumerated for
    jointly-quantified coordinate variables to a coarser point set; point
    witnesses still range over all of ``points``.  Useful when assignment
    values live on a small grid but telling sets apart needs points in
    between.
    """

    points: FinSet
    max_segments: int
    allow_ray: bool = True
    pair_points: Optional[FinSet] = None

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("a witness pool needs at least one point")
        if ZERO not in self.points:
            raise ValueError("a witness pool must contain 0")
        if self.max_segments < 0:
            raise ValueError("max_segments must be nonnegative")
        if self.pair_points is not None and not self.pair_points.issubset(self.points):
            raise ValueError("pair_points must be a subset of points")


def default_pool(a: Assignment) -> WitnessPool:
    """Zero, every boundary point of the assigned values, midpoints of
    consecutive collected points, and one point above the largest."""
    pts = {ZERO}
    for v in a.values():
        if isinstance(v, FinSet):
            pts.update(v.elements)
        elif isinstance(v, FciSet):
            pts.update(v.boundary().elements)
        else:
            raise TypeError(f"assignment values must be FinSet or FciSet, got {type(v).__name__}")
    ordered = sorted(pts)
    widened = set(ordered)
    widened.update(midpoint(x, y) for x, y in zip(ordered, ordered[1:]))
    widened.add(above(ordered[-1]))
    points = FinSet(tuple(sorted(widened)))
    return WitnessPool(points=points, max_segments=len(points), allow_ray=True)


def _is_w(sig: Signature) -> bool:
    return sig.name != "l"


def _infer_sig(f: Formula, a: Assignment) -> Signature:
    for v in a.values():
        if isinstance(v, FinSet):
            return SIG_W
        if isinstance(v, FciSet):
            return SIG_L
    syms = formula_symbols(f)
    if "diff" in syms:
        return SIG_W_DIFF
    if "ips" in syms:
        return SIG_W
    if syms & {"l", "r"}:
        return SIG_L
    raise EvalError("cannot infer the signature from the assignment or symbols; pass sig")


def _empty(sig: Signature) -> Value:
    return EMPTY_FS if _is_w(sig) else EMPTY_FCI


# -- term and quantifier-free evaluation -------------------------------------------


def eval_term(t: Term, a: Assignment, sig: Signature) -> Value:
    w = _is_w(sig)
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise EvalError(f"unbound variable {t.name}") from None
    op = t.op
    args = [eval_term(x, a, sig) for x in t.args]
    if op == "bot":
        return EMPTY_FS if w else EMPTY_FCI
    if op == "cz":
        return zero_set() if w else zero_fci()
    if op == "cup":
        return args[0].union(args[1])
    if op == "cap":
        return args[0].intersect(args[1])
    if op == "min":
        return args[0].min_set()
    if op == "max":
        return args[0].max_set()
    if op == "ips":
        if not w:
            raise EvalError("ips is not an operation of the interval structure")
        return args[0].ips(args[1])
    if op == "diff":
        if not w:
            raise EvalError("diff is not an operation of the interval structure")
        return args[0].difference(args[1])
    if op == "l":
        if w:
            raise EvalError("l is not an operation of the finite-set structure")
        return embed_finset(args[0].left_endpoints())
    if op == "r":
        if w:
            raise EvalError("r is not an operation of the finite-set structure")
        return embed_finset(args[0].right_endpoints())
    raise EvalError(f"unknown operation {op}")


def eval_qf(f: Formula, a: Assignment, sig: Signature) -> bool:
    if isinstance(f, Atomic):
        return eval_term(f.lhs, a, sig) == eval_term(f.rhs, a, sig)
    if isinstance(f, Not):
        return not eval_qf(f.body, a, sig)
    if isinstance(f, And):
        return eval_qf(f.lhs, a, sig) and eval_qf(f.rhs, a, sig)
    if isinstance(f, Or):
        return eval_qf(f.lhs, a, sig) or eval_qf(f.rhs, a, sig)
    if isinstance(f, Implies):
        return not eval_qf(f.lhs, a, sig) or eval_qf(f.rhs, a, sig)
    raise EvalError(f"quantifier on {f.var} in a quantifier-free evaluation")


# -- witness universes --------------------------------------------------------------


@lru_cache(maxsize=None)
def _universe_w(pool: WitnessPool) -> tuple[FinSet, ...]:
    return tuple(enum_finsets(pool.points))


@lru_cache(maxsize=None)
def _universe_l(pool: WitnessPool) -> tuple[FciSet, ...]:
    return tuple(enum_fcis(pool.points, pool.max_segments, pool.allow_ray))


def universe(pool: WitnessPool, sig: Signature) -> tuple[Value, ...]:
    """Every value a quantified variable ranges over."""
    return _universe_w(pool) if _is_w(sig) else _universe_l(pool)


@lru_cache(maxsize=None)
def _valid_endpoint_pairs(pool: WitnessPool) -> tuple[tuple[FinSet, FinSet], ...]:
    # one pair per interval union over the pool's points; covers (bot, bot)
    points = pool.points if pool.pair_points is None else pool.pair_points
    return tuple(
        (u.left_endpoints(), u.right_endpoints())
        for u in enum_fcis(points, len(points), True)
    )


def _in_universe(val: Value, pool: WitnessPool) -> bool:
    if isinstance(val, FinSet):
        return val.issubset(pool.points)
    return (
        val.boundary().issubset(pool.points)
        and len(val.segments) <= pool.max_segments
        and (val.ray_lo is None or pool.allow_ray)
    )


# -- the solver ---------------------------------------------------------------------


class EvalCache:
    """Shared memo for bounded evaluation.

    Keys include object identity, so the cache keeps every formula it has
    seen alive; identities then cannot be reused while it exists.
    """

    def __init__(self) -> None:
        self._fv: dict[int, frozenset[str]] = {}
        self._fvt: dict[int, tuple[str, ...]] = {}
        self._tv: dict[int, frozenset[str]] = {}
        self._vals: dict = {}
        self._pair: dict[int, Optional[tuple[str, str]]] = {}
        self._norm: dict = {}
        self._item: dict[int, tuple] = {}
        self._keep: list = []

    def fv(self, f: Formula) -> frozenset[str]:
        got = self._fv.get(id(f))
        if got is None:
            got = frozenset(free_vars(f))
            self._fv[id(f)] = got
            self._keep.append(f)
        return got

    def fvt(self, f: Formula) -> tuple[str, ...]:
        got = self._fvt.get(id(f))
        if got is None:
            got = tuple(sorted(self.fv(f)))
            self._fvt[id(f)] = got
        return got

    def tv(self, t: Term) -> frozenset[str]:
        got = self._tv.get(id(t))
        if got is None:
            got = frozenset(term_vars(t))
            self._tv[id(t)] = got
            self._keep.append(t)
        return got

    def pair_template(self, f: Formula) -> Optional[tuple[str, str]]:
        if id(f) not in self._pair:
            self._pair[id(f)] = _match_valid_pair(f)
            self._keep.append(f)
        return self._pair[id(f)]

    def item(self, f: Formula) -> tuple:
        """A conjunct bundled with its free variables and, for equations,
        the precomputed pin/guard patterns its two sides offer."""
        got = self._item.get(id(f))
        if got is None:
            shape = _atom_shape(f, self.tv) if isinstance(f, Atomic) else None
            got = (f, self.fv(f), shape)
            self._item[id(f)] = got
            self._keep.append(f)
        return got

    def normalized(
        self, f: Formula, taken: frozenset[str], negate: bool = False
    ) -> tuple[tuple[str, ...], tuple[tuple, ...]]:
        """Solver normal form of one conjunct, memoized: the result depends
        on the names in scope but never on their values."""
        key = (id(f), negate, taken)
        hit = self._norm.get(key)
        if hit is None:
            hoisted: list[str] = []
            conjuncts = _normalize(hoisted, [Not(f) if negate else f], set(taken))
            hit = (tuple(hoisted), tuple(self.item(c) for c in conjuncts))
            self._norm[key] = hit
            self._keep.append(f)
            self._keep.append(hit)
        return hit


def eval_bounded(
    f: Formula,
    a: Assignment,
    pool: WitnessPool,
    sig: Optional[Signature] = None,
    cache: Optional[EvalCache] = None,
) -> bool:
    if sig is None:
        sig = _infer_sig(f, a)
    if cache is None:
        cache = EvalCache()
    missing = free_vars(f) - a.keys()
    if missing:
        raise EvalError(f"assignment is missing {sorted(missing)}")
    want = FinSet if _is_w(sig) else FciSet
    for name, val in a.items():
        if not isinstance(val, want):
            raise EvalError(f"{name} is bound to {type(val).__name__}, expected {want.__name__}")
    return _eval(f, dict(a), pool, sig, cache)


def _eval(f: Formula, env: dict, pool: WitnessPool, sig: Signature, cache: EvalCache) -> bool:
    scope = tuple((n, env[n]) for n in cache.fvt(f))
    key = (id(f), scope, pool)
    hit = cache._vals.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Atomic):
        out = eval_term(f.lhs, env, sig) == eval_term(f.rhs, env, sig)
    elif isinstance(f, Not):
        out = not _eval(f.body, env, pool, sig, cache)
    elif isinstance(f, And):
        out = _eval(f.lhs, env, pool, sig, cache) and _eval(f.rhs, env, pool, sig, cache)
    elif isinstance(f, Or):
        out = _eval(f.lhs, env, pool, sig, cache) or _eval(f.rhs, env, pool, sig, cache)
    elif isinstance(f, Implies):
        out = not _eval(f.lhs, env, pool, sig, cache) or _eval(f.rhs, env, pool, sig, cache)
    elif isinstance(f, (Exists, Forall)):
        negate = isinstance(f, Forall)
        vars, items = cache.normalized(f, frozenset(env), negate)
        found = _branch(list(vars), list(items), env, pool, sig, cache)
        out = not found if negate else found
    else:
        raise EvalError(f"cannot evaluate {type(f).__name__}")
    cache._vals[key] = out
    return out


def _flatten_or(f: Formula) -> list[Formula]:
    if isinstance(f, Or):
        return _flatten_or(f.lhs) + _flatten_or(f.rhs)
    return [f]


def _normalize(vars: list[str], conjuncts: list[Formula], taken: set[str]) -> list[Formula]:
    """Flatten conjunctions, hoist existentials into the block, push
    negations toward leaves.  Mutates ``vars`` as binders are hoisted."""
    out: list[Formula] = []
    queue = deque(conjuncts)
    while queue:
        c = queue.popleft()
        if isinstance(c, And):
            queue.appendleft(c.rhs)
            queue.appendleft(c.lhs)
        elif isinstance(c, Implies):
            queue.appendleft(Or(Not(c.lhs), c.rhs))
        elif isinstance(c, Exists):
            name, body = c.var, c.body
            if name in taken or name in vars:
                base, n = name, 0
                while name in taken or name in vars or name in free_vars(body):
                    n += 1
                    name = f"{base}{n}"
                body = substitute(body, {base: Var(name)})
            vars.append(name)
            queue.appendleft(body)
        elif isinstance(c, Not):
            b = c.body
            if isinstance(b, Not):
                queue.appendleft(b.body)
            elif isinstance(b, And):
                queue.appendleft(Or(Not(b.lhs), Not(b.rhs)))
            elif isinstance(b, Or):
                queue.appendleft(Not(b.rhs))
                queue.appendleft(Not(b.lhs))
            elif isinstance(b, Implies):
                queue.appendleft(Not(b.rhs))
                queue.appendleft(b.lhs)
            elif isinstance(b, Forall):
                queue.appendleft(Exists(b.var, Not(b.body)))
            else:
                out.append(c)
        else:
            out.append(c)
    return out


def _branch(vars: list[str], items: list[tuple], env: dict, pool: WitnessPool, sig: Signature, cache: EvalCache) -> bool:
    """Is there an assignment of pool values to ``vars`` satisfying all
    conjuncts?  Expects ``cache.item`` bundles in solver normal form."""
    for i, it in enumerate(items):
        c = it[0]
        if isinstance(c, Or):
            if _is_w(sig):
                match = cache.pair_template(c)
                if match is not None and set(match) <= set(vars):
                    # an endpoint-pair relativizer: leave it whole so the
                    # two variables can be enumerated jointly
                    continue
            rest = items[:i] + items[i + 1 :]
            taken = frozenset(env) | frozenset(vars)
            for p in _flatten_or(c):
                hoisted, extra = cache.normalized(p, taken)
                if _branch(vars + list(hoisted), rest + list(extra), env, pool, sig, cache):
                    return True
            return False
    return _assign(vars, items, env, pool, sig, cache)


def _assign(vars: list[str], items: list[tuple], env: dict, pool: WitnessPool, sig: Signature, cache: EvalCache) -> bool:
    keys = env.keys()
    ready, pending = [], []
    for it in items:
        (ready if it[1] <= keys else pending).append(it)
    for it in ready:
        if not _eval(it[0], env, pool, sig, cache):
            return False
    if not pending:
        return True
    if not vars:
        loose = set().union(*(it[1] for it in pending)) - keys
        raise EvalError(f"unbound variables {sorted(loose)}")

    used = frozenset().union(*(it[1] for it in pending))
    for v in vars:
        if v not in used:
            rest = [u for u in vars if u != v]
            return _assign(rest, pending, {**env, v: _empty(sig)}, pool, sig, cache)

    vars_set = set(vars)
    pin = _find_pin(pending, vars_set, env, pool, sig, cache)
    if pin is not None:
        v, candidates = pin
        rest = [u for u in vars if u != v]
        return any(_assign(rest, pending, {**env, v: val}, pool, sig, cache) for val in candidates)

    if _is_w(sig):
        for it in pending:
            match = cache.pair_template(it[0])
            if match is not None and set(match) <= vars_set:
                v1, v2 = match
                rest = [u for u in vars if u not in (v1, v2)]
                return any(
                    _assign(rest, pending, {**env, v1: b, v2: r}, pool, sig, cache)
                    for b, r in _valid_endpoint_pairs(pool)
                )

    best_v: Optional[str] = None
    best: Optional[list] = None
    for v in vars:
        got = _guard_candidates(v, pending, env, pool, sig, cache)
        if got is not None and (best is None or len(got) < len(best)):
            best_v, best = v, got
    if best is None:
        occurrences = {v: sum(1 for it in pending if v in it[1]) for v in vars}
        best_v = max(vars, key=lambda v: occurrences[v])
        best = list(universe(pool, sig))
    rest = [u for u in vars if u != best_v]
    return any(_assign(rest, pending, {**env, best_v: val}, pool, sig, cache) for val in best)


# -- pins: conjuncts that force a variable's value -----------------------------------


def _sides(atom: Atomic) -> tuple[tuple[Term, Term], tuple[Term, Term]]:
    return (atom.lhs, atom.rhs), (atom.rhs, atom.lhs)


class _Shape(NamedTuple):
    """The side patterns one equation offers, read off the syntax once.

    Each entry carries the variables of the terms whose values the
    pattern needs, so groundness is a set comparison at use time.
    """

    eq: tuple  # (name, other, vars):           V = other
    lr: tuple  # (op, name, other, vars):       l(V) = other / r(V) = other
    diff: tuple  # (name, t1, t2, vars):        diff(t1, t2) = V
    plus: tuple  # (t1, t2, name, vars):        cup(cap(t1, t2), V) = t1
    disj: tuple  # (t, name, vars):             cap(t, V) = bot
    minself: tuple  # (name,):                  min(V) = V
    lreq: tuple  # (name,):                     l(V) = r(V)
    capself: tuple  # (name, other, vars):      cap(V, other) = V


def _atom_shape(atom: Atomic, tv) -> _Shape:
    eq, lr, diff, plus, disj = [], [], [], [], []
    minself, lreq, capself = [], [], []
    for a, b in _sides(atom):
        if isinstance(a, Var) and a != b:
            eq.append((a.name, b, tv(b)))
        if not isinstance(a, App):
            continue
        if a.op in ("l", "r") and isinstance(a.args[0], Var):
            lr.append((a.op, a.args[0].name, b, tv(b)))
            if (
                a.op == "l"
                and isinstance(b, App)
                and b.op == "r"
                and a.args == b.args
            ):
                lreq.append(a.args[0].name)
        if a.op == "diff" and isinstance(b, Var):
            diff.append((b.name, a.args[0], a.args[1], tv(a.args[0]) | tv(a.args[1])))
        if (
            a.op == "cup"
            and isinstance(a.args[0], App)
            and a.args[0].op == "cap"
            and isinstance(a.args[1], Var)
        ):
            x, y = a.args[0].args
            if b == x:
                plus.append((x, y, a.args[1].name, tv(y)))
            elif b == y:
                plus.append((y, x, a.args[1].name, tv(x)))
        if a.op == "cap":
            x, y = a.args
            if isinstance(b, App) and b.op == "bot":
                if isinstance(y, Var):
                    disj.append((x, y.name, tv(x)))
                if isinstance(x, Var):
                    disj.append((y, x.name, tv(y)))
            if isinstance(b, Var):
                other = y if x == b else x if y == b else None
                if other is not None:
                    capself.append((b.name, other, tv(other)))
        if a.op == "min" and isinstance(b, Var) and a.args == (b,):
            minself.append(b.name)
    return _Shape(
        tuple(eq), tuple(lr), tuple(diff), tuple(plus), tuple(disj),
        tuple(minself), tuple(lreq), tuple(capself),
    )


def _find_pin(pending: list[tuple], vars_set: set[str], env: dict, pool: WitnessPool, sig: Signature, cache: EvalCache):
    keys = env.keys()

    # a bare equation with one side a block variable and the other evaluable
    for _, _, sh in pending:
        if sh is None:
            continue
        for name, other, need in sh.eq:
            if name in vars_set and need <= keys:
                val = eval_term(other, env, sig)
                return name, ([val] if _in_universe(val, pool) else [])

    # both endpoint maps of one variable pinned: the endpoint lemma gives
    # the unique interval union, or rules one out
    if not _is_w(sig):
        l_of: dict[str, Term] = {}
        r_of: dict[str, Term] = {}
        for _, _, sh in pending:
            if sh is None:
                continue
            for op, name, other, need in sh.lr:
                if name in vars_set and need <= keys:
                    (l_of if op == "l" else r_of)[name] = other
        for v in l_of:
            if v in r_of:
                lv = eval_term(l_of[v], env, sig)
                rv = eval_term(r_of[v], env, sig)
                candidates: list = []
                if not lv and not rv:
                    candidates = [EMPTY_FCI]
                elif lv.is_finite_set() and rv.is_finite_set():
                    bf, cf = lv.as_finset(), rv.as_finset()
                    if endpoint_condition(bf, cf):
                        candidates = [build_from_endpoints(bf, cf)]
                return v, [d for d in candidates if _in_universe(d, pool)]

    # difference pinned directly or through its defining pair of equations
    diff_pins = _diff_pins(pending, vars_set, keys)
    for v, (t1, t2) in diff_pins.items():
        x = eval_term(t1, env, sig)
        y = eval_term(t2, env, sig)
        if isinstance(x, FinSet):
            val = x.difference(y)
        else:
            val = difference_closed(x, y)
            if val is None:
                return v, []
        return v, ([val] if _in_universe(val, pool) else [])
    return None


def _diff_pins(pending: list[tuple], vars_set: set[str], keys) -> dict[str, tuple[Term, Term]]:
    out: dict[str, tuple[Term, Term]] = {}
    plus: list[tuple[Term, Term, str]] = []
    disjoint: list[tuple[Term, str]] = []
    for _, _, sh in pending:
        if sh is None:
            continue
        for name, t1, t2, need in sh.diff:
            if name in vars_set and need <= keys:
                out[name] = (t1, t2)
        for t1, t2, name, need in sh.plus:
            if name in vars_set and need <= keys:
                plus.append((t1, t2, name))
        for t, name, need in sh.disj:
            if name in vars_set and need <= keys:
                disjoint.append((t, name))
    for t1, t2, v in plus:
        if any(v == v2 and t2 == u for u, v2 in disjoint):
            out.setdefault(v, (t1, t2))
    return out


# -- guards: conjuncts that bound a variable's shape ---------------------------------


def _guard_candidates(v: str, pending: list[tuple], env: dict, pool: WitnessPool, sig: Signature, cache: EvalCache) -> Optional[list]:
    w = _is_w(sig)
    keys = env.keys()
    best: Optional[list] = None

    def consider(candidates: list) -> None:
        nonlocal best
        if best is None or len(candidates) < len(best):
            best = candidates

    for _, _, sh in pending:
        if sh is None:
            continue
        # min(V) = V keeps V empty or a single point
        for name in sh.minself:
            if name == v:
                single = [FinSet((p,)) for p in pool.points] if w else [embed_point(p) for p in pool.points]
                consider([_empty(sig)] + single)
        # l(V) = r(V) keeps V an embedded finite set
        if not w:
            for name in sh.lreq:
                if name == v:
                    consider(
                        [
                            embed_finset(s)
                            for s in enum_finsets(pool.points)
                            if len(s) <= pool.max_segments
                        ]
                    )
        # cap(V, t) = V keeps V below t
        for name, other, need in sh.capself:
            if name == v and need <= keys:
                bound = eval_term(other, env, sig)
                if w:
                    consider(list(enum_finsets(bound.intersect(pool.points))))
                elif bound.is_finite_set():
                    base = bound.as_finset().intersect(pool.points)
                    consider(
                        [
                            embed_finset(s)
                            for s in enum_finsets(base)
                            if len(s) <= pool.max_segments
                        ]
                    )
                else:
                    consider([u for u in _universe_l(pool) if u.issubset(bound)])
    return best


def _match_valid_pair(c: Formula) -> Optional[tuple[str, str]]:
    """Recognize the relativizer marking two variables as the endpoint
    pair of one interval union, so they can be enumerated jointly."""
    if not isinstance(c, Or) or not isinstance(c.rhs, And):
        return None

    def bot_var(at: Formula) -> Optional[str]:
        if isinstance(at, Atomic):
            for x, y in _sides(at):
                if isinstance(x, Var) and isinstance(y, App) and y.op == "bot":
                    return x.name
        return None

    v1, v2 = bot_var(c.rhs.lhs), bot_var(c.rhs.rhs)
    if not v1 or not v2 or v1 == v2:
        return None
    from .transforms import valid_pair

    return (v1, v2) if c == valid_pair(v1, v2) else None
