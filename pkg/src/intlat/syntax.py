"""First-order formulas over the two set signatures.

Terms are variables and prefix applications; atomic formulas are equations
between terms, with ``t sub u`` accepted as input sugar for the equation
``cap(t, u) = t``.  Connectives are ``!``, ``&``, ``|``, ``->`` in rising
binding order (``!`` strongest) and quantifiers ``E X.`` / ``A X.`` whose
scope extends as far right as possible.

The two signatures share the lattice symbols; ``ips`` belongs only to the
finite-set signature and the endpoint maps ``l``/``r`` only to the
interval signature.  ``parse`` checks every symbol and arity against the
requested signature and renames bound variables apart, so a parsed formula
never shadows a name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union


class ParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


# -- terms ---------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, App]


def cup(a: Term, b: Term) -> App:
    return App("cup", (a, b))


def cap(a: Term, b: Term) -> App:
    return App("cap", (a, b))


def bot() -> App:
    return App("bot")


def cz() -> App:
    return App("cz")


def min_t(a: Term) -> App:
    return App("min", (a,))


def max_t(a: Term) -> App:
    return App("max", (a,))


def ips_t(a: Term, b: Term) -> App:
    return App("ips", (a, b))


def l_t(a: Term) -> App:
    return App("l", (a,))


def r_t(a: Term) -> App:
    return App("r", (a,))


def diff_t(a: Term, b: Term) -> App:
    """Relative complement as an internal term; not part of either parse signature."""
    return App("diff", (a, b))


# -- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class Atomic:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Atomic, Not, And, Or, Implies, Exists, Forall]


def subset_atom(s: Term, t: Term) -> Atomic:
    """The containment ``s sub t`` as its defining equation ``cap(s, t) = s``."""
    return Atomic(cap(s, t), s)


def and_all(parts: list) -> Formula:
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def or_all(parts: list) -> Formula:
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def exists_all(names: list[str], body: Formula) -> Formula:
    for name in reversed(names):
        body = Exists(name, body)
    return body


# -- signatures ----------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    name: str
    symbols: tuple[tuple[str, int], ...]

    def arity(self, op: str) -> Optional[int]:
        for sym, ar in self.symbols:
            if sym == op:
                return ar
        return None


_SHARED = (("cup", 2), ("cap", 2), ("bot", 0), ("cz", 0), ("min", 1), ("max", 1))

SIG_W = Signature("w", _SHARED + (("ips", 2),))
SIG_L = Signature("l", _SHARED + (("l", 1), ("r", 1)))

# internal extension used while eliminating relative complements
SIG_W_DIFF = Signature("w+diff", SIG_W.symbols + (("diff", 2),))


def term_symbols(t: Term) -> set[str]:
    if isinstance(t, Var):
        return set()
    out = {t.op}
    for a in t.args:
        out |= term_symbols(a)
    return out


def formula_symbols(f: Formula) -> set[str]:
    if isinstance(f, Atomic):
        return term_symbols(f.lhs) | term_symbols(f.rhs)
    if isinstance(f, Not):
        return formula_symbols(f.body)
    if isinstance(f, (And, Or, Implies)):
        return formula_symbols(f.lhs) | formula_symbols(f.rhs)
    return formula_symbols(f.body)


def fits_signature(f: Formula, sig: Signature) -> bool:
    return all(sig.arity(op) is not None for op in formula_symbols(f))


# -- variables and substitution --------------------------------------------------


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Atomic):
        return term_vars(f.lhs) | term_vars(f.rhs)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.lhs) | free_vars(f.rhs)
    return free_vars(f.body) - {f.var}


def all_names(f: Formula) -> set[str]:
    """Every variable name occurring anywhere, bound or free."""
    if isinstance(f, Atomic):
        return term_vars(f.lhs) | term_vars(f.rhs)
    if isinstance(f, Not):
        return all_names(f.body)
    if isinstance(f, (And, Or, Implies)):
        return all_names(f.lhs) | all_names(f.rhs)
    return all_names(f.body) | {f.var}


class FreshNames:
    """Deterministic fresh-name supply: the base name, then base1, base2, ..."""

    def __init__(self, taken: set[str]) -> None:
        self._taken = set(taken)
        self._counters: dict[str, int] = {}

    def fresh(self, base: str) -> str:
        if base not in self._taken:
            self._taken.add(base)
            return base
        n = self._counters.get(base, 0)
        while True:
            n += 1
            candidate = f"{base}{n}"
            if candidate not in self._taken:
                self._counters[base] = n
                self._taken.add(candidate)
                return candidate


def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return App(t.op, tuple(substitute_term(a, mapping) for a in t.args))


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if isinstance(f, Atomic):
        return Atomic(substitute_term(f.lhs, mapping), substitute_term(f.rhs, mapping))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(substitute(f.lhs, mapping), substitute(f.rhs, mapping))
    live = {k: v for k, v in mapping.items() if k != f.var}
    if not live:
        return f
    clash = any(f.var in term_vars(v) for v in live.values())
    var = f.var
    body = f.body
    if clash:
        names = FreshNames(all_names(f) | {n for v in live.values() for n in term_vars(v)} | set(live))
        var = names.fresh(f.var)
        body = substitute(body, {f.var: Var(var)})
    return type(f)(var, substitute(body, live))


def rename_bound_apart(f: Formula, taken: set[str] | None = None) -> Formula:
    """Rename bound variables so no name is bound twice or shadows a free name."""
    names = FreshNames((taken or set()) | all_names(f))
    used_binders: set[str] = set(free_vars(f)) | (taken or set())

    def walk(g: Formula, ren: dict[str, str]) -> Formula:
        if isinstance(g, Atomic):
            mapping = {k: Var(v) for k, v in ren.items()}
            return Atomic(substitute_term(g.lhs, mapping), substitute_term(g.rhs, mapping))
        if isinstance(g, Not):
            return Not(walk(g.body, ren))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(walk(g.lhs, ren), walk(g.rhs, ren))
        var = g.var
        if var in used_binders:
            var = names.fresh(g.var)
        used_binders.add(var)
        inner = dict(ren)
        inner[g.var] = var
        return type(g)(var, walk(g.body, inner))

    return walk(f, {})


# -- tokenizer and parser ---------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<punct>[().,=!&|]))"
)


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            at = len(text) - len(stripped)
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if m.group("ident"):
            tokens.append(_Token("ident", m.group("ident"), m.start("ident")))
        elif m.group("arrow"):
            tokens.append(_Token("arrow", "->", m.start("arrow")))
        else:
            tokens.append(_Token("punct", m.group("punct"), m.start("punct")))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature) -> None:
        self.tokens = _tokenize(text)
        self.sig = sig
        self.i = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def formula(self) -> Formula:
        return self.implies()

    def implies(self) -> Formula:
        lhs = self.disjunction()
        if self.peek().kind == "arrow":
            self.take()
            return Implies(lhs, self.implies())
        return lhs

    def disjunction(self) -> Formula:
        lhs = self.conjunction()
        while self.peek().text == "|":
            self.take()
            lhs = Or(lhs, self.conjunction())
        return lhs

    def conjunction(self) -> Formula:
        lhs = self.unary()
        while self.peek().text == "&":
            self.take()
            lhs = And(lhs, self.unary())
        return lhs

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "!":
            self.take()
            return Not(self.unary())
        if (
            tok.kind == "ident"
            and tok.text in ("E", "A")
            and self.peek(1).kind == "ident"
            and self.peek(2).text == "."
        ):
            self.take()
            var_tok = self.take()
            if not var_tok.text[0].isupper():
                raise ParseError(f"quantified variable must be capitalized, got {var_tok.text!r}", var_tok.pos)
            self.expect(".")
            body = self.formula()
            return Exists(var_tok.text, body) if tok.text == "E" else Forall(var_tok.text, body)
        if tok.text == "(":
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom()

    def atom(self) -> Formula:
        lhs = self.term()
        tok = self.take()
        if tok.text == "=":
            return Atomic(lhs, self.term())
        if tok.kind == "ident" and tok.text == "sub":
            return subset_atom(lhs, self.term())
        raise ParseError(f"expected '=' or 'sub' after a term, found {tok.text or 'end of input'!r}", tok.pos)

    def term(self) -> Term:
        tok = self.take()
        if tok.kind != "ident":
            raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}", tok.pos)
        name = tok.text
        arity = self.sig.arity(name)
        if name[0].isupper() and arity is None:
            return Var(name)
        if arity is None:
            raise ParseError(f"unknown symbol {name!r} in signature {self.sig.name}", tok.pos)
        if arity == 0:
            return App(name)
        self.expect("(")
        args = [self.term()]
        while self.peek().text == ",":
            self.take()
            args.append(self.term())
        self.expect(")")
        if len(args) != arity:
            raise ParseError(f"{name} takes {arity} argument(s), got {len(args)}", tok.pos)
        return App(name, tuple(args))


def parse(text: str, sig: Signature) -> Formula:
    """Parse a formula over the given signature; bound variables are renamed apart."""
    parser = _Parser(text, sig)
    f = parser.formula()
    end = parser.take()
    if end.kind != "end":
        raise ParseError(f"trailing input starting at {end.text!r}", end.pos)
    return rename_bound_apart(f)


# -- printer -------------------------------------------------------------------


def format_term(t: Term) -> str:
    return str(t)


def format_formula(f: Formula) -> str:
    """Render with minimal parentheses; ``parse(format_formula(f), sig) == f``."""

    def binary(g: Formula) -> tuple[str, int]:
        # precedence: -> 1, | 2, & 3, ! and atoms 4; quantifiers parenthesized as operands
        if isinstance(g, Atomic):
            if isinstance(g.lhs, App) and g.lhs.op == "cap" and g.lhs.args[0] == g.rhs:
                return f"{g.rhs} sub {g.lhs.args[1]}", 4
            return f"{g.lhs} = {g.rhs}", 4
        if isinstance(g, Not):
            body, prec = binary(g.body)
            if prec < 4:
                body = f"({body})"
            return f"!{body}", 4
        if isinstance(g, And):
            lhs, lp = binary(g.lhs)
            rhs, rp = binary(g.rhs)
            if lp < 3:
                lhs = f"({lhs})"
            if rp <= 3 and not isinstance(g.rhs, (Atomic, Not)):
                rhs = f"({rhs})"
            return f"{lhs} & {rhs}", 3
        if isinstance(g, Or):
            lhs, lp = binary(g.lhs)
            rhs, rp = binary(g.rhs)
            if lp < 2:
                lhs = f"({lhs})"
            if rp <= 2 and not isinstance(g.rhs, (Atomic, Not, And)):
                rhs = f"({rhs})"
            return f"{lhs} | {rhs}", 2
        if isinstance(g, Implies):
            lhs, lp = binary(g.lhs)
            rhs, rp = binary(g.rhs)
            if lp <= 1:
                lhs = f"({lhs})"
            if isinstance(g.rhs, (Exists, Forall)):
                rhs = f"({rhs})"
            return f"{lhs} -> {rhs}", 1
        letter = "E" if isinstance(g, Exists) else "A"
        body, _ = binary(g.body)
        return f"{letter} {g.var}. {body}", 0

    text, _ = binary(f)
    return text


# -- normal forms ----------------------------------------------------------------


def nnf(f: Formula) -> Formula:
    """Negation normal form: no implications, negation only on atoms."""

    def pos(g: Formula) -> Formula:
        if isinstance(g, Atomic):
            return g
        if isinstance(g, Not):
            return neg(g.body)
        if isinstance(g, And):
            return And(pos(g.lhs), pos(g.rhs))
        if isinstance(g, Or):
            return Or(pos(g.lhs), pos(g.rhs))
        if isinstance(g, Implies):
            return Or(neg(g.lhs), pos(g.rhs))
        return type(g)(g.var, pos(g.body))

    def neg(g: Formula) -> Formula:
        if isinstance(g, Atomic):
            return Not(g)
        if isinstance(g, Not):
            return pos(g.body)
        if isinstance(g, And):
            return Or(neg(g.lhs), neg(g.rhs))
        if isinstance(g, Or):
            return And(neg(g.lhs), neg(g.rhs))
        if isinstance(g, Implies):
            return And(pos(g.lhs), neg(g.rhs))
        if isinstance(g, Exists):
            return Forall(g.var, neg(g.body))
        return Exists(g.var, neg(g.body))

    return pos(f)


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, Atomic):
        return True
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, (And, Or, Implies)):
        return is_quantifier_free(f.lhs) and is_quantifier_free(f.rhs)
    return False


def _contains(f: Formula, kinds: tuple[type, ...]) -> bool:
    if isinstance(f, kinds):
        return True
    if isinstance(f, Atomic):
        return False
    if isinstance(f, Not):
        return _contains(f.body, kinds)
    if isinstance(f, (And, Or, Implies)):
        return _contains(f.lhs, kinds) or _contains(f.rhs, kinds)
    return _contains(f.body, kinds)


def classify(f: Formula) -> str:
    """Syntactic class after negation normal form.

    ``positive_existential`` (no negation, no universal), then
    ``quantifier_free``, then ``existential`` (negation only on atoms),
    else ``other``.
    """
    g = nnf(f)
    if not _contains(g, (Not, Forall)):
        return "positive_existential"
    if is_quantifier_free(g):
        return "quantifier_free"
    if not _contains(g, (Forall,)):
        return "existential"
    return "other"


def is_unnested_atom(a: Atomic) -> bool:
    """Shapes v = w, c = v, or g(vars) = w."""
    lhs, rhs = a.lhs, a.rhs
    if isinstance(lhs, Var) and isinstance(rhs, Var):
        return True
    if not isinstance(rhs, Var):
        return False
    if isinstance(lhs, App):
        return all(isinstance(arg, Var) for arg in lhs.args)
    return False


def unnest(f: Formula) -> Formula:
    """Flatten every atom to v = w, c = v, or g(vars) = w.

    Nested arguments get definitional existentials placed at the atom, and
    for a directly negated atom the definitions go outside the negation, so
    a formula without negations stays without negations.
    """
    names = FreshNames(all_names(f))

    def flatten(t: Term, defs: list[Atomic]) -> Var:
        if isinstance(t, Var):
            return t
        args = tuple(flatten(a, defs) for a in t.args)
        v = Var(names.fresh("U"))
        defs.append(Atomic(App(t.op, args), v))
        return v

    def rebuild(a: Atomic, negate: bool) -> Formula:
        defs: list[Atomic] = []
        lhs, rhs = a.lhs, a.rhs
        if isinstance(lhs, Var) and isinstance(rhs, App):
            lhs, rhs = rhs, lhs
        if isinstance(lhs, App) and isinstance(rhs, Var) and all(isinstance(x, Var) for x in lhs.args):
            core: Atomic = Atomic(lhs, rhs)
        elif isinstance(lhs, Var) and isinstance(rhs, Var):
            core = Atomic(lhs, rhs)
        else:
            # flatten arguments of the head application, then the other side
            if isinstance(lhs, App):
                head = App(lhs.op, tuple(flatten(x, defs) for x in lhs.args))
            else:
                head = None  # unreachable: lhs is Var only when rhs is Var
            rv = flatten(rhs, defs) if isinstance(rhs, App) else rhs
            assert head is not None and isinstance(rv, Var)
            core = Atomic(head, rv)
        wrapped: Formula = Not(core) if negate else core
        if defs:
            wrapped = and_all(list(defs) + [wrapped])
        bound = [d.rhs.name for d in defs if isinstance(d.rhs, Var)]
        return exists_all(bound, wrapped)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Atomic):
            return rebuild(g, negate=False)
        if isinstance(g, Not) and isinstance(g.body, Atomic):
            return rebuild(g.body, negate=True)
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(walk(g.lhs), walk(g.rhs))
        return type(g)(g.var, walk(g.body))

    return walk(f)


def is_unnested(f: Formula) -> bool:
    if isinstance(f, Atomic):
        return is_unnested_atom(f)
    if isinstance(f, Not):
        return is_unnested(f.body)
    if isinstance(f, (And, Or, Implies)):
        return is_unnested(f.lhs) and is_unnested(f.rhs)
    return is_unnested(f.body)
