"""First-order syntax with equality, substitutions and unification.

Terms and atoms are named tuples so that they hash and compare structurally
and cheaply; the remaining formula connectives are frozen dataclasses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Union

__all__ = [
    "Var", "Fn", "Atom", "Equality", "Not", "Binary", "Quantified", "Truth",
    "TRUE", "FALSE", "Term", "Formula", "Substitution", "SymbolTable",
    "FreshSymbols", "SignatureError",
    "term_vars", "free_vars", "all_vars", "substitute", "substitute_term",
    "alpha_equal", "unify", "unify_pairs", "match", "resolve_bindings",
    "conj", "disj", "neg", "implies", "iff", "forall", "exists",
    "formula_symbols", "formula_size", "subformulas",
]


class Var(NamedTuple):
    name: str

    def __str__(self) -> str:
        return self.name


class Fn(NamedTuple):
    """Function application; constants have no arguments."""

    functor: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(map(str, self.args))})"


Term = Union[Var, Fn]
Substitution = dict  # variable name -> Term


class Atom(NamedTuple):
    pred: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(str, self.args))})"


class Equality(NamedTuple):
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Binary:
    op: str  # and | or | implies | iff
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quantified:
    quantifier: str  # forall | exists
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Truth:
    value: bool


TRUE = Truth(True)
FALSE = Truth(False)

Formula = Union[Atom, Equality, Not, Binary, Quantified, Truth]

BINARY_OPS = ("and", "or", "implies", "iff")
QUANTIFIERS = ("forall", "exists")


def neg(f: Formula) -> Formula:
    return Not(f)


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TRUE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Binary("and", f, out)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Binary("or", f, out)
    return out


def implies(a: Formula, b: Formula) -> Formula:
    return Binary("implies", a, b)


def iff(a: Formula, b: Formula) -> Formula:
    return Binary("iff", a, b)


def forall(names: Union[str, Iterable[str]], body: Formula) -> Formula:
    if isinstance(names, str):
        names = [names]
    for v in reversed(list(names)):
        body = Quantified("forall", v, body)
    return body


def exists(names: Union[str, Iterable[str]], body: Formula) -> Formula:
    if isinstance(names, str):
        names = [names]
    for v in reversed(list(names)):
        body = Quantified("exists", v, body)
    return body


class SignatureError(ValueError):
    pass


class SymbolTable:
    """Interned symbols with a kind tag (variable, function, predicate) and arity.

    Append-only; one table per prover instance.
    """

    def __init__(self) -> None:
        self._kinds: dict[str, tuple[str, int]] = {}

    def intern(self, name: str, kind: str, arity: int = 0) -> str:
        known = self._kinds.get(name)
        if known is None:
            self._kinds[name] = (kind, arity)
        elif known != (kind, arity):
            if known[0] != kind:
                raise SignatureError(
                    f"symbol {name!r} used as {kind} but already declared as {known[0]}")
            raise SignatureError(
                f"{kind} {name!r} used with arity {arity}, previously {known[1]}")
        return name

    def add_formula(self, f: Formula) -> None:
        for kind, name, arity in _walk_symbols(f):
            self.intern(name, kind, arity)

    def kind(self, name: str) -> Optional[str]:
        entry = self._kinds.get(name)
        return entry[0] if entry else None

    def arity(self, name: str) -> int:
        return self._kinds[name][1]

    def symbols(self, kind: Optional[str] = None) -> list[tuple[str, int]]:
        return sorted((n, a) for n, (k, a) in self._kinds.items()
                      if kind is None or k == kind)

    def __contains__(self, name: str) -> bool:
        return name in self._kinds


class FreshSymbols:
    """Monotone counter for Skolem functions, definition predicates and variables.

    ``start`` makes a run reproducible: two allocators with the same start and
    reserved set hand out the same names in the same order.
    """

    def __init__(self, start: int = 0, reserved: Iterable[str] = ()) -> None:
        self.counter = start
        self.reserved = set(reserved)

    def _next(self, prefix: str) -> str:
        while True:
            self.counter += 1
            name = f"{prefix}{self.counter}"
            if name not in self.reserved:
                return name

    def skolem(self) -> str:
        return self._next("sk")

    def definition(self) -> str:
        return self._next("def")

    def variable(self) -> str:
        return self._next("V")


# ---------------------------------------------------------------------------
# traversal

def term_vars(t: Term, acc: Optional[dict] = None) -> dict:
    """Variables of ``t`` in first-occurrence order (dict used as ordered set)."""
    if acc is None:
        acc = {}
    stack = [t]
    while stack:
        t = stack.pop()
        if type(t) is Var:
            acc.setdefault(t.name, None)
        else:
            stack.extend(reversed(t.args))
    return acc


def _atom_terms(f) -> tuple:
    return f.args if type(f) is Atom else (f.lhs, f.rhs)


def free_vars(f: Formula) -> set:
    out: set = set()
    _free(f, frozenset(), out)
    return out


def _free(f, bound, out) -> None:
    tf = type(f)
    if tf is Atom or tf is Equality:
        for t in _atom_terms(f):
            for v in term_vars(t):
                if v not in bound:
                    out.add(v)
    elif tf is Not:
        _free(f.body, bound, out)
    elif tf is Binary:
        _free(f.left, bound, out)
        _free(f.right, bound, out)
    elif tf is Quantified:
        _free(f.body, bound | {f.var}, out)


def free_vars_ordered(f: Formula) -> list:
    """Free variables in left-to-right first-occurrence order."""
    out: dict = {}

    def go(g, bound):
        tg = type(g)
        if tg is Atom or tg is Equality:
            for t in _atom_terms(g):
                for v in term_vars(t):
                    if v not in bound:
                        out.setdefault(v, None)
        elif tg is Not:
            go(g.body, bound)
        elif tg is Binary:
            go(g.left, bound)
            go(g.right, bound)
        elif tg is Quantified:
            go(g.body, bound | {g.var})

    go(f, frozenset())
    return list(out)


def all_vars(f: Formula) -> set:
    """Every variable name occurring in ``f``, bound or free, binders included."""
    out: set = set()
    for g in subformulas(f):
        tg = type(g)
        if tg is Atom or tg is Equality:
            for t in _atom_terms(g):
                out.update(term_vars(t))
        elif tg is Quantified:
            out.add(g.var)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        tg = type(g)
        if tg is Not or tg is Quantified:
            stack.append(g.body)
        elif tg is Binary:
            stack.append(g.right)
            stack.append(g.left)


def _term_symbols(t: Term, out: list) -> None:
    stack = [t]
    while stack:
        t = stack.pop()
        if type(t) is Fn:
            out.append(("function", t.functor, len(t.args)))
            stack.extend(t.args)


def _walk_symbols(f: Formula) -> list:
    out: list = []
    for g in subformulas(f):
        tg = type(g)
        if tg is Atom:
            out.append(("predicate", g.pred, len(g.args)))
            for t in g.args:
                _term_symbols(t, out)
        elif tg is Equality:
            _term_symbols(g.lhs, out)
            _term_symbols(g.rhs, out)
    return out


def formula_symbols(f: Formula) -> list:
    """Multiset (list) of predicate and function symbol names; ``=`` included."""
    out = []
    for g in subformulas(f):
        tg = type(g)
        if tg is Equality:
            out.append("=")
        if tg is Atom or tg is Equality:
            if tg is Atom:
                out.append(g.pred)
            syms: list = []
            for t in _atom_terms(g):
                _term_symbols(t, syms)
            out.extend(name for _, name, _ in syms)
    return out


def formula_size(f: Formula) -> int:
    """Number of connectives, quantifiers and atoms."""
    return sum(1 for g in subformulas(f) if type(g) is not Truth)


# ---------------------------------------------------------------------------
# substitution

def substitute_term(t: Term, s: Substitution) -> Term:
    if type(t) is Var:
        return s.get(t.name, t)
    if not t.args:
        return t
    return Fn(t.functor, tuple([substitute_term(a, s) for a in t.args]))


def _subst_atom(f, s):
    if type(f) is Atom:
        if not f.args:
            return f
        return Atom(f.pred, tuple([substitute_term(a, s) for a in f.args]))
    return Equality(substitute_term(f.lhs, s), substitute_term(f.rhs, s))


def _rename_away(name: str, avoid: set) -> str:
    base = name.split("_")[0] if "_" in name else name
    for i in itertools.count(1):
        cand = f"{base}_{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def substitute(f: Formula, s: Substitution) -> Formula:
    """Capture-avoiding substitution of free variables."""
    if not s:
        return f
    tf = type(f)
    if tf is Atom or tf is Equality:
        return _subst_atom(f, s)
    if tf is Truth:
        return f
    if tf is Not:
        return Not(substitute(f.body, s))
    if tf is Binary:
        return Binary(f.op, substitute(f.left, s), substitute(f.right, s))
    # quantifier
    body_free = free_vars(f.body) - {f.var}
    inner = {k: v for k, v in s.items() if k != f.var and k in body_free}
    if not inner:
        return f
    incoming: set = set()
    for t in inner.values():
        incoming.update(term_vars(t))
    if f.var in incoming:
        avoid = incoming | all_vars(f.body) | set(inner)
        new = _rename_away(f.var, avoid)
        inner = dict(inner)
        inner[f.var] = Var(new)
        return Quantified(f.quantifier, new, substitute(f.body, inner))
    return Quantified(f.quantifier, f.var, substitute(f.body, inner))


# ---------------------------------------------------------------------------
# alpha equivalence

def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to consistent renaming of bound variables."""
    return _alpha(f, g, {}, {}, 0)


def _alpha_term(s: Term, t: Term, ls: dict, rs: dict) -> bool:
    if type(s) is Var:
        if type(t) is not Var:
            return False
        a, b = ls.get(s.name), rs.get(t.name)
        if a is None and b is None:
            return s.name == t.name
        return a == b
    if type(t) is not Fn or s.functor != t.functor or len(s.args) != len(t.args):
        return False
    return all(_alpha_term(x, y, ls, rs) for x, y in zip(s.args, t.args))


def _alpha(f, g, ls, rs, depth) -> bool:
    tf = type(f)
    if tf is not type(g):
        return False
    if tf is Atom:
        return (f.pred == g.pred and len(f.args) == len(g.args)
                and all(_alpha_term(x, y, ls, rs) for x, y in zip(f.args, g.args)))
    if tf is Equality:
        return _alpha_term(f.lhs, g.lhs, ls, rs) and _alpha_term(f.rhs, g.rhs, ls, rs)
    if tf is Truth:
        return f.value == g.value
    if tf is Not:
        return _alpha(f.body, g.body, ls, rs, depth)
    if tf is Binary:
        return (f.op == g.op and _alpha(f.left, g.left, ls, rs, depth)
                and _alpha(f.right, g.right, ls, rs, depth))
    if f.quantifier != g.quantifier:
        return False
    ls2 = dict(ls)
    rs2 = dict(rs)
    ls2[f.var] = depth
    rs2[g.var] = depth
    return _alpha(f.body, g.body, ls2, rs2, depth + 1)


# ---------------------------------------------------------------------------
# unification and matching

def _walk(t: Term, s: dict) -> Term:
    while type(t) is Var:
        b = s.get(t.name)
        if b is None:
            return t
        t = b
    return t


def _occurs(name: str, t: Term, s: dict) -> bool:
    stack = [t]
    while stack:
        t = _walk(stack.pop(), s)
        if type(t) is Var:
            if t.name == name:
                return True
        else:
            stack.extend(t.args)
    return False


def unify_pairs(pairs: Iterable[tuple], s: Optional[dict] = None) -> Optional[dict]:
    """Extend the triangular substitution ``s`` to unify every pair, or None."""
    s = {} if s is None else dict(s)
    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        a = _walk(a, s)
        b = _walk(b, s)
        if a == b:
            continue
        if type(a) is Var:
            if _occurs(a.name, b, s):
                return None
            s[a.name] = b
        elif type(b) is Var:
            if _occurs(b.name, a, s):
                return None
            s[b.name] = a
        else:
            if a.functor != b.functor or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
    return s


def resolve_bindings(s: dict) -> dict:
    """Turn a triangular substitution into an idempotent one."""
    out = {}
    for k in s:
        out[k] = _fully(Var(k), s)
    return out


def _fully(t: Term, s: dict) -> Term:
    t = _walk(t, s)
    if type(t) is Var or not t.args:
        return t
    return Fn(t.functor, tuple([_fully(a, s) for a in t.args]))


def unify(t1: Term, t2: Term) -> Optional[dict]:
    """Most general unifier as an idempotent substitution, or None on failure."""
    s = unify_pairs([(t1, t2)])
    return None if s is None else resolve_bindings(s)


def match(pattern: Term, target: Term, s: dict) -> bool:
    """One-way matching; extends ``s`` in place. Target variables are rigid."""
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if type(p) is Var:
            b = s.get(p.name)
            if b is None:
                s[p.name] = t
            elif b != t:
                return False
        elif type(t) is Var or p.functor != t.functor or len(p.args) != len(t.args):
            return False
        else:
            stack.extend(zip(p.args, t.args))
    return True
