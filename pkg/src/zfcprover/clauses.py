"""Literals and clauses, plus canonical variable naming."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Union

from .logic import Atom, Equality, Fn, Var, disj, Formula, Not, term_vars

AtomLike = Union[Atom, Equality]


class Literal(NamedTuple):
    positive: bool
    atom: AtomLike

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.atom)

    @property
    def is_equality(self) -> bool:
        return type(self.atom) is Equality

    def __str__(self) -> str:
        a = self.atom
        if type(a) is Equality:
            return f"{a.lhs} {'=' if self.positive else '!='} {a.rhs}"
        return str(a) if self.positive else f"~{a}"


@dataclass
class Origin:
    """How a clause came to be.

    ``rule`` is one of input, resolution, factoring, paramodulation,
    equality_resolution, schema_comprehension, schema_replacement.
    ``detail`` carries the arguments needed to re-run the rule.
    """

    rule: str
    parents: tuple = ()
    detail: dict = field(default_factory=dict)


class Clause:
    __slots__ = ("literals", "id", "age", "origin", "weight", "goal")

    def __init__(self, literals: Iterable[Literal], origin: Optional[Origin] = None,
                 id: int = -1, age: int = 0, goal: bool = False) -> None:
        self.literals = tuple(literals)
        self.origin = origin or Origin("input")
        self.id = id
        self.age = age
        self.goal = goal
        self.weight = clause_weight(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def variables(self) -> list:
        return clause_vars(self.literals)

    def __repr__(self) -> str:
        return f"Clause({self.id}: {self})"

    def __str__(self) -> str:
        if not self.literals:
            return "$false"
        return " | ".join(map(str, self.literals))


def literal_terms(lit: Literal) -> tuple:
    a = lit.atom
    return a.args if type(a) is Atom else (a.lhs, a.rhs)


def clause_vars(literals: Iterable[Literal]) -> list:
    acc: dict = {}
    for lit in literals:
        for t in literal_terms(lit):
            term_vars(t, acc)
    return list(acc)


def _term_weight(t) -> int:
    if type(t) is Var:
        return 1
    return 2 + sum(_term_weight(a) for a in t.args)


def clause_weight(literals: Iterable[Literal]) -> int:
    """Symbol count: variables weigh 1, function and predicate symbols 2."""
    w = 0
    for lit in literals:
        w += 2
        for t in literal_terms(lit):
            w += _term_weight(t)
    return w


def _rename_term(t, m: dict):
    if type(t) is Var:
        return m[t.name]
    if not t.args:
        return t
    return Fn(t.functor, tuple([_rename_term(a, m) for a in t.args]))


def apply_to_literal(lit: Literal, s: dict, subst_term) -> Literal:
    a = lit.atom
    if type(a) is Atom:
        if not a.args:
            return lit
        return Literal(lit.positive, Atom(a.pred, tuple([subst_term(x, s) for x in a.args])))
    return Literal(lit.positive, Equality(subst_term(a.lhs, s), subst_term(a.rhs, s)))


def canonical_literals(literals: Iterable[Literal], prefix: str = "X") -> tuple:
    """Rename variables to X1..Xn in first-occurrence order and drop duplicates."""
    literals = tuple(literals)
    names = clause_vars(literals)
    m = {n: Var(f"{prefix}{i}") for i, n in enumerate(names, 1)}
    out = []
    seen = set()
    for lit in literals:
        lit = apply_to_literal(lit, m, _rename_term) if m else lit
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def rename_literals(literals: Iterable[Literal], suffix: str) -> tuple:
    """Rename every variable apart by appending ``suffix``."""
    literals = tuple(literals)
    m = {n: Var(n + suffix) for n in clause_vars(literals)}
    if not m:
        return literals
    return tuple(apply_to_literal(l, m, _rename_term) for l in literals)


def is_tautology(literals: Iterable[Literal]) -> bool:
    pos = set()
    neg = set()
    for lit in literals:
        a = lit.atom
        if lit.positive:
            if type(a) is Equality and a.lhs == a.rhs:
                return True
            pos.add(a)
        else:
            neg.add(a)
    if pos & neg:
        return True
    # s=t against ~t=s
    for a in neg:
        if type(a) is Equality and Equality(a.rhs, a.lhs) in pos:
            return True
    return False


def literal_to_formula(lit: Literal) -> Formula:
    return lit.atom if lit.positive else Not(lit.atom)


def clause_formula(literals: Iterable[Literal]) -> Formula:
    """Disjunction of the literals, variables left free."""
    return disj(*[literal_to_formula(l) for l in literals])


def same_clause(a: Iterable[Literal], b: Iterable[Literal]) -> bool:
    """Equal after canonical renaming, literal order included."""
    return canonical_literals(a) == canonical_literals(b)


def variant_key(literals: Iterable[Literal]) -> tuple:
    """Order-insensitive key; equal keys imply the clauses are variants.

    The converse can fail when literals share a skeleton, which only costs a
    missed duplicate.
    """
    return canonical_literals(sorted(literals, key=_lit_shape))


def _lit_shape(lit: Literal):
    a = lit.atom
    return (not lit.positive, str(_skeleton(a)))


def _skeleton(a):
    if type(a) is Atom:
        return (a.pred,) + tuple(_skel_term(t) for t in a.args)
    return ("=", _skel_term(a.lhs), _skel_term(a.rhs))


def _skel_term(t):
    if type(t) is Var:
        return "_"
    return (t.functor,) + tuple(_skel_term(x) for x in t.args)
