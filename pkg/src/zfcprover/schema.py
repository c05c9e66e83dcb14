"""Parameter-free comprehension and replacement as inference rules.

A formula with exactly one free variable yields a comprehension instance,
one with exactly two free variables yields two replacement instances (one per
choice of which variable is the argument). Instances are closed formulas that
are clausified and added to the search like any derived clause.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .clauses import Clause, Origin, clause_formula
from .cnf import ClausifierOptions, clausify
from .logic import (
    Atom, Binary, Equality, Formula, FreshSymbols, Not, Quantified, Truth, Var,
    all_vars, alpha_equal, free_vars, free_vars_ordered, substitute,
)

MEMBER = "member"
DEFAULT_CAP = 5000


class NotEligible(ValueError):
    pass


@dataclass
class SchemaInstance:
    kind: str  # comprehension | replacement
    origin: object
    phi: Formula
    generated: Formula
    clauses: list = field(default_factory=list)


def clause_to_formula(c) -> Formula:
    """The clause as a disjunction whose variables are left free."""
    literals = c.literals if isinstance(c, Clause) else tuple(c)
    if not literals:
        raise ValueError("the empty clause has no formula reading")
    return clause_formula(literals)


def _fresh_names(phi: Formula, bases: Iterable[str]) -> list:
    taken = set(all_vars(phi))
    out = []
    for base in bases:
        name = base
        k = 0
        while name in taken:
            k += 1
            name = f"{base}{k}"
        taken.add(name)
        out.append(name)
    return out


def _member(a: str, b: str) -> Atom:
    return Atom(MEMBER, (Var(a), Var(b)))


def comprehension_instance(phi: Formula, origin=None) -> SchemaInstance:
    """Closed instance ``![A]: ?[Y]: ![X]: (X in Y <=> (X in A & phi(X)))``.

    Raises NotEligible unless ``phi`` has exactly one free variable.
    """
    fv = free_vars_ordered(phi)
    if len(fv) != 1:
        raise NotEligible(f"comprehension needs one free variable, got {len(fv)}")
    a, y, x = _fresh_names(phi, ("A", "Y", "X"))
    body = substitute(phi, {fv[0]: Var(x)})
    generated = Quantified("forall", a, Quantified("exists", y, Quantified(
        "forall", x, Binary("iff", _member(x, y), Binary("and", _member(x, a), body)))))
    return SchemaInstance("comprehension", origin, phi, generated)


def replacement_instances(phi: Formula, origin=None) -> list:
    """Both replacement instances of a two-variable ``phi``.

    For each ordering (x, y) of the free variables::

        ![X]: ?[Y]: ![Z]: (phi(X,Z) <=> Z = Y)
          => ![A]: ?[B]: ![Y]: (Y in B <=> ?[X]: (X in A & phi(X,Y)))
    """
    fv = free_vars_ordered(phi)
    if len(fv) != 2:
        raise NotEligible(f"replacement needs two free variables, got {len(fv)}")
    u, v = fv
    out = []
    for x_var, y_var in ((u, v), (v, u)):
        x, y, z, a, b = _fresh_names(phi, ("X", "Y", "Z", "A", "B"))
        functional = Quantified("forall", x, Quantified("exists", y, Quantified(
            "forall", z, Binary("iff", substitute(phi, {x_var: Var(x), y_var: Var(z)}),
                                Equality(Var(z), Var(y))))))
        image = Quantified("forall", a, Quantified("exists", b, Quantified(
            "forall", y, Binary("iff", _member(y, b), Quantified(
                "exists", x, Binary("and", _member(x, a),
                                    substitute(phi, {x_var: Var(x), y_var: Var(y)})))))))
        # the recorded phi names its argument X and its value Y
        oriented = substitute(phi, {x_var: Var("X"), y_var: Var("Y")})
        inst = SchemaInstance("replacement", origin, oriented, Binary("implies", functional, image))
        out.append(inst)
    return out


# ---------------------------------------------------------------------------
# canonical keys

def canonical_formula(f: Formula, orient: bool = True) -> Formula:
    """Rename bound variables to B1, B2, ... in binder order, free variables
    to X1, X2, ... by first occurrence; with ``orient`` equations get their
    sides in a fixed order."""
    free = {v: Var(f"X{i}") for i, v in enumerate(free_vars_ordered(f), 1)}
    counter = itertools.count(1)
    return _canon(f, free, counter, orient)


def _canon(f, env, counter, orient):
    tf = type(f)
    if tf is Atom or tf is Equality:
        g = substitute(f, env) if env else f
        if orient and type(g) is Equality and repr(g.rhs) < repr(g.lhs):
            g = Equality(g.rhs, g.lhs)
        return g
    if tf is Truth:
        return f
    if tf is Not:
        return Not(_canon(f.body, env, counter, orient))
    if tf is Binary:
        return Binary(f.op, _canon(f.left, env, counter, orient),
                      _canon(f.right, env, counter, orient))
    new = f"B{next(counter)}"
    env2 = dict(env)
    env2[f.var] = Var(new)
    return Quantified(f.quantifier, new, _canon(f.body, env2, counter, orient))


def instance_key(inst: SchemaInstance) -> tuple:
    return (inst.kind, canonical_formula(inst.generated))


@dataclass
class SchemaStore:
    cap: int = DEFAULT_CAP
    keys: set = field(default_factory=set)
    count: int = 0

    def admit(self, inst: SchemaInstance) -> bool:
        """Record ``inst`` unless an alpha-equal instance of the same kind exists
        or the cap is reached."""
        if self.count >= self.cap:
            return False
        key = instance_key(inst)
        if key in self.keys:
            return False
        self.keys.add(key)
        self.count += 1
        return True

    @property
    def full(self) -> bool:
        return self.count >= self.cap


def schema_instances(phi: Formula, origin=None) -> list:
    """Every instance ``phi`` is eligible for (possibly none)."""
    n = len(free_vars(phi))
    if n == 1:
        return [comprehension_instance(phi, origin)]
    if n == 2:
        return replacement_instances(phi, origin)
    return []


def instance_clauses(inst: SchemaInstance, opts: ClausifierOptions,
                     fresh: FreshSymbols) -> list:
    """Clausify ``inst.generated``; each clause records what the checker needs
    to reproduce it."""
    start = fresh.counter
    clauses = clausify(inst.generated, opts.for_schema(), fresh)
    rule = f"schema_{inst.kind}"
    for c in clauses:
        c.origin = Origin(rule, (), {
            "origin": inst.origin, "phi": inst.phi, "generated": inst.generated,
            "fresh_start": start, "options": opts.for_schema(),
        })
    inst.clauses = clauses
    return clauses


def process_formula(phi: Formula, store: SchemaStore, opts: ClausifierOptions,
                    fresh: FreshSymbols, origin=None) -> list:
    out = []
    for inst in schema_instances(phi, origin):
        if store.admit(inst):
            out.extend(instance_clauses(inst, opts, fresh))
    return out


def process_for_schemas(c: Clause, store: SchemaStore, opts: Optional[ClausifierOptions] = None,
                        fresh: Optional[FreshSymbols] = None) -> list:
    """New schema clauses for ``c`` read as a formula (empty when ineligible,
    already seen, or beyond the store cap)."""
    if c.is_empty or store.full:
        return []
    opts = opts or ClausifierOptions()
    fresh = fresh or FreshSymbols()
    origin = f"c{c.id}" if c.id >= 0 else None
    return process_formula(clause_to_formula(c), store, opts, fresh, origin)


# ---------------------------------------------------------------------------
# independent template recognition (used by the proof checker)

def _strip(f, quantifier):
    if type(f) is Quantified and f.quantifier == quantifier:
        return f.var, f.body
    return None


def _is_member(f, a, b) -> bool:
    return f == Atom(MEMBER, (Var(a), Var(b)))


def match_comprehension(f: Formula) -> Optional[tuple]:
    """If ``f`` has the comprehension shape return ``(x, phi)``, else None."""
    if free_vars(f):
        return None
    r = _strip(f, "forall")
    if r is None:
        return None
    a, f1 = r
    r = _strip(f1, "exists")
    if r is None:
        return None
    y, f2 = r
    r = _strip(f2, "forall")
    if r is None:
        return None
    x, f3 = r
    if len({a, y, x}) != 3:
        return None
    if not (type(f3) is Binary and f3.op == "iff" and _is_member(f3.left, x, y)):
        return None
    rhs = f3.right
    if not (type(rhs) is Binary and rhs.op == "and" and _is_member(rhs.left, x, a)):
        return None
    phi = rhs.right
    if free_vars(phi) - {x}:
        return None
    if {a, y} & all_vars(phi):
        return None
    return x, phi


def match_replacement(f: Formula) -> Optional[tuple]:
    """If ``f`` has the replacement shape return ``(x, y, phi)``, else None."""
    if free_vars(f) or not (type(f) is Binary and f.op == "implies"):
        return None
    head, tail = f.left, f.right
    parts = []
    for q, g in (("forall", head), ("exists", None), ("forall", None)):
        g = g if g is not None else parts[-1][1]
        r = _strip(g, q)
        if r is None:
            return None
        parts.append(r)
    (x1, _), (y1, _), (z1, body1) = parts
    if len({x1, y1, z1}) != 3:
        return None
    if not (type(body1) is Binary and body1.op == "iff"
            and body1.right == Equality(Var(z1), Var(y1))):
        return None
    phi1 = body1.left
    parts = []
    for q, g in (("forall", tail), ("exists", None), ("forall", None)):
        g = g if g is not None else parts[-1][1]
        r = _strip(g, q)
        if r is None:
            return None
        parts.append(r)
    (a, _), (b, _), (y2, body2) = parts
    if len({a, b, y2}) != 3:
        return None
    if not (type(body2) is Binary and body2.op == "iff" and _is_member(body2.left, y2, b)):
        return None
    r = _strip(body2.right, "exists")
    if r is None:
        return None
    x2, inner = r
    if x2 in (a, b, y2):
        return None
    if not (type(inner) is Binary and inner.op == "and" and _is_member(inner.left, x2, a)):
        return None
    phi2 = inner.right
    if free_vars(phi1) - {x1, z1} or free_vars(phi2) - {x2, y2}:
        return None
    if {y1} & all_vars(phi1) or {a, b} & all_vars(phi2):
        return None
    # the same phi must sit in both places
    left = substitute(phi1, {x1: Var("$x"), z1: Var("$y")})
    right = substitute(phi2, {x2: Var("$x"), y2: Var("$y")})
    if not alpha_equal(left, right):
        return None
    return x2, y2, phi2


def check_schema_formula(kind: str, generated: Formula, phi: Optional[Formula] = None) -> bool:
    """Template shape check, optionally also against the recorded phi."""
    if kind == "comprehension":
        m = match_comprehension(generated)
        if m is None:
            return False
        if phi is not None:
            fv = free_vars_ordered(phi)
            if len(fv) != 1:
                return False
            return alpha_equal(substitute(phi, {fv[0]: Var(m[0])}), m[1])
        return True
    if kind == "replacement":
        m = match_replacement(generated)
        if m is None:
            return False
        if phi is not None:
            if free_vars(phi) != {"X", "Y"}:
                return False
            return alpha_equal(substitute(phi, {"X": Var(m[0]), "Y": Var(m[1])}), m[2])
        return True
    return False
