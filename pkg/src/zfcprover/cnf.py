"""Clause normal form with definitional renaming and Skolemization.

``definitional_threshold`` and ``eq_unfolding`` play the part of E's
``--definitional-cnf=N`` and ``--no-eq-unfolding``:

* a subformula is replaced by a fresh definition predicate when the exact
  clause count of its disjunctive parent exceeds the threshold;
* with ``eq_unfolding`` off, equivalences stay intact while those decisions are
  made, so their operands are named once with two-way definitions. With it on,
  every ``A <=> B`` is first unfolded into ``(A => B) & (B => A)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .clauses import Clause, Literal, canonical_literals, is_tautology
from .logic import (
    Atom, Binary, Equality, FALSE, Fn, Formula, FreshSymbols, Not, Quantified,
    TRUE, Truth, Var, all_vars, free_vars, free_vars_ordered, subformulas, substitute,
)


@dataclass(frozen=True)
class ClausifierOptions:
    definitional_threshold: float = 100
    eq_unfolding: bool = False
    # False: schema-generated formulas are clausified without definitions
    schema_definitions: bool = True

    def __post_init__(self) -> None:
        if not self.definitional_threshold >= 1:
            raise ValueError("definitional_threshold must be >= 1")

    def for_schema(self) -> "ClausifierOptions":
        if self.schema_definitions:
            return self
        return ClausifierOptions(math.inf, self.eq_unfolding, True)


def simplify(f: Formula) -> Formula:
    """Fold the constants $true / $false away."""
    tf = type(f)
    if tf is Not:
        b = simplify(f.body)
        if type(b) is Truth:
            return FALSE if b.value else TRUE
        return Not(b)
    if tf is Quantified:
        b = simplify(f.body)
        if type(b) is Truth:
            return b
        return Quantified(f.quantifier, f.var, b)
    if tf is not Binary:
        return f
    a = simplify(f.left)
    b = simplify(f.right)
    op = f.op
    if op == "and":
        if a == FALSE or b == FALSE:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE:
            return a
    elif op == "or":
        if a == TRUE or b == TRUE:
            return TRUE
        if a == FALSE:
            return b
        if b == FALSE:
            return a
    elif op == "implies":
        if a == FALSE or b == TRUE:
            return TRUE
        if a == TRUE:
            return b
        if b == FALSE:
            return simplify(Not(a))
    else:
        if a == TRUE:
            return b
        if b == TRUE:
            return a
        if a == FALSE:
            return simplify(Not(b))
        if b == FALSE:
            return simplify(Not(a))
    return Binary(op, a, b)


def nnf(f: Formula) -> Formula:
    """Negation normal form; implications and equivalences are eliminated."""
    return _nnf(f, True)


def _nnf(f: Formula, pos: bool) -> Formula:
    tf = type(f)
    if tf is Atom or tf is Equality:
        return f if pos else Not(f)
    if tf is Truth:
        return f if pos else Truth(not f.value)
    if tf is Not:
        return _nnf(f.body, not pos)
    if tf is Quantified:
        q = f.quantifier if pos else ("exists" if f.quantifier == "forall" else "forall")
        return Quantified(q, f.var, _nnf(f.body, pos))
    op = f.op
    if op == "and" or op == "or":
        if not pos:
            op = "or" if op == "and" else "and"
        return Binary(op, _nnf(f.left, pos), _nnf(f.right, pos))
    if op == "implies":
        if pos:
            return Binary("or", _nnf(f.left, False), _nnf(f.right, True))
        return Binary("and", _nnf(f.left, True), _nnf(f.right, False))
    a, b = f.left, f.right
    if pos:
        return Binary("and", Binary("or", _nnf(a, False), _nnf(b, True)),
                      Binary("or", _nnf(b, False), _nnf(a, True)))
    return Binary("and", Binary("or", _nnf(a, True), _nnf(b, True)),
                  Binary("or", _nnf(a, False), _nnf(b, False)))


def skolemize(f: Formula, fresh: Optional[FreshSymbols] = None) -> Formula:
    """Replace every existential of an NNF formula by a Skolem term.

    The Skolem function takes the free variables of the existential
    subformula, in binding order of the enclosing universals.
    """
    if fresh is None:
        fresh = FreshSymbols(reserved=_symbol_names(f))
    outer = sorted(free_vars(f))
    return _skolem(f, outer, fresh)


def _skolem(f: Formula, scope: list, fresh: FreshSymbols) -> Formula:
    tf = type(f)
    if tf is Binary:
        return Binary(f.op, _skolem(f.left, scope, fresh), _skolem(f.right, scope, fresh))
    if tf is Quantified:
        if f.quantifier == "forall":
            return Quantified("forall", f.var, _skolem(f.body, scope + [f.var], fresh))
        fv = free_vars(f)
        args = []
        for v in reversed(scope):  # innermost binding of a name wins
            if v in fv and v not in args:
                args.append(v)
        args.reverse()
        term = Fn(fresh.skolem(), tuple(Var(v) for v in args))
        return _skolem(substitute(f.body, {f.var: term}), scope, fresh)
    return f


def _symbol_names(f: Formula) -> set:
    names = set()
    for g in subformulas(f):
        if type(g) is Atom:
            names.add(g.pred)
        if type(g) in (Atom, Equality):
            stack = list(g.args if type(g) is Atom else (g.lhs, g.rhs))
            while stack:
                t = stack.pop()
                if type(t) is Fn:
                    names.add(t.functor)
                    stack.extend(t.args)
    return names


# ---------------------------------------------------------------------------
# clause counting and definitional renaming

def clause_counts(f: Formula) -> tuple:
    """(clauses of CNF(f), clauses of CNF(~f)) by the exact product/sum recurrence."""
    tf = type(f)
    if tf is Atom or tf is Equality:
        return 1, 1
    if tf is Truth:
        return (0, 1) if f.value else (1, 0)
    if tf is Not:
        p, n = clause_counts(f.body)
        return n, p
    if tf is Quantified:
        return clause_counts(f.body)
    pa, na = clause_counts(f.left)
    pb, nb = clause_counts(f.right)
    if f.op == "and":
        return pa + pb, na * nb
    if f.op == "or":
        return pa * pb, na + nb
    if f.op == "implies":
        return na * pb, pa + nb
    return na * pb + nb * pa, pa * pb + na * nb


def _count(f: Formula, pol: int) -> int:
    p, n = clause_counts(f)
    if pol > 0:
        return p
    if pol < 0:
        return n
    return p + n


def _is_literal(f: Formula) -> bool:
    if type(f) is Not:
        f = f.body
    return type(f) in (Atom, Equality, Truth)


def _multiplies(f: Binary, pol: int) -> bool:
    if f.op == "iff" or pol == 0:
        return True
    if f.op == "and":
        return pol < 0
    return pol > 0  # or, implies


def _child_pols(f: Binary, pol: int) -> tuple:
    if f.op == "iff":
        return 0, 0
    if f.op == "implies":
        return -pol, pol
    return pol, pol


def unfold_equivalences(f: Formula) -> Formula:
    tf = type(f)
    if tf is Not:
        return Not(unfold_equivalences(f.body))
    if tf is Quantified:
        return Quantified(f.quantifier, f.var, unfold_equivalences(f.body))
    if tf is Binary:
        a = unfold_equivalences(f.left)
        b = unfold_equivalences(f.right)
        if f.op == "iff":
            return Binary("and", Binary("implies", a, b), Binary("implies", b, a))
        return Binary(f.op, a, b)
    return f


class _Renamer:
    def __init__(self, threshold: float, fresh: FreshSymbols) -> None:
        self.threshold = threshold
        self.fresh = fresh
        self.definitions: list = []

    def run(self, f: Formula, pol: int) -> Formula:
        tf = type(f)
        if tf is Not:
            return Not(self.run(f.body, -pol))
        if tf is Quantified:
            return Quantified(f.quantifier, f.var, self.run(f.body, pol))
        if tf is not Binary:
            return f
        lp, rp = _child_pols(f, pol)
        kids = [self.run(f.left, lp), self.run(f.right, rp)]
        pols = [lp, rp]
        node = Binary(f.op, *kids)
        if not _multiplies(f, pol):
            return node
        while _count(node, pol) > self.threshold:
            cands = [i for i in (0, 1) if not _is_literal(kids[i])]
            if not cands:
                break
            i = max(cands, key=lambda k: (_count(kids[k], pols[k]), -k))
            kids[i] = self.name(kids[i], pols[i])
            node = Binary(f.op, *kids)
        return node

    def name(self, g: Formula, pol: int) -> Formula:
        args = tuple(Var(v) for v in free_vars_ordered(g))
        d = Atom(self.fresh.definition(), args)
        if pol > 0:
            body = Binary("implies", d, g)
        elif pol < 0:
            body = Binary("implies", g, d)
        else:
            body = Binary("iff", d, g)
        for v in reversed(args):
            body = Quantified("forall", v.name, body)
        self.definitions.append(body)
        return d


def definitional_forms(f: Formula, threshold: float, fresh: FreshSymbols) -> list:
    """``f`` with large subformulas named, followed by the definitions."""
    if threshold == math.inf:
        return [f]
    r = _Renamer(threshold, fresh)
    main = r.run(f, 1)
    return [main] + r.definitions


# ---------------------------------------------------------------------------
# clausification

def _rename_binders(f: Formula, counter, env: dict) -> Formula:
    tf = type(f)
    if tf is Atom or tf is Equality:
        return substitute(f, env) if env else f
    if tf is Truth:
        return f
    if tf is Not:
        return Not(_rename_binders(f.body, counter, env))
    if tf is Binary:
        return Binary(f.op, _rename_binders(f.left, counter, env),
                      _rename_binders(f.right, counter, env))
    new = f"_B{next(counter)}"
    env2 = dict(env)
    env2[f.var] = Var(new)
    return Quantified(f.quantifier, new, _rename_binders(f.body, counter, env2))


def _matrix(f: Formula) -> Formula:
    while type(f) is Quantified:
        f = f.body
    if type(f) is Binary:
        return Binary(f.op, _matrix(f.left), _matrix(f.right))
    return f


def _distribute(f: Formula) -> list:
    tf = type(f)
    if tf is Truth:
        return [] if f.value else [()]
    if tf is Atom or tf is Equality:
        return [(Literal(True, f),)]
    if tf is Not:
        return [(Literal(False, f.body),)]
    a = _distribute(f.left)
    b = _distribute(f.right)
    if f.op == "and":
        return a + b
    return [x + y for x in a for y in b]


def cnf_literals(f: Formula, fresh: FreshSymbols) -> list:
    """Plain (non-definitional) CNF of one formula as literal tuples."""
    g = nnf(simplify(f))
    g = _rename_binders(g, itertools.count(1), {})
    g = skolemize(g, fresh)
    out = []
    seen = set()
    for lits in _distribute(_matrix(g)):
        if is_tautology(lits):
            continue
        lits = canonical_literals(lits)
        if lits not in seen:
            seen.add(lits)
            out.append(lits)
    return out


def clausify(f: Formula, opts: Optional[ClausifierOptions] = None,
             fresh: Optional[FreshSymbols] = None) -> list:
    """Clauses equisatisfiable with ``f``; free variables read universally."""
    opts = opts or ClausifierOptions()
    if fresh is None:
        fresh = FreshSymbols(reserved=_symbol_names(f))
    g = simplify(f)
    if opts.eq_unfolding:
        g = unfold_equivalences(g)
    out = []
    for part in definitional_forms(g, opts.definitional_threshold, fresh):
        out.extend(Clause(lits) for lits in cnf_literals(part, fresh))
    return out


def textbook_cnf(f: Formula, fresh: Optional[FreshSymbols] = None) -> list:
    return clausify(f, ClausifierOptions(math.inf, True), fresh)
