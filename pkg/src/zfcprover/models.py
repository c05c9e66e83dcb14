"""Finite-model semantics: Tarskian evaluation and exhaustive model search.

Two independent routes decide whether a set of formulas has a model of a
given finite size:

* :func:`brute_force_model` enumerates every interpretation of the signature
  and evaluates with :func:`eval_formula`. Exact, but only practical for tiny
  signatures.
* :func:`find_model` grounds the formulas over the domain, Tseitin-encodes the
  ground propositional formula and hands it to a SAT solver. Function tables
  become one-hot propositional variables, so the search still ranges over all
  interpretations.

Free variables of input formulas are read universally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .logic import (
    Atom, Binary, Equality, Fn, Formula, Not, Quantified, Truth, Var,
    free_vars, subformulas,
)


class EvaluationError(ValueError):
    """Unassigned variable or uninterpreted symbol."""


@dataclass
class Interpretation:
    size: int
    functions: dict = field(default_factory=dict)   # name -> {args tuple: value}
    predicates: dict = field(default_factory=dict)  # name -> set of tuples

    @property
    def domain(self) -> range:
        return range(self.size)


def eval_term(i: Interpretation, t, assignment: dict) -> int:
    if type(t) is Var:
        try:
            return assignment[t.name]
        except KeyError:
            raise EvaluationError(f"unassigned variable {t.name}") from None
    try:
        table = i.functions[t.functor]
    except KeyError:
        raise EvaluationError(f"uninterpreted function {t.functor}") from None
    return table[tuple(eval_term(i, a, assignment) for a in t.args)]


def eval_formula(i: Interpretation, f: Formula, assignment: dict) -> bool:
    tf = type(f)
    if tf is Atom:
        try:
            rel = i.predicates[f.pred]
        except KeyError:
            raise EvaluationError(f"uninterpreted predicate {f.pred}") from None
        return tuple(eval_term(i, a, assignment) for a in f.args) in rel
    if tf is Equality:
        return eval_term(i, f.lhs, assignment) == eval_term(i, f.rhs, assignment)
    if tf is Truth:
        return f.value
    if tf is Not:
        return not eval_formula(i, f.body, assignment)
    if tf is Binary:
        a = eval_formula(i, f.left, assignment)
        if f.op == "and":
            return a and eval_formula(i, f.right, assignment)
        if f.op == "or":
            return a or eval_formula(i, f.right, assignment)
        if f.op == "implies":
            return (not a) or eval_formula(i, f.right, assignment)
        return a == eval_formula(i, f.right, assignment)
    env = dict(assignment)
    results = []
    for d in i.domain:
        env[f.var] = d
        results.append(eval_formula(i, f.body, env))
        if f.quantifier == "forall" and not results[-1]:
            return False
        if f.quantifier == "exists" and results[-1]:
            return True
    return f.quantifier == "forall"


def holds(i: Interpretation, f: Formula) -> bool:
    """Truth of ``f`` with its free variables read universally."""
    names = sorted(free_vars(f))
    for values in itertools.product(i.domain, repeat=len(names)):
        if not eval_formula(i, f, dict(zip(names, values))):
            return False
    return True


def signature_of(formulas: Iterable[Formula]) -> tuple[dict, dict]:
    """(functions, predicates) as name -> arity maps."""
    funcs: dict = {}
    preds: dict = {}

    def walk_term(t):
        if type(t) is Fn:
            funcs[t.functor] = len(t.args)
            for a in t.args:
                walk_term(a)

    for f in formulas:
        for g in subformulas(f):
            if type(g) is Atom:
                preds[g.pred] = len(g.args)
                for a in g.args:
                    walk_term(a)
            elif type(g) is Equality:
                walk_term(g.lhs)
                walk_term(g.rhs)
    return funcs, preds


def interpretations(funcs: dict, preds: dict, size: int) -> Iterator[Interpretation]:
    """Every interpretation of the signature over ``range(size)``."""
    fnames = sorted(funcs)
    pnames = sorted(preds)
    f_keys = [list(itertools.product(range(size), repeat=funcs[n])) for n in fnames]
    p_keys = [list(itertools.product(range(size), repeat=preds[n])) for n in pnames]
    f_choices = [itertools.product(range(size), repeat=len(k)) for k in f_keys]
    f_tables = [list(c) for c in f_choices]
    p_tables = [list(itertools.product((False, True), repeat=len(k))) for k in p_keys]
    for fvals in itertools.product(*f_tables):
        functions = {n: dict(zip(keys, vals)) for n, keys, vals in zip(fnames, f_keys, fvals)}
        for pvals in itertools.product(*p_tables):
            predicates = {n: {k for k, b in zip(keys, bits) if b}
                          for n, keys, bits in zip(pnames, p_keys, pvals)}
            yield Interpretation(size, functions, predicates)


def brute_force_model(formulas: list, size: int) -> Optional[Interpretation]:
    funcs, preds = signature_of(formulas)
    for i in interpretations(funcs, preds, size):
        if all(holds(i, f) for f in formulas):
            return i
    return None


# ---------------------------------------------------------------------------
# grounding to SAT

class _Grounder:
    def __init__(self, funcs: dict, preds: dict, size: int) -> None:
        self.size = size
        self.nvars = 0
        self.clauses: list = []
        self.pred_var: dict = {}
        self.fn_var: dict = {}
        for name, arity in sorted(funcs.items()):
            for args in itertools.product(range(size), repeat=arity):
                vs = []
                for v in range(size):
                    x = self._new()
                    self.fn_var[(name, args, v)] = x
                    vs.append(x)
                self.clauses.append(vs)
                for a, b in itertools.combinations(vs, 2):
                    self.clauses.append([-a, -b])
        for name, arity in sorted(preds.items()):
            for args in itertools.product(range(size), repeat=arity):
                self.pred_var[(name, args)] = self._new()

    def _new(self) -> int:
        self.nvars += 1
        return self.nvars

    # propositional nodes: True, False, int literal, ("and", [...]), ("or", [...])
    def term_cases(self, t, env) -> list:
        """List of (condition literals, value) covering every interpretation."""
        if type(t) is Var:
            return [((), env[t.name])]
        arg_cases = [self.term_cases(a, env) for a in t.args]
        out = []
        for combo in itertools.product(*arg_cases):
            conds = tuple(c for cs, _ in combo for c in cs)
            args = tuple(v for _, v in combo)
            for v in range(self.size):
                out.append((conds + (self.fn_var[(t.functor, args, v)],), v))
        return out

    def ground(self, f, env, pol: bool):
        """Ground ``f`` (negated when pol is False) to a propositional node."""
        tf = type(f)
        if tf is Truth:
            return f.value == pol
        if tf is Not:
            return self.ground(f.body, env, not pol)
        if tf is Atom or tf is Equality:
            node = self._ground_atom(f, env)
            return node if pol else _negate(node)
        if tf is Binary:
            if f.op == "iff":
                a = self.ground(f.left, env, True)
                b = self.ground(f.right, env, True)
                eq = _mk("or", [_mk("and", [a, b]), _mk("and", [_negate(a), _negate(b)])])
                return eq if pol else _negate(eq)
            if f.op == "and":
                kind = "and" if pol else "or"
                parts = [self.ground(f.left, env, pol), self.ground(f.right, env, pol)]
            elif f.op == "or":
                kind = "or" if pol else "and"
                parts = [self.ground(f.left, env, pol), self.ground(f.right, env, pol)]
            else:
                kind = "or" if pol else "and"
                parts = [self.ground(f.left, env, not pol), self.ground(f.right, env, pol)]
            return _mk(kind, parts)
        universal = (f.quantifier == "forall") == pol
        parts = []
        for d in range(self.size):
            env2 = dict(env)
            env2[f.var] = d
            parts.append(self.ground(f.body, env2, pol))
        return _mk("and" if universal else "or", parts)

    def _ground_atom(self, f, env):
        if type(f) is Atom:
            cases = [self.term_cases(a, env) for a in f.args]
            alts = []
            for combo in itertools.product(*cases):
                conds = [c for cs, _ in combo for c in cs]
                args = tuple(v for _, v in combo)
                alts.append(_mk("and", conds + [self.pred_var[(f.pred, args)]]))
            return _mk("or", alts)
        alts = []
        for (c1, v1), (c2, v2) in itertools.product(self.term_cases(f.lhs, env),
                                                   self.term_cases(f.rhs, env)):
            if v1 == v2:
                alts.append(_mk("and", list(c1) + list(c2)))
        return _mk("or", alts)

    def tseitin(self, node) -> int:
        """Literal equivalent to ``node``; constants become fresh fixed vars."""
        if node is True or node is False:
            x = self._new()
            self.clauses.append([x] if node else [-x])
            return x
        if isinstance(node, int):
            return node
        kind, parts = node
        lits = [self.tseitin(p) for p in parts]
        x = self._new()
        if kind == "and":
            for l in lits:
                self.clauses.append([-x, l])
            self.clauses.append([x] + [-l for l in lits])
        else:
            self.clauses.append([-x] + lits)
            for l in lits:
                self.clauses.append([x, -l])
        return x

    def assert_node(self, node) -> None:
        if node is True:
            return
        if node is False:
            self.clauses.append([])
            return
        if isinstance(node, tuple) and node[0] == "and":
            for p in node[1]:
                self.assert_node(p)
            return
        if isinstance(node, tuple) and node[0] == "or":
            self.clauses.append([self.tseitin(p) for p in node[1]])
            return
        self.clauses.append([self.tseitin(node)])


def _negate(node):
    if node is True:
        return False
    if node is False:
        return True
    if isinstance(node, int):
        return -node
    kind, parts = node
    return _mk("or" if kind == "and" else "and", [_negate(p) for p in parts])


def _mk(kind: str, parts: list):
    unit, zero = (True, False) if kind == "and" else (False, True)
    flat = []
    for p in parts:
        if p is unit:
            continue
        if p is zero:
            return zero
        if isinstance(p, tuple) and p[0] == kind:
            flat.extend(p[1])
        else:
            flat.append(p)
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return (kind, flat)


def find_model(formulas: list, size: int) -> Optional[Interpretation]:
    """A model of every formula with domain ``range(size)``, or None."""
    from pysat.solvers import Solver

    funcs, preds = signature_of(formulas)
    g = _Grounder(funcs, preds, size)
    for f in formulas:
        names = sorted(free_vars(f))
        for values in itertools.product(range(size), repeat=len(names)):
            g.assert_node(g.ground(f, dict(zip(names, values)), True))
            if g.clauses and g.clauses[-1] == []:
                return None
    with Solver(name="minisat22", bootstrap_with=g.clauses) as solver:
        if not solver.solve():
            return None
        true_vars = {l for l in solver.get_model() if l > 0}
    functions: dict = {n: {} for n in funcs}
    for (name, args, v), x in g.fn_var.items():
        if x in true_vars:
            functions[name][args] = v
    predicates: dict = {n: set() for n in preds}
    for (name, args), x in g.pred_var.items():
        if x in true_vars:
            predicates[name].add(args)
    return Interpretation(size, functions, predicates)


def satisfiable_up_to(formulas: list, max_size: int, sizes: Iterable[int] = ()) -> dict:
    """Map domain size -> whether a model of that size exists."""
    sizes = list(sizes) or list(range(1, max_size + 1))
    return {n: find_model(formulas, n) is not None for n in sizes}
