"""Guard erasure: rewrite class-theory problems into the language of sets.

In the class theory every object is a class and sethood is asserted with
``member(T, universal_class)`` or ``set(T)``. Over sets those atoms are simply
true, so they are replaced by ``$true`` and the formula is simplified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cnf import simplify
from .logic import (
    TRUE, Atom, Binary, Equality, Fn, Formula, Not, Quantified, Truth, Var, match,
)
from .tptp import AnnotatedFormula, Problem, parse_formula

GUARDED = "T"
DEFAULT_GUARDS = ("member(T,universal_class)", "set(T)")


def parse_guard(text: str) -> Atom:
    """A guard given as an atom over the variable T, or a bare predicate name
    standing for ``name(T)``."""
    text = text.strip()
    if "(" not in text:
        return Atom(text, (Var(GUARDED),))
    f = parse_formula(text)
    if type(f) is not Atom:
        raise ValueError(f"guard must be an atom, got {text!r}")
    vs = [a for a in _term_leaves(f.args) if type(a) is Var]
    if {v.name for v in vs} != {GUARDED} or len(vs) != 1:
        raise ValueError(f"guard {text!r} must mention the variable {GUARDED} exactly once")
    return f


def _term_leaves(terms) -> list:
    out = []
    stack = list(terms)
    while stack:
        t = stack.pop()
        if type(t) is Fn and t.args:
            stack.extend(t.args)
        else:
            out.append(t)
    return out


@dataclass
class SethoodConfig:
    guards: tuple = field(default_factory=lambda: tuple(parse_guard(g) for g in DEFAULT_GUARDS))
    drop_symbols: frozenset = frozenset()

    @classmethod
    def from_strings(cls, guards: Iterable[str], drop: Iterable[str] = ()) -> "SethoodConfig":
        return cls(tuple(parse_guard(g) for g in guards), frozenset(drop))

    @property
    def guard_symbols(self) -> set:
        """Names whose survival after stripping deserves a warning."""
        out = set(self.drop_symbols)
        for g in self.guards:
            consts = [t.functor for t in _term_leaves(g.args) if type(t) is Fn]
            # a bare unary guard predicate is itself the marker; otherwise the
            # class constant is (member is far too common to warn about)
            out.update(consts if consts else [g.pred])
        return out

    def is_guard(self, atom) -> bool:
        if type(atom) is not Atom:
            return False
        for g in self.guards:
            if g.pred != atom.pred or len(g.args) != len(atom.args):
                continue
            s: dict = {}
            if all(match(p, t, s) for p, t in zip(g.args, atom.args)):
                return True
        return False


def _erase(f: Formula, cfg: SethoodConfig, counter: list) -> Formula:
    tf = type(f)
    if tf is Atom:
        if cfg.is_guard(f):
            counter[0] += 1
            return TRUE
        return f
    if tf is Equality or tf is Truth:
        return f
    if tf is Not:
        return Not(_erase(f.body, cfg, counter))
    if tf is Binary:
        return Binary(f.op, _erase(f.left, cfg, counter), _erase(f.right, cfg, counter))
    return Quantified(f.quantifier, f.var, _erase(f.body, cfg, counter))


def strip_sethood(f: Formula, cfg: Optional[SethoodConfig] = None) -> Formula:
    """Replace every guard atom by $true and apply the absorption laws."""
    cfg = cfg or SethoodConfig()
    counter = [0]
    g = _erase(f, cfg, counter)
    return simplify(g) if counter[0] else f


def count_guards(f: Formula, cfg: SethoodConfig) -> int:
    counter = [0]
    _erase(f, cfg, counter)
    return counter[0]


def _symbol_positions(f: Formula, names: set) -> list:
    """Occurrences of ``names`` anywhere in ``f`` as (symbol, context) pairs."""
    found = []

    def term(t, ctx):
        if type(t) is Var:
            return
        if t.functor in names:
            found.append((t.functor, ctx))
        for a in t.args:
            term(a, ctx)

    def walk(g):
        tg = type(g)
        if tg is Atom:
            if g.pred in names:
                found.append((g.pred, g))
            for a in g.args:
                term(a, g)
        elif tg is Equality:
            term(g.lhs, g)
            term(g.rhs, g)
        elif tg is Not or tg is Quantified:
            walk(g.body)
        elif tg is Binary:
            walk(g.left)
            walk(g.right)

    walk(f)
    return found


@dataclass
class TranslationReport:
    changed: list = field(default_factory=list)    # (name, guards removed)
    dropped: list = field(default_factory=list)    # names that became $true
    warnings: list = field(default_factory=list)   # (name, symbol, atom)

    def lines(self) -> list:
        out = [f"changed {name}: {n} guard(s) removed" for name, n in self.changed]
        out += [f"dropped {name}: simplifies to $true" for name in self.dropped]
        out += [f"warning {name}: {sym} left in non-guard position {atom}"
                for name, sym, atom in self.warnings]
        if not out:
            out.append("no changes")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def translate_problem(p: Problem, cfg: Optional[SethoodConfig] = None) -> tuple:
    """Strip guards from every formula; returns ``(problem, report)``.

    Formulas that become $true are dropped, except a conjecture, which is kept
    as $true so the problem still has its goal.
    """
    from .tptp import print_formula

    cfg = cfg or SethoodConfig()
    report = TranslationReport()
    out = Problem(name=p.name)
    residual = cfg.guard_symbols
    for af in p.formulas:
        n = count_guards(af.formula, cfg)
        g = strip_sethood(af.formula, cfg) if n else af.formula
        if n:
            report.changed.append((af.name, n))
        if g == TRUE and af.role != "conjecture":
            report.dropped.append(af.name)
            continue
        for sym, atom in _symbol_positions(g, residual):
            report.warnings.append((af.name, sym, print_formula(atom)))
        out.add(AnnotatedFormula(af.name, af.role, g, af.source, af.line))
    return out, report
