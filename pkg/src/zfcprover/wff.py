"""Fair enumeration of one- and two-variable formulas for schema instances.

Formulas are generated in size bands (size counts atoms, connectives and
quantifiers) over a small relational signature. Free variables are named
X1, X2 by first occurrence and a binder at nesting depth d binds ``B<d+1>``, so
syntactic equality coincides with alpha-equivalence.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .logic import (
    Atom, Binary, Equality, Formula, Not, Quantified, Var, formula_size,
    formula_symbols, free_vars, free_vars_ordered, substitute,
)

CORE_SIGNATURE = (("member", 2),)
OPS = ("and", "or", "implies", "iff")
FREE = ("X1", "X2")


def _pool(depth: int) -> tuple:
    return FREE + tuple(f"B{i}" for i in range(1, depth + 1))


@lru_cache(maxsize=None)
def _band(size: int, depth: int, signature: tuple) -> tuple:
    """Every formula of exactly ``size`` over the variables of ``_pool(depth)``
    whose quantifiers all bind something."""
    if size < 1:
        return ()
    pool = [Var(v) for v in _pool(depth)]
    if size == 1:
        out = []
        for name, arity in signature:
            for args in _tuples(pool, arity):
                out.append(Atom(name, args))
        for l in pool:
            for r in pool:
                out.append(Equality(l, r))
        return tuple(out)
    out = [Not(g) for g in _band(size - 1, depth, signature)]
    for i in range(1, size - 1):
        lefts = _band(i, depth, signature)
        rights = _band(size - 1 - i, depth, signature)
        for op in OPS:
            for l in lefts:
                for r in rights:
                    out.append(Binary(op, l, r))
    bound = f"B{depth + 1}"
    for g in _band(size - 1, depth + 1, signature):
        if bound in free_vars(g):
            out.append(Quantified("forall", bound, g))
            out.append(Quantified("exists", bound, g))
    return tuple(out)


def _tuples(pool: list, arity: int) -> list:
    if arity == 0:
        return [()]
    return [(v,) + rest for v in pool for rest in _tuples(pool, arity - 1)]


def structural_key(f: Formula) -> tuple:
    tf = type(f)
    if tf is Atom:
        return (0, f.pred, tuple(a.name for a in f.args))
    if tf is Equality:
        return (0, "=", (f.lhs.name, f.rhs.name))
    if tf is Not:
        return (1, structural_key(f.body))
    if tf is Binary:
        return (2, OPS.index(f.op), structural_key(f.left), structural_key(f.right))
    return (3, f.quantifier, structural_key(f.body))


def canonical_free(f: Formula) -> Formula:
    fv = free_vars_ordered(f)
    m = {v: Var(f"X{i}") for i, v in enumerate(fv, 1)}
    if all(m[v].name == v for v in fv):
        return f
    return substitute(f, m)


def enumerate_band(size: int, signature: Iterable = CORE_SIGNATURE) -> list:
    """Canonical formulas of exactly ``size`` with one or two free variables."""
    signature = tuple(sorted(signature))
    seen = set()
    out = []
    for f in _band(size, 0, signature):
        if not 1 <= len(free_vars(f)) <= 2:
            continue
        g = canonical_free(f)
        if g not in seen:
            seen.add(g)
            out.append(g)
    out.sort(key=structural_key)
    return out


def enumerate_wffs(up_to_size: int, signature: Iterable = CORE_SIGNATURE) -> list:
    """All canonical formulas with 1 or 2 free variables and size <= up_to_size,
    ordered by (size, structural order)."""
    out = []
    for n in range(1, up_to_size + 1):
        out.extend(enumerate_band(n, signature))
    return out


def extended_signature(symbols) -> tuple:
    """member plus the problem's own predicates of arity <= 2.

    ``symbols`` is a SymbolTable; generated Skolem and definition symbols are
    never part of a problem's table.
    """
    preds = {n: a for n, a in symbols.symbols("predicate") if a <= 2 and a >= 1}
    preds.setdefault("member", 2)
    return tuple(sorted(preds.items()))


# ---------------------------------------------------------------------------
# relevance and selection

@dataclass
class RelevanceContext:
    goal: Counter = field(default_factory=Counter)
    processed: Counter = field(default_factory=Counter)

    @classmethod
    def from_formulas(cls, formulas: Iterable[Formula]) -> "RelevanceContext":
        goal = Counter()
        for f in formulas:
            goal.update(formula_symbols(f))
        return cls(goal)

    def note_processed(self, symbols: Iterable[str]) -> None:
        self.processed.update(symbols)


def relevance_score(f: Formula, ctx: RelevanceContext) -> Fraction:
    """Goal-symbol overlap plus half the frequency-weighted overlap with
    processed clauses, per unit of formula size."""
    syms = Counter(formula_symbols(f))
    goal = sum(min(n, ctx.goal[s]) for s, n in syms.items())
    proc = Fraction(0)
    if ctx.processed:
        top = max(ctx.processed.values())
        proc = sum((Fraction(n * ctx.processed[s], top) for s, n in syms.items()), Fraction(0))
    return (goal + Fraction(1, 2) * proc) / formula_size(f)


class WffQueue:
    """Formulas awaiting selection; every k-th pick is by age, the rest by
    relevance within the oldest ``window`` unselected formulas."""

    def __init__(self, signature: Iterable = CORE_SIGNATURE, interleave: int = 5,
                 window: Optional[int] = 256) -> None:
        if interleave < 1:
            raise ValueError("interleave must be >= 1")
        self.signature = tuple(sorted(signature))
        self.interleave = interleave
        self.window = window
        self.generated: list = []
        self.selected: list = []
        self._taken: list = []
        self._oldest = 0
        self.next_size = 1
        self.calls = 0

    def _refill(self) -> None:
        while self._oldest >= len(self.generated):
            band = enumerate_band(self.next_size, self.signature)
            self.next_size += 1
            self.generated.extend(band)
            self._taken.extend([False] * len(band))

    def _advance(self) -> None:
        while self._oldest < len(self._taken) and self._taken[self._oldest]:
            self._oldest += 1

    def _take(self, idx: int) -> Formula:
        self._taken[idx] = True
        f = self.generated[idx]
        self.selected.append(idx)
        self._advance()
        return f

    def select_next(self, ctx: Optional[RelevanceContext] = None) -> Formula:
        self._advance()
        self._refill()
        self.calls += 1
        if ctx is None or self.calls % self.interleave == 0:
            return self._take(self._oldest)
        best, best_score = None, None
        seen = 0
        idx = self._oldest
        while idx < len(self.generated) and (self.window is None or seen < self.window):
            if not self._taken[idx]:
                score = relevance_score(self.generated[idx], ctx)
                if best_score is None or score > best_score:
                    best, best_score = idx, score
                seen += 1
            idx += 1
        return self._take(best)


def select_next(q: WffQueue, ctx: Optional[RelevanceContext] = None) -> Formula:
    return q.select_next(ctx)
