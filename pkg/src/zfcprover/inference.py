"""Resolution, factoring, paramodulation, equality resolution and subsumption.

Every rule takes literal tuples plus the indices that pin down one inference
and returns the conclusion with canonically renamed variables, or None. The
proof checker re-runs exactly these functions on recorded arguments.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .clauses import (
    Literal, _rename_term, apply_to_literal, canonical_literals, clause_vars,
    literal_terms, rename_literals,
)
from .logic import Atom, Equality, Fn, Var, match, resolve_bindings, substitute_term, unify_pairs

APART = "_r"


def _pairs(a, b, flip: bool = False) -> Optional[list]:
    """Argument pairs to unify two atoms, or None on symbol clash."""
    ta = type(a)
    if ta is not type(b):
        return None
    if ta is Atom:
        if a.pred != b.pred or len(a.args) != len(b.args):
            return None
        return list(zip(a.args, b.args))
    if flip:
        return [(a.lhs, b.rhs), (a.rhs, b.lhs)]
    return [(a.lhs, b.lhs), (a.rhs, b.rhs)]


def _apply(literals, s: dict) -> tuple:
    if not s:
        return tuple(literals)
    s = resolve_bindings(s)
    return tuple(apply_to_literal(l, s, substitute_term) for l in literals)


def resolve(c1: tuple, c2: tuple, i: int, j: int, flip: bool = False) -> Optional[tuple]:
    """Binary resolution on literal ``i`` of ``c1`` and ``j`` of ``c2``.

    ``flip`` unifies an equation against its mirror image.
    """
    if not (0 <= i < len(c1) and 0 <= j < len(c2)):
        return None
    c2 = rename_literals(c2, APART)
    l1, l2 = c1[i], c2[j]
    if l1.positive == l2.positive:
        return None
    pairs = _pairs(l1.atom, l2.atom, flip)
    if pairs is None:
        return None
    s = unify_pairs(pairs)
    if s is None:
        return None
    rest = c1[:i] + c1[i + 1:] + c2[:j] + c2[j + 1:]
    return canonical_literals(_apply(rest, s))


def factor(c: tuple, i: int, j: int, flip: bool = False) -> Optional[tuple]:
    if not (0 <= i < len(c) and 0 <= j < len(c)) or i == j:
        return None
    l1, l2 = c[i], c[j]
    if l1.positive != l2.positive:
        return None
    pairs = _pairs(l1.atom, l2.atom, flip)
    if pairs is None:
        return None
    s = unify_pairs(pairs)
    if s is None:
        return None
    return canonical_literals(_apply(c[:j] + c[j + 1:], s))


def equality_resolution(c: tuple, i: int) -> Optional[tuple]:
    if not 0 <= i < len(c):
        return None
    lit = c[i]
    if lit.positive or type(lit.atom) is not Equality:
        return None
    s = unify_pairs([(lit.atom.lhs, lit.atom.rhs)])
    if s is None:
        return None
    return canonical_literals(_apply(c[:i] + c[i + 1:], s))


def subterm_at(lit: Literal, pos: tuple):
    t = literal_terms(lit)[pos[0]]
    for k in pos[1:]:
        t = t.args[k]
    return t


def _replace(t, path: tuple, new):
    if not path:
        return new
    k = path[0]
    args = list(t.args)
    args[k] = _replace(args[k], path[1:], new)
    return Fn(t.functor, tuple(args))


def replace_at(lit: Literal, pos: tuple, new) -> Literal:
    terms = list(literal_terms(lit))
    terms[pos[0]] = _replace(terms[pos[0]], pos[1:], new)
    a = lit.atom
    if type(a) is Atom:
        return Literal(lit.positive, Atom(a.pred, tuple(terms)))
    return Literal(lit.positive, Equality(terms[0], terms[1]))


def positions(lit: Literal) -> Iterator[tuple]:
    """Non-variable subterm positions, outermost first."""
    for k, t in enumerate(literal_terms(lit)):
        stack = [((k,), t)]
        while stack:
            path, u = stack.pop()
            if type(u) is Var:
                continue
            yield path, u
            for m in range(len(u.args) - 1, -1, -1):
                stack.append((path + (m,), u.args[m]))


def paramodulate(src: tuple, dst: tuple, i: int, side: int, j: int,
                 pos: tuple) -> Optional[tuple]:
    """Rewrite with equation ``src[i]`` (left-to-right when side is 0)
    at position ``pos`` of literal ``dst[j]``."""
    if not (0 <= i < len(src) and 0 <= j < len(dst)):
        return None
    eq = src[i]
    if not eq.positive or type(eq.atom) is not Equality:
        return None
    dst = rename_literals(dst, APART)
    s_term, t_term = (eq.atom.lhs, eq.atom.rhs) if side == 0 else (eq.atom.rhs, eq.atom.lhs)
    try:
        target = subterm_at(dst[j], pos)
    except (IndexError, AttributeError):
        return None
    if type(target) is Var:
        return None
    s = unify_pairs([(s_term, target)])
    if s is None:
        return None
    rewritten = replace_at(dst[j], pos, t_term)
    rest = src[:i] + src[i + 1:] + dst[:j] + (rewritten,) + dst[j + 1:]
    return canonical_literals(_apply(rest, s))


# ---------------------------------------------------------------------------
# subsumption

def _match_lit(a: Literal, b: Literal, s: dict) -> Optional[dict]:
    if a.positive != b.positive:
        return None
    x, y = a.atom, b.atom
    if type(x) is not type(y):
        return None
    if type(x) is Atom:
        if x.pred != y.pred or len(x.args) != len(y.args):
            return None
        s2 = dict(s)
        for p, t in zip(x.args, y.args):
            if not match(p, t, s2):
                return None
        return s2
    s2 = dict(s)
    if match(x.lhs, y.lhs, s2) and match(x.rhs, y.rhs, s2):
        return s2
    s2 = dict(s)
    if match(x.lhs, y.rhs, s2) and match(x.rhs, y.lhs, s2):
        return s2
    return None


def subsumes(c1: tuple, c2: tuple) -> bool:
    """True iff some substitution maps the literal multiset of c1 into c2."""
    if len(c1) > len(c2):
        return False
    # matching never looks target variables up, so shared names are harmless
    if len(c1) == 1:
        lit = c1[0]
        return any(_match_lit(lit, other, {}) is not None for other in c2)
    if len(c1) == 2:
        a, b = c1
        for m, x in enumerate(c2):
            s = _match_lit(a, x, {})
            if s is None:
                continue
            for n, y in enumerate(c2):
                if n != m and _match_lit(b, y, s) is not None:
                    return True
        return False
    order = sorted(range(len(c1)), key=lambda k: -_lit_size(c1[k]))
    return _subsume(c1, order, 0, c2, [False] * len(c2), {})


def _lit_size(lit: Literal) -> int:
    n = 0
    stack = list(literal_terms(lit))
    while stack:
        t = stack.pop()
        n += 1
        if type(t) is Fn:
            stack.extend(t.args)
    return n


def _subsume(c1, order, k, c2, used, s) -> bool:
    if k == len(order):
        return True
    lit = c1[order[k]]
    for m, other in enumerate(c2):
        if used[m]:
            continue
        s2 = _match_lit(lit, other, s)
        if s2 is None:
            continue
        used[m] = True
        if _subsume(c1, order, k + 1, c2, used, s2):
            return True
        used[m] = False
    return False
