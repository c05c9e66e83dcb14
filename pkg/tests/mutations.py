"""Single-node corruptions of valid proofs, for checker kill tests."""

import copy
import random

from zfcprover.clauses import Literal
from zfcprover.logic import Binary, Quantified
from zfcprover.proof import CLAUSIFICATION, INFERENCE_RULES, SCHEMA_RULES


def _clone(dag):
    return copy.deepcopy(dag)


def flip_literal(dag, nid, k=0):
    d = _clone(dag)
    node = d.nodes[nid]
    ls = list(node.literals)
    ls[k] = Literal(not ls[k].positive, ls[k].atom)
    node.literals = tuple(ls)
    return d


def wrong_parent(dag, nid, rng):
    d = _clone(dag)
    node = d.nodes[nid]
    others = [k for k in d.nodes if k >= 0 and k not in node.parents and k != nid]
    if not others:
        return None
    ps = list(node.parents)
    ps[rng.randrange(len(ps))] = rng.choice(others)
    node.parents = tuple(ps)
    return d


def _weaken(f):
    """Swap the first conjunction in ``f`` for a disjunction."""
    if type(f) is Binary:
        if f.op == "and":
            return Binary("or", f.left, f.right)
        left = _weaken(f.left)
        if left is not f.left:
            return Binary(f.op, left, f.right)
        return Binary(f.op, f.left, _weaken(f.right))
    if type(f) is Quantified:
        return Quantified(f.quantifier, f.var, _weaken(f.body))
    return f


def _requantify(f):
    """Turn the outer universal quantifier into an existential one."""
    if type(f) is Quantified:
        q = "exists" if f.quantifier == "forall" else "forall"
        return Quantified(q, f.var, f.body)
    if type(f) is Binary:
        return Binary(f.op, _requantify(f.left), f.right)
    return f


def corrupt_schema(dag, nid, how):
    d = _clone(dag)
    node = d.nodes[nid]
    node.formula = _weaken(node.formula) if how == 0 else _requantify(node.formula)
    return d


def mutants(dags, rng):
    """Yield ``(description, dag)`` pairs; several per source proof."""
    for name, dag in dags:
        inner = [n for n in dag.ordered_nodes() if n.rule in INFERENCE_RULES and n.literals]
        leaves = [n for n in dag.ordered_nodes() if n.rule == CLAUSIFICATION and n.literals]
        schema = [n for n in dag.ordered_nodes() if n.rule in SCHEMA_RULES]
        if inner:
            n = rng.choice(inner)
            yield f"{name}: flipped literal in c{n.id}", flip_literal(dag, n.id, rng.randrange(len(n.literals)))
        if leaves:
            n = rng.choice(leaves)
            yield f"{name}: flipped literal in input c{n.id}", flip_literal(dag, n.id)
        two = [n for n in dag.ordered_nodes() if n.rule in INFERENCE_RULES and len(n.parents) == 2]
        if two:
            n = rng.choice(two)
            m = wrong_parent(dag, n.id, rng)
            if m is not None:
                yield f"{name}: wrong parent of c{n.id}", m
        for n in schema:
            yield f"{name}: weakened schema leaf f{-n.id}", corrupt_schema(dag, n.id, 0)
            yield f"{name}: requantified schema leaf f{-n.id}", corrupt_schema(dag, n.id, 1)
