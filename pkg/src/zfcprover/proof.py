"""Refutation DAGs: extraction from a finished search and independent checking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .clauses import canonical_literals
from .cnf import ClausifierOptions, clausify, _symbol_names
from .inference import equality_resolution, factor, paramodulate, resolve
from .logic import FreshSymbols
from .schema import check_schema_formula

INFERENCE_RULES = ("resolution", "factoring", "paramodulation", "equality_resolution")
SCHEMA_RULES = ("schema_comprehension", "schema_replacement")
FORMULA_RULES = ("input",) + SCHEMA_RULES
CLAUSIFICATION = "clausification"


@dataclass
class ProofNode:
    """A clause node, or (for leaves) the formula a group of clauses came from.

    Formula leaves carry negative ids and keep the formula in ``formula``;
    their clauses hang below them as ``clausification`` steps.
    """
    id: int
    literals: tuple
    rule: str
    parents: tuple = ()
    detail: dict = field(default_factory=dict)
    formula: object = None

    @property
    def is_leaf(self) -> bool:
        return not self.parents


@dataclass
class ProofDag:
    nodes: dict
    sink: int
    reserved: frozenset = frozenset()

    def __len__(self) -> int:
        return self.length

    @property
    def length(self) -> int:
        """Clause nodes, input and schema clauses included; the formula
        nodes above them only record provenance."""
        return sum(1 for k in self.nodes if k >= 0)

    def leaves(self) -> list:
        return [n for n in self.ordered_nodes() if n.is_leaf]

    def schema_leaves(self, kind: Optional[str] = None) -> list:
        rules = SCHEMA_RULES if kind is None else (f"schema_{kind}",)
        return [n for n in self.leaves() if n.rule in rules]

    def ordered_nodes(self) -> list:
        formulas = sorted((k for k in self.nodes if k < 0), reverse=True)
        return [self.nodes[k] for k in formulas] + \
            [self.nodes[k] for k in sorted(k for k in self.nodes if k >= 0)]


def _leaf_formula(origin) -> object:
    d = origin.detail
    return d.get("clausified") if origin.rule == "input" else d.get("generated")


def extract_proof(clauses: dict, empty_id: int, reserved=frozenset()) -> ProofDag:
    """Ancestor closure of the empty clause. ``clauses`` maps id -> Clause.

    Clauses read off one formula share a single formula leaf.
    """
    nodes = {}
    leaf_ids: dict = {}
    stack = [empty_id]
    while stack:
        cid = stack.pop()
        if cid in nodes:
            continue
        c = clauses[cid]
        o = c.origin
        if o.rule in FORMULA_RULES:
            f = _leaf_formula(o)
            key = (o.rule, o.detail.get("fresh_start"), repr(f))
            fid = leaf_ids.get(key)
            if fid is None:
                fid = leaf_ids[key] = -(len(leaf_ids) + 1)
                nodes[fid] = ProofNode(fid, (), o.rule, (), dict(o.detail), f)
            nodes[cid] = ProofNode(cid, c.literals, CLAUSIFICATION, (fid,))
            continue
        nodes[cid] = ProofNode(cid, c.literals, o.rule, tuple(o.parents), dict(o.detail))
        stack.extend(o.parents)
    return ProofDag(nodes, empty_id, frozenset(reserved))


@dataclass
class CheckResult:
    ok: bool
    node: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _rederive(node: ProofNode, parents: list) -> Optional[tuple]:
    d = node.detail
    rule = node.rule
    if rule == "resolution" and len(parents) == 2:
        return resolve(parents[0], parents[1], d["i"], d["j"], d.get("flip", False))
    if rule == "factoring" and len(parents) == 1:
        return factor(parents[0], d["i"], d["j"], d.get("flip", False))
    if rule == "equality_resolution" and len(parents) == 1:
        return equality_resolution(parents[0], d["i"])
    if rule == "paramodulation" and len(parents) == 2:
        return paramodulate(parents[0], parents[1], d["i"], d["side"], d["j"], tuple(d["pos"]))
    return None


def _topological(dag: ProofDag) -> Optional[list]:
    order = []
    state: dict = {}
    for root in sorted(dag.nodes):
        if root in state:
            continue
        stack = [(root, False)]
        while stack:
            nid, done = stack.pop()
            if done:
                state[nid] = 2
                order.append(nid)
                continue
            if state.get(nid) == 2:
                continue
            if state.get(nid) == 1:
                return None
            state[nid] = 1
            stack.append((nid, True))
            for p in dag.nodes[nid].parents:
                if state.get(p) == 1:
                    return None
                if state.get(p) != 2:
                    stack.append((p, False))
    return order


def check_proof(dag: ProofDag) -> CheckResult:
    """Re-verify every step; the first offending node is reported."""
    if dag.sink not in dag.nodes:
        return CheckResult(False, dag.sink, "sink missing")
    if dag.nodes[dag.sink].literals or dag.nodes[dag.sink].formula is not None:
        return CheckResult(False, dag.sink, "sink is not the empty clause")
    for node in dag.ordered_nodes():
        for p in node.parents:
            if p not in dag.nodes:
                return CheckResult(False, node.id, f"unknown parent {p}")
    order = _topological(dag)
    if order is None:
        return CheckResult(False, dag.sink, "derivation graph has a cycle")
    clausified: dict = {}
    events = []
    for nid in order:
        node = dag.nodes[nid]
        if node.rule in INFERENCE_RULES:
            parents = [dag.nodes[p] for p in node.parents]
            if any(p.formula is not None for p in parents):
                return CheckResult(False, nid, "inference from a formula node")
            try:
                got = _rederive(node, [p.literals for p in parents])
            except (KeyError, TypeError, IndexError):
                got = None
            if got is None or got != canonical_literals(node.literals):
                return CheckResult(False, nid, f"{node.rule} does not reproduce the clause")
            continue
        if node.rule == CLAUSIFICATION:
            if len(node.parents) != 1 or node.parents[0] not in clausified:
                return CheckResult(False, nid, "clausification without a formula parent")
            if canonical_literals(node.literals) not in clausified[node.parents[0]]:
                return CheckResult(False, nid, "clause is not produced by clausification")
            continue
        if node.parents:
            return CheckResult(False, nid, f"leaf rule {node.rule} with parents")
        if node.rule not in FORMULA_RULES:
            return CheckResult(False, nid, f"unknown rule {node.rule}")
        source = node.formula
        if source is None:
            return CheckResult(False, nid, "formula leaf without formula")
        if node.rule in SCHEMA_RULES:
            kind = node.rule[len("schema_"):]
            if not check_schema_formula(kind, source, node.detail.get("phi")):
                return CheckResult(False, nid, "schema formula does not match its template")
        start = node.detail.get("fresh_start", 0)
        opts = node.detail.get("options") or ClausifierOptions()
        out = clausify(source, opts, FreshSymbols(start, dag.reserved))
        clausified[nid] = {canonical_literals(c.literals) for c in out}
        introduced = set()
        for c in out:
            introduced |= _symbol_names_of(c.literals)
        introduced -= _symbol_names(source)
        events.append((start, introduced, _symbol_names(source), nid))
    # fresh symbols of one clausification may only be reused by later ones
    events.sort(key=lambda e: e[0])
    for k, (start, intro, _, nid) in enumerate(events):
        if intro & dag.reserved:
            return CheckResult(False, nid, "fresh symbol clashes with the input signature")
        for start2, intro2, used2, nid2 in events[:k]:
            if intro & intro2:
                return CheckResult(False, nid, "fresh symbols reused across clausifications")
            if intro & used2:
                return CheckResult(False, nid, "fresh symbol occurs in an earlier formula")
    return CheckResult(True)


def _symbol_names_of(literals) -> set:
    from .clauses import clause_formula
    return _symbol_names(clause_formula(literals)) if literals else set()
