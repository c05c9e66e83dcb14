"""Given-clause saturation with schema instances injected into the search."""

from __future__ import annotations

import heapq
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .clauses import Clause, Origin, clause_formula, is_tautology, literal_terms, variant_key
from .cnf import ClausifierOptions, clausify
from .inference import (
    _match_lit, equality_resolution, factor, paramodulate, positions, resolve, subsumes,
)
from .logic import Equality, FreshSymbols, Not, Var, formula_symbols
from .proof import ProofDag, extract_proof
from .schema import SchemaStore, process_for_schemas, process_formula
from .tptp import Problem
from .wff import CORE_SIGNATURE, RelevanceContext, WffQueue, extended_signature

log = logging.getLogger(__name__)

SCHEMA_MODES = ("off", "fragmentary", "full")


@dataclass
class SearchParams:
    age_weight: tuple = (1, 5)
    timeout: float = 60.0
    max_clauses: int = 1_000_000
    max_steps: Optional[int] = None
    schema_mode: str = "fragmentary"
    clausifier: ClausifierOptions = field(default_factory=ClausifierOptions)
    schema_interval: int = 10
    max_schema_instances: int = 5000
    schema_on_generated: bool = False
    wff_window: Optional[int] = 256
    wff_interleave: int = 5
    wff_signature: str = "extended"
    goal_weight: float = 0.8
    depth_penalty: float = 3.0
    unit_simplification: bool = True
    schema_weight: float = 1.5

    def __post_init__(self) -> None:
        a, w = self.age_weight
        if a < 0 or w < 0 or a + w < 1:
            raise ValueError("age:weight ratio needs a + w >= 1")
        if self.schema_mode not in SCHEMA_MODES:
            raise ValueError(f"schema mode must be one of {SCHEMA_MODES}")
        if self.schema_interval < 1:
            raise ValueError("schema interval must be >= 1")


@dataclass
class Statistics:
    generated: int = 0
    processed: int = 0
    subsumed: int = 0
    tautologies: int = 0
    simplified: int = 0
    schema_instances: int = 0
    schema_clauses: int = 0
    wffs_selected: int = 0
    steps: int = 0
    elapsed: float = 0.0


class SaturationResult(NamedTuple):
    status: str
    proof: Optional[ProofDag]
    stats: Statistics


def _key(lit) -> tuple:
    a = lit.atom
    return (lit.positive, "=" if type(a) is Equality else a.pred)


def _depth(t) -> int:
    if type(t) is Var or not t.args:
        return 0
    return 1 + max(_depth(a) for a in t.args)


def nesting_depth(literals) -> int:
    """Deepest nesting of function applications (constants count 0)."""
    return max((_depth(t) for l in literals for t in literal_terms(l)), default=0)


def _top(t):
    return None if type(t) is Var else t.functor


def _unit_key(lit) -> tuple:
    a = lit.atom
    if type(a) is Equality:
        tops = tuple(sorted((_top(a.lhs), _top(a.rhs)), key=lambda x: (x is not None, x or "")))
        return (lit.positive, "=") + tops
    return (lit.positive, a.pred) + tuple(_top(t) for t in a.args)


def _lookup_keys(lit) -> set:
    """Index keys of every unit that could match ``lit``: each argument slot
    holds either a variable or the target's own top symbol."""
    head = _unit_key(lit)
    combos = [()]
    for top in head[2:]:
        combos = [c + (x,) for c in combos for x in {None, top}]
    if head[1] == "=":
        return {head[:2] + tuple(sorted(c, key=lambda x: (x is not None, x or ""))) for c in combos}
    return {head[:2] + c for c in combos}


class _Refutation(Exception):
    def __init__(self, cid: int) -> None:
        self.cid = cid


class _OutOfResources(Exception):
    pass


class ProofState:
    """Processed and unprocessed clauses plus everything the schema hooks own."""

    def __init__(self, params: SearchParams, reserved=frozenset()) -> None:
        self.params = params
        self.clauses: dict = {}
        self.processed: set = set()
        self.unprocessed: set = set()
        self._by_weight: list = []
        self._by_age: list = []
        self._picks = 0
        self._priority: list = []      # FIFO: input clauses, then enumerator instances
        self.next_id = 0
        self.lit_index: dict = {}      # (positive, symbol) -> [(cid, lit idx)]
        self.unit_index: dict = {}     # unit key -> [cid]
        self.cut_index: dict = {}      # unit key -> [(cid, lit idx)], units and binaries
        self.nonunits: set = set()
        self.into_index: dict = {}     # functor -> [(cid, lit idx, position)]
        self.from_index: dict = {}     # functor -> [(cid, lit idx, side)]
        self.keys_of: dict = {}
        self.level: dict = {}          # id -> schema nesting level (absent = 0)
        self._schema_level = 1
        self.seen: set = set()
        self.reserved = frozenset(reserved)
        self.fresh = FreshSymbols(reserved=self.reserved)
        self.store = SchemaStore(cap=params.max_schema_instances)
        self.wffs: Optional[WffQueue] = None
        self.relevance = RelevanceContext()
        self._pending_symbols: Counter = Counter()
        self.stats = Statistics()
        self.has_equality = False
        self.deadline = float("inf")
        self.result: Optional[SaturationResult] = None

    # -- bookkeeping -----------------------------------------------------
    def add(self, c: Clause) -> Optional[Clause]:
        """Register a new clause in the unprocessed set unless redundant.

        Literals refuted by a processed unit are resolved away first; the
        intermediate clauses are kept (unqueued) so proofs stay checkable.
        """
        while True:
            lits = c.literals
            if is_tautology(lits):
                self.stats.tautologies += 1
                return None
            key = variant_key(lits)
            if key in self.seen:
                return None
            if self._unit_subsumed(lits):
                self.stats.subsumed += 1
                return None
            cut = self._unit_cut(lits) if self.params.unit_simplification else None
            self.seen.add(key)
            self._register(c)
            if cut is None:
                break
            i, uid, j, flip = cut
            detail = {"i": i, "j": j, "flip": True} if flip else {"i": i, "j": j}
            c = Clause(resolve(lits, self.clauses[uid].literals, i, j, flip),
                       Origin("resolution", (c.id, uid), detail),
                       goal=c.goal or self.clauses[uid].goal)
            self.stats.simplified += 1
        if not c.literals:
            raise _Refutation(c.id)
        self.unprocessed.add(c.id)
        if len(c.literals) <= 2:
            for j, lit in enumerate(c.literals):
                key = _unit_key(lit)
                # an all-variable literal of a binary clause matches nearly
                # everything and rarely yields a cut
                if len(c.literals) == 1 or any(x is not None for x in key[2:]):
                    self.cut_index.setdefault(key, []).append((c.id, j))
        p = self.params
        w = c.weight * (p.goal_weight if c.goal else 1.0)
        lv = self.level.get(c.id, 0)
        if lv:
            w *= p.schema_weight ** lv
        if p.depth_penalty:
            w += p.depth_penalty * max(0, nesting_depth(lits) - 1)
        heapq.heappush(self._by_weight, (w, c.id))
        heapq.heappush(self._by_age, c.id)
        if len(self.clauses) >= self.params.max_clauses:
            raise _OutOfResources()
        return c

    def _register(self, c: Clause) -> None:
        c.id = self.next_id
        c.age = self.next_id
        self.next_id += 1
        self.clauses[c.id] = c
        o = c.origin
        if o.rule.startswith("schema_"):
            self.level[c.id] = self._schema_level
        else:
            lv = max((self.level.get(q, 0) for q in o.parents), default=0)
            if lv:
                self.level[c.id] = lv
        if not self.has_equality and any(type(l.atom) is Equality for l in c.literals):
            self.has_equality = True

    def _unit_cut(self, lits) -> Optional[tuple]:
        """(literal index, clause id, its literal index, flip) of a resolution
        with a processed unit or binary clause whose resolvent subsumes
        ``lits`` (so the resolvent can stand in for it)."""
        for i, lit in enumerate(lits):
            comp = lit.negate()
            flipped = lits[:i] + lits[i + 1:]
            flips = (False, True) if type(lit.atom) is Equality else (False,)
            for k in _lookup_keys(comp):
                for did, j in self.cut_index.get(k, ()):
                    if did not in self.processed and did not in self.unprocessed:
                        continue
                    d = self.clauses[did].literals
                    m = _match_lit(d[j], comp, {})
                    if m is None:
                        continue
                    if len(d) == 2 and not any(_match_lit(d[1 - j], l2, m) is not None
                                               for l2 in flipped):
                        continue
                    for flip in flips:
                        r = resolve(lits, d, i, j, flip)
                        if r is not None and len(r) < len(lits) and subsumes(r, lits):
                            return i, did, j, flip
        return None

    def _unit_subsumed(self, lits) -> bool:
        for lit in lits:
            for k in _lookup_keys(lit):
                for cid in self.unit_index.get(k, ()):
                    if cid in self.processed and subsumes(self.clauses[cid].literals, (lit,)):
                        return True
        return False

    def select(self) -> Optional[Clause]:
        while self._priority:
            cid = self._priority.pop(0)
            if cid in self.unprocessed:
                self.unprocessed.discard(cid)
                return self.clauses[cid]
        a, w = self.params.age_weight
        while self.unprocessed:
            use_age = (self._picks % (a + w)) < a
            heap = self._by_age if use_age else self._by_weight
            if not heap:
                heap = self._by_weight if use_age else self._by_age
            item = heapq.heappop(heap)
            cid = item if type(item) is int else item[1]
            if cid in self.unprocessed:
                self._picks += 1
                self.unprocessed.discard(cid)
                return self.clauses[cid]
        return None

    def _index(self, c: Clause) -> None:
        cid = c.id
        keys = set()
        for i, lit in enumerate(c.literals):
            k = _key(lit)
            keys.add(k)
            self.lit_index.setdefault(k, []).append((cid, i))
            for pos, t in positions(lit):
                self.into_index.setdefault(t.functor, []).append((cid, i, pos))
            if lit.positive and type(lit.atom) is Equality:
                for side, s in enumerate((lit.atom.lhs, lit.atom.rhs)):
                    if type(s) is not Var:
                        self.from_index.setdefault(s.functor, []).append((cid, i, side))
        self.keys_of[cid] = frozenset(keys)
        if len(c.literals) == 1:
            self.unit_index.setdefault(_unit_key(c.literals[0]), []).append(cid)
        else:
            self.nonunits.add(cid)
        self.processed.add(cid)

    def _forward_subsumed(self, c: Clause) -> bool:
        lits = c.literals
        if self._unit_subsumed(lits):
            return True
        keys = {_key(l) for l in lits}
        for cid in self.nonunits:
            if cid in self.processed and len(self.clauses[cid].literals) <= len(lits) \
                    and self.keys_of[cid] <= keys \
                    and subsumes(self.clauses[cid].literals, lits):
                return True
        return False

    def _backward_subsume(self, c: Clause) -> None:
        lits = c.literals
        first = _key(lits[0])
        cands = {cid for cid, _ in self.lit_index.get(first, ()) if cid in self.processed}
        for cid in cands:
            other = self.clauses[cid].literals
            if len(other) >= len(lits) and subsumes(lits, other):
                self.processed.discard(cid)
                self.nonunits.discard(cid)
                self.stats.subsumed += 1

    # -- inference generation --------------------------------------------
    def _emit(self, lits, rule: str, parents: tuple, detail: dict) -> None:
        if lits is None:
            return
        self.stats.generated += 1
        goal = any(self.clauses[p].goal for p in parents)
        c = self.add(Clause(lits, Origin(rule, parents, detail), goal=goal))
        if c is not None and self.params.schema_on_generated and self.params.schema_mode != "off":
            self._schema_from_clause(c)

    def _check_time(self) -> None:
        if time.monotonic() > self.deadline:
            raise _OutOfResources()

    def generate(self, g: Clause) -> None:
        gl = g.literals
        gid = g.id
        n = len(gl)
        for i in range(n):
            for j in range(i + 1, n):
                if gl[i].positive == gl[j].positive and _key(gl[i]) == _key(gl[j]):
                    self._emit(factor(gl, i, j), "factoring", (gid,), {"i": i, "j": j})
                    if type(gl[i].atom) is Equality:
                        self._emit(factor(gl, i, j, True), "factoring", (gid,),
                                   {"i": i, "j": j, "flip": True})
            if not gl[i].positive and type(gl[i].atom) is Equality:
                self._emit(equality_resolution(gl, i), "equality_resolution", (gid,), {"i": i})
        self._check_time()
        for i, lit in enumerate(gl):
            pos, sym = _key(lit)
            for cid, j in list(self.lit_index.get((not pos, sym), ())):
                if cid not in self.processed:
                    continue
                other = self.clauses[cid].literals
                self._emit(resolve(gl, other, i, j), "resolution", (gid, cid), {"i": i, "j": j})
                if sym == "=":
                    self._emit(resolve(gl, other, i, j, True), "resolution", (gid, cid),
                               {"i": i, "j": j, "flip": True})
        self._check_time()
        # given as the equation
        for i, lit in enumerate(gl):
            if not (lit.positive and type(lit.atom) is Equality):
                continue
            for side, s in enumerate((lit.atom.lhs, lit.atom.rhs)):
                if type(s) is Var:
                    continue
                for cid, j, pos in list(self.into_index.get(s.functor, ())):
                    if cid not in self.processed:
                        continue
                    self._emit(paramodulate(gl, self.clauses[cid].literals, i, side, j, pos),
                               "paramodulation", (gid, cid),
                               {"i": i, "side": side, "j": j, "pos": pos})
            self._check_time()
        # given as the clause rewritten
        for j, lit in enumerate(gl):
            for pos, t in positions(lit):
                for cid, i, side in list(self.from_index.get(t.functor, ())):
                    if cid not in self.processed or cid == gid:
                        continue
                    self._emit(paramodulate(self.clauses[cid].literals, gl, i, side, j, pos),
                               "paramodulation", (cid, gid),
                               {"i": i, "side": side, "j": j, "pos": pos})
        self._check_time()

    # -- schema hooks ----------------------------------------------------
    def _schema_from_clause(self, c: Clause) -> None:
        if self.store.full or c.is_empty:
            return
        before = self.store.count
        new = process_for_schemas(c, self.store, self.params.clausifier, self.fresh)
        self._schema_level = self.level.get(c.id, 0) + 1
        self._add_schema_clauses(new, before)

    def _add_schema_clauses(self, new: list, before: int) -> int:
        self.stats.schema_instances += self.store.count - before
        added = 0
        for sc in new:
            self.stats.schema_clauses += 1
            if self.add(sc) is not None:
                added += 1
        return added

    def schema_from_wff(self) -> int:
        """Select one enumerated formula and add its instances; returns the
        number of clauses added."""
        if self.wffs is None or self.store.full:
            return 0
        self.relevance.note_processed(self._pending_symbols.elements())
        self._pending_symbols.clear()
        phi = self.wffs.select_next(self.relevance)
        self.stats.wffs_selected += 1
        before = self.store.count
        origin = f"wff{len(self.wffs.selected)}"
        new = process_formula(phi, self.store, self.params.clausifier, self.fresh, origin)
        self._schema_level = 1
        added = self._add_schema_clauses(new, before)
        # enumerator instances are few and cheap to try, so they jump the queue
        self._priority.extend(c.id for c in new if c.id in self.unprocessed)
        return added

    # -- the loop --------------------------------------------------------
    def given_clause_step(self) -> bool:
        """One iteration; False when there is nothing left to do."""
        p = self.params
        g = self.select()
        if g is None:
            if p.schema_mode == "full" and not self.store.full:
                while not self.unprocessed and not self.store.full:
                    self._check_time()
                    self.schema_from_wff()
                return True
            return False
        self.stats.steps += 1
        if self._forward_subsumed(g):
            self.stats.subsumed += 1
        else:
            self._backward_subsume(g)
            self._index(g)
            self.stats.processed += 1
            self._pending_symbols.update(formula_symbols(clause_formula(g.literals)))
            self.generate(g)
            if p.schema_mode == "fragmentary" and not p.schema_on_generated:
                self._schema_from_clause(g)
        if p.schema_mode == "full" and self.stats.steps % p.schema_interval == 0:
            self.schema_from_wff()
        return True


def initial_clauses(problem: Problem, state: ProofState) -> list:
    """Clausify the problem; the conjecture is negated first."""
    out = []
    opts = state.params.clausifier
    for af in problem.formulas:
        f = Not(af.formula) if af.role == "conjecture" else af.formula
        goal = af.role in ("conjecture", "negated_conjecture")
        start = state.fresh.counter
        for c in clausify(f, opts, state.fresh):
            c.origin = Origin("input", (), {
                "formula": af.name, "role": af.role, "source": af.source,
                "clausified": f, "fresh_start": start, "options": opts,
            })
            c.goal = goal
            out.append(c)
    return out


def _problem_symbols(problem: Problem) -> frozenset:
    return frozenset(name for name, _ in problem.symbols.symbols())


def saturate(problem: Problem, params: Optional[SearchParams] = None) -> SaturationResult:
    params = params or SearchParams()
    state = ProofState(params, _problem_symbols(problem))
    return run(state, problem)


def run(state: ProofState, problem: Problem) -> SaturationResult:
    params = state.params
    t0 = time.monotonic()
    state.deadline = t0 + params.timeout
    has_conjecture = problem.conjecture is not None
    goal_formulas = []
    status = "GaveUp"
    refutation = None
    try:
        for c in initial_clauses(problem, state):
            if state.add(c) is not None:
                # the input is processed before any derived clause
                state._priority.append(c.id)
            if c.goal:
                goal_formulas.append(clause_formula(c.literals) if c.literals else None)
        if params.schema_mode == "full":
            sig = CORE_SIGNATURE if params.wff_signature == "core" else extended_signature(problem.symbols)
            state.wffs = WffQueue(sig, params.wff_interleave, params.wff_window)
            state.relevance = RelevanceContext.from_formulas(f for f in goal_formulas if f is not None)
        while True:
            if params.max_steps is not None and state.stats.steps >= params.max_steps:
                status = "ResourceOut"
                break
            state._check_time()
            if not state.given_clause_step():
                complete = params.schema_mode == "off" and not state.has_equality
                if complete:
                    status = "CounterSatisfiable" if has_conjecture else "Satisfiable"
                else:
                    status = "GaveUp"
                break
    except _Refutation as r:
        refutation = r.cid
        status = "Theorem" if has_conjecture else "Unsatisfiable"
    except _OutOfResources:
        status = "ResourceOut"
    state.stats.elapsed = time.monotonic() - t0
    state.stats.schema_instances = state.store.count
    proof = None
    if refutation is not None:
        proof = extract_proof(state.clauses, refutation, state.reserved)
    log.debug("status %s after %d steps", status, state.stats.steps)
    state.result = SaturationResult(status, proof, state.stats)
    return state.result
