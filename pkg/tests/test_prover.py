import random

import pytest

from zfcprover.clauses import Clause, Literal, clause_formula
from zfcprover.inference import factor, paramodulate, resolve, subsumes
from zfcprover.models import brute_force_model, holds
from zfcprover.proof import check_proof
from zfcprover.prover import ProofState, SearchParams, _problem_symbols, run, saturate
from zfcprover.tptp import parse_formula as P, parse_problem, print_clause


def lits(text):
    """Clause literals from ``a | ~b | ...`` text."""
    out = []
    for part in text.split("|"):
        part = part.strip()
        if "!=" in part:
            l, r = part.split("!=")
            out.append(Literal(False, P(f"{l} = {r}")))
        elif part.startswith("~"):
            out.append(Literal(False, P(part[1:])))
        else:
            out.append(Literal(True, P(part)))
    return tuple(out)


def show(ls):
    return print_clause(ls)


def test_rule_examples():
    assert show(resolve(lits("p(X) | q(X)"), lits("~p(a)"), 0, 0)) == "q(a)"
    assert show(factor(lits("p(X) | p(a)"), 0, 1)) == "p(a)"
    assert show(paramodulate(lits("a = b"), lits("member(a,c)"), 0, 0, 0, (0,))) == "member(b,c)"
    assert resolve(lits("p(X)"), lits("~q(a)"), 0, 0) is None


def test_subsumption_examples():
    assert subsumes(lits("p(X)"), lits("p(a) | q(b)"))
    assert not subsumes(lits("p(a)"), lits("p(X)"))
    c = lits("p(X) | q(X,Y)")
    assert subsumes(c, c)
    # multiset: one literal may not absorb two
    assert not subsumes(lits("p(X) | p(Y)"), lits("p(a)"))


def problem(text):
    return parse_problem(text)


def test_p_not_p():
    r = saturate(problem("fof(a,axiom,p). fof(b,axiom,~p)."))
    assert r.status == "Unsatisfiable"
    assert r.proof.length == 3 and check_proof(r.proof)


def test_resolvent_enqueued():
    state = ProofState(SearchParams(schema_mode="off", unit_simplification=False))
    p = problem("fof(a,axiom,~p(a)). fof(b,axiom,![X]: (p(X) | q(X))).")
    state.params.max_steps = 2
    run(state, p)
    assert any(show(c.literals) == "q(a)" for c in state.clauses.values())


def test_tautology_discarded():
    state = ProofState(SearchParams(schema_mode="off"))
    before = state.stats.tautologies
    assert state.add(Clause(lits("p | ~p"))) is None
    assert state.stats.tautologies == before + 1 and not state.clauses


def test_fragmentary_hook_on_given():
    state = ProofState(SearchParams(schema_mode="fragmentary", max_steps=1))
    run(state, problem("fof(a,axiom,![X]: ~member(X,X))."))
    schema = [c for c in state.clauses.values() if c.origin.rule == "schema_comprehension"]
    # the hook hands over all three; the one containing ~member(X,X) is
    # subsumed by the given clause itself
    assert state.stats.schema_clauses == 3
    assert len(schema) == 2 and state.stats.subsumed >= 1


def test_russell_without_schemas_is_never_a_theorem():
    r = saturate(problem("fof(c,conjecture,? [U] : ! [X] : member(X,U))."),
                 SearchParams(schema_mode="off", timeout=5))
    assert r.status in ("CounterSatisfiable", "ResourceOut")


def test_propositional_terminates():
    rng = random.Random(5)
    for _ in range(15):
        cls = []
        for k in range(rng.randint(2, 7)):
            ls = [("~" if rng.random() < 0.5 else "") + rng.choice("pqrs")
                  for _ in range(rng.randint(1, 3))]
            cls.append(f"fof(c{k},axiom,{' | '.join(ls)}).")
        r = saturate(problem(" ".join(cls)), SearchParams(schema_mode="off", timeout=30))
        assert r.status in ("Satisfiable", "Unsatisfiable")
        if r.proof:
            assert check_proof(r.proof)


def test_age_only_is_fifo():
    state = ProofState(SearchParams(schema_mode="off", age_weight=(1, 0), max_steps=40,
                                    unit_simplification=False))
    picked = []
    original = state.select

    def spy():
        c = original()
        if c is not None:
            picked.append(c.id)
        return c

    state.select = spy
    run(state, problem("fof(a,axiom,![X]: (p(X) | q(f(X)))). fof(b,axiom,![X]: (~p(X) | p(f(X))))."
                       "fof(c,axiom,~q(a))."))
    assert picked == sorted(picked) and len(picked) > 5


def test_deterministic():
    text = open(__file__.replace("test_prover.py", "../src/zfcprover/data/suite/zfc0/empty_subset.p")).read()
    runs = []
    for _ in range(2):
        r = saturate(problem(text), SearchParams(max_steps=150, timeout=120))
        s = r.stats
        runs.append((r.status, s.generated, s.processed, s.subsumed, s.schema_instances,
                     None if r.proof is None else [repr(n) for n in r.proof.ordered_nodes()]))
    assert runs[0] == runs[1]


# ---------------------------------------------------------------------------
# derived-clause soundness against a finite model

PREDS = (("p", 1), ("q", 1), ("r", 2))
TERMS = ("X", "Y", "a", "b", "f(X)", "f(a)")


def random_clause_set(rng: random.Random) -> list:
    out = []
    for _ in range(rng.randint(3, 6)):
        ls = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.15:
                atom = f"{rng.choice(TERMS)} = {rng.choice(TERMS)}"
            else:
                name, n = rng.choice(PREDS)
                atom = f"{name}({','.join(rng.choice(TERMS) for _ in range(n))})"
            ls.append(("~ " if rng.random() < 0.5 else "") + f"({atom})")
        out.append(" | ".join(ls))
    return out


def satisfiable_sets(n: int, seed: int = 1):
    rng = random.Random(seed)
    found = []
    while len(found) < n:
        texts = random_clause_set(rng)
        fs = [P(t) for t in texts]
        model = brute_force_model(fs, 2)
        if model is not None:
            found.append((texts, model))
    return found


def soundness_violations(texts, model, steps=200) -> list:
    src = " ".join(f"fof(c{k},axiom,![X,Y]: ({t}))." for k, t in enumerate(texts))
    p = problem(src)
    state = ProofState(SearchParams(schema_mode="off", max_steps=steps, timeout=60),
                       _problem_symbols(p))
    run(state, p)
    return [c for c in state.clauses.values()
            if c.literals and not holds(model, clause_formula(c.literals))]


def test_derived_clauses_true_in_model():
    for texts, model in satisfiable_sets(5, seed=2):
        assert soundness_violations(texts, model, 100) == []
