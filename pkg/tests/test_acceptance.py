"""Acceptance criteria, one PASS/FAIL line each (see the run summary)."""

import math
import random
import time
from pathlib import Path

import pytest

from zfcprover.bench import REFERENCE_RATES, compare_report, RunRecord
from zfcprover.clauses import clause_formula
from zfcprover.cnf import ClausifierOptions, clausify
from zfcprover.inference import factor, resolve
from zfcprover.logic import alpha_equal
from zfcprover.models import find_model
from zfcprover.nbg import translate_problem, strip_sethood
from zfcprover.proof import check_proof
from zfcprover.prover import SearchParams, saturate
from zfcprover.schema import canonical_formula, comprehension_instance
from zfcprover.tptp import parse_file, parse_formula as P, parse_problem, print_formula
from zfcprover.wff import CORE_SIGNATURE, RelevanceContext, WffQueue, enumerate_wffs

from acceptance_log import record
from conftest import DATA, SUITE
from mutations import mutants

ROOT = Path(__file__).resolve().parents[1]

LITERAL_RUSSELL = "fof(russell,conjecture,? [U] : ! [X] : member(X,U))."
NEGATED_RUSSELL = "fof(russell,conjecture,~ ? [U] : ! [X] : member(X,U))."


def russell_run(text):
    t0 = time.monotonic()
    r = saturate(parse_problem(text), SearchParams(schema_mode="full", timeout=10))
    return r, time.monotonic() - t0


def russell_ok(r, elapsed):
    if r.status != "Theorem" or elapsed > 10 or not check_proof(r.proof):
        return False
    leaves = r.proof.schema_leaves("comprehension")
    # phi(x) is compared up to the name of its one free variable
    phi = canonical_formula(leaves[0].detail["phi"])
    return len(leaves) == 1 and alpha_equal(phi, canonical_formula(P("~ member(X,X)")))


# ---------------------------------------------------------------------------
# 1. Russell

def test_russell_hand_refutation():
    """The oracle: five steps from the instance for ~member(X,X) and the
    universal-set witness member(X,u) to the empty clause."""
    inst = comprehension_instance(P("~ member(X,X)"))
    cs = [c.literals for c in clausify(inst.generated)]
    show = lambda c: " | ".join(map(str, c))
    c_keep = next(c for c in cs if len(c) == 2 and all(not l.positive for l in c))
    c_add = next(c for c in cs if len(c) == 3)
    u = tuple(c.literals for c in clausify(P("! [X] : member(X,u)")))[0]
    # member(X,sk(u)) | member(X,X)
    j = next(k for k, l in enumerate(c_add) if not l.positive)
    s1 = resolve(c_add, u, j, 0)
    assert s1 is not None and len(s1) == 2
    s2 = factor(s1, 0, 1)                            # member(sk(u),sk(u))
    s3 = factor(c_keep, 0, 1)                        # ~member(sk(A),sk(A))
    assert len(s2) == 1 and len(s3) == 1, (show(s2), show(s3))
    s4 = resolve(s2, s3, 0, 0)
    assert s4 == ()


@pytest.mark.xfail(strict=True, reason="the conjecture as written is false in the "
                   "one-element model with empty membership; see the next test")
def test_russell_literal_conjecture():
    r, elapsed = russell_run(LITERAL_RUSSELL)
    ok = russell_ok(r, elapsed)
    record("Russell refutation (conjecture exactly as stated, ?[U]: ![X]: member(X,U))", ok,
           f"status {r.status} after {elapsed:.1f} s; not a theorem of ZFC, so a sound "
           "prover cannot prove it")
    assert ok


def test_russell_literal_has_countermodel():
    # the negated literal conjecture together with every comprehension and
    # replacement instance holds in one point with empty membership; check a
    # generous sample of instances
    neg = P("~ ? [U] : ! [X] : member(X,U)")
    from zfcprover.schema import schema_instances
    insts = [i.generated for phi in enumerate_wffs(3) for i in schema_instances(phi)][:200]
    assert find_model([neg] + insts, 1) is not None


def test_russell_refutation():
    r, elapsed = russell_run(NEGATED_RUSSELL)
    ok = russell_ok(r, elapsed)
    detail = f"status {r.status} in {elapsed:.2f} s"
    if r.proof is not None:
        leaves = r.proof.schema_leaves("comprehension")
        detail += f", proof length {r.proof.length}, {len(leaves)} comprehension leaf"
    record("Russell refutation (no universal set, ~?[U]: ![X]: member(X,U))", ok, detail)
    assert ok


# ---------------------------------------------------------------------------
# 2. curated suite

@pytest.mark.slow
def test_curated_suite():
    paths = sorted((SUITE / "zfc0").glob("*.p"))
    assert len(paths) == 12
    solved, bad, rows = 0, [], []
    for path in paths:
        r = saturate(parse_file(str(path)), SearchParams(schema_mode="fragmentary", timeout=60))
        rows.append(f"{path.stem}={r.status}")
        if r.status == "Theorem":
            solved += 1
            if not check_proof(r.proof):
                bad.append(path.stem)
    ok = solved >= 10 and not bad
    record("Curated ZFC0 suite (>=10/12 within 60 s, proofs check)", ok,
           f"{solved}/12 solved; failing checks: {bad or 'none'}; " + ", ".join(rows))
    assert ok


# ---------------------------------------------------------------------------
# 3. template goldens

def test_template_goldens():
    from test_schema import generated_canon, golden_rows
    rows = golden_rows()
    phis = {phi for phi, _, _, _ in rows}
    mism = [phi for phi, kind, inst, canon in rows
            if print_formula_canon(inst) != canon or canon not in generated_canon(phi, kind)]
    ok = len(phis) == 5 and not mism
    record("Schema template goldens (5 phi, byte-for-byte after canonical renaming)", ok,
           f"{len(rows)} instances for {len(phis)} phi; mismatches: {mism or 'none'}")
    assert ok


def print_formula_canon(text):
    from zfcprover.schema import canonical_formula
    return print_formula(canonical_formula(P(text)))


# ---------------------------------------------------------------------------
# 4. clausifier oracle

def test_clausifier_oracle():
    from test_cnf import clause_formulas, formula_corpus, oracle_cases
    t0 = time.monotonic()
    corpus = formula_corpus(50)
    cases = oracle_cases(50)
    checks = disagreements = 0
    for eq in (True, False):
        for th in (1, 100, math.inf):
            opts = ClausifierOptions(th, eq)
            for f, ctx in cases:
                cs = clause_formulas(f, opts)
                for n in (1, 2, 3):
                    checks += 1
                    if (find_model([f] + ctx, n) is None) != (find_model(cs + ctx, n) is None):
                        disagreements += 1
    elapsed = time.monotonic() - t0
    ok = len(corpus) == 50 and disagreements == 0 and elapsed < 300
    record("Clausifier oracle (50 formulas x eq_unfolding x {1,100,inf}, domains 1-3, < 5 min)", ok,
           f"{checks} satisfiability comparisons, {disagreements} disagreements, {elapsed:.0f} s")
    assert ok


# ---------------------------------------------------------------------------
# 5. enumerator fairness

def test_enumerator_fairness():
    import zfcprover.wff as wff
    order = enumerate_wffs(5)
    rank = {f: i for i, f in enumerate(order)}
    q = WffQueue(CORE_SIGNATURE, interleave=5, window=None)
    saved = wff.relevance_score
    # adversarial: relevance always prefers the youngest formula
    wff.relevance_score = lambda f, ctx: rank[f]
    try:
        when = {}
        for call in range(1, 251):
            when.setdefault(rank[q.select_next(RelevanceContext())], call)
    finally:
        wff.relevance_score = saved
    late = [i for i in range(1, 51) if when.get(i - 1, math.inf) > 5 * i]
    q1 = WffQueue(CORE_SIGNATURE, interleave=1)
    same = [q1.select_next(RelevanceContext()) for _ in range(200)] == order[:200]
    ok = not late and same
    record("Enumerator fairness (k=5 bound for i<=50; k=1 order for 200)", ok,
           f"late indices {late or 'none'}; k=1 order {'matches' if same else 'differs'}")
    assert ok


# ---------------------------------------------------------------------------
# 6. soundness on finite models

def test_derived_clause_soundness():
    from test_prover import satisfiable_sets, soundness_violations
    bad = []
    for k, (texts, model) in enumerate(satisfiable_sets(20, seed=9)):
        if soundness_violations(texts, model, 200):
            bad.append(k)
    ok = not bad
    record("Derived-clause soundness (20 satisfiable sets x 200 steps, domain-2 model)", ok,
           f"sets with a false derived clause: {bad or 'none'}")
    assert ok


# ---------------------------------------------------------------------------
# 7. proof checker mutation kill

def test_mutation_kill():
    from test_proof import small_proofs
    sources = [("russell", saturate(parse_problem(NEGATED_RUSSELL),
                                    SearchParams(schema_mode="full", timeout=30)).proof)]
    for name in ("empty_set_exists", "pair_membership", "subset_reflexive", "empty_subset"):
        r = saturate(parse_file(str(SUITE / "zfc0" / f"{name}.p")), SearchParams(timeout=60))
        assert r.status == "Theorem", name
        sources.append((name, r.proof))
    sources += small_proofs()
    assert all(check_proof(d) for _, d in sources)
    found = list(mutants(sources, random.Random(1)))[:20]
    survivors = [desc for desc, dag in found if check_proof(dag)]
    kinds = {desc.split(": ")[1].split(" ")[0] for desc, _ in found}
    ok = len(found) == 20 and not survivors
    record("Proof checker mutation kill (20 single-node mutations)", ok,
           f"{len(found) - len(survivors)}/{len(found)} rejected; kinds {sorted(kinds)}")
    assert ok


# ---------------------------------------------------------------------------
# 8. translator

def test_translator():
    phi = "subclass(X,a)"
    e1 = strip_sethood(P(f"?[X]: (member(X,universal_class) & {phi})")) == P(f"?[X]: {phi}")
    e2 = strip_sethood(P(f"![X]: (member(X,universal_class) => {phi})")) == P(f"![X]: {phi}")
    plain = P("![X]: (member(X,a) => member(X,b))")
    e3 = strip_sethood(plain) == plain
    out, report = translate_problem(parse_file(str(DATA / "nbg.ax")))
    warned = {name for name, _, _ in report.warnings}
    leaks = [af.name for af in out.formulas
             if af.name not in warned and "universal_class" in print_formula(af.formula)]
    ok = e1 and e2 and e3 and not leaks
    record("Translator (three examples; no guard symbols outside warnings on nbg.ax)", ok,
           f"examples {e1, e2, e3}; {len(report.changed)} formulas changed, "
           f"{len(report.dropped)} dropped, {len(report.warnings)} residual warnings, leaks {leaks or 'none'}")
    assert ok


# ---------------------------------------------------------------------------
# 9. non-reproducibility

def test_not_reproducible_statement():
    readme = (ROOT / "README.md").read_text()
    rep = compare_report([RunRecord("p", "zfc", "Theorem", 1, 3)]).text()
    footer = rep.strip().splitlines()[-1]
    ok = ("not reproduced" in footer and all(f"{v}%" in footer for _, v in REFERENCE_RATES)
          and "not reproducible" in readme.lower())
    record("Published solve rates are NOT reproducible (stated, shown as reference only)", ok,
           "report footer labels 67/77/77/72% as reference only; README states the harness "
           "reproduces the methodology on the bundled suite, not the numbers")
    assert ok
