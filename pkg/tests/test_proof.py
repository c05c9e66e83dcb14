import random

import pytest

from zfcprover.proof import check_proof
from zfcprover.prover import SearchParams, saturate
from zfcprover.tptp import parse_problem

from mutations import corrupt_schema, flip_literal, mutants, wrong_parent

RUSSELL = "fof(c,conjecture,~ ? [U] : ! [X] : member(X,U))."


@pytest.fixture(scope="module")
def russell():
    r = saturate(parse_problem(RUSSELL), SearchParams(schema_mode="full", timeout=30))
    assert r.status == "Theorem"
    return r.proof


def small_proofs():
    texts = {
        "chain": "fof(a,axiom,p(a)). fof(b,axiom,![X]: (~p(X) | q(f(X)))). "
                 "fof(c,conjecture,?[Y]: q(Y)).",
        "equality": "fof(a,axiom,a = b). fof(b,axiom,p(a)). fof(c,conjecture,p(b)).",
        "factor": "fof(a,axiom,![X,Y]: (p(X) | p(Y))). fof(b,conjecture,p(c)).",
    }
    out = []
    for name, t in texts.items():
        r = saturate(parse_problem(t), SearchParams(schema_mode="off", timeout=10))
        assert r.status == "Theorem", name
        out.append((name, r.proof))
    return out


def test_extracted_proofs_check(russell):
    assert check_proof(russell)
    for _, dag in small_proofs():
        assert check_proof(dag)


def test_russell_shape(russell):
    leaves = russell.schema_leaves("comprehension")
    assert len(leaves) == 1
    sink = russell.nodes[russell.sink]
    assert sink.literals == ()
    # ancestor closure: every node reaches the sink
    reach = {russell.sink}
    stack = [russell.sink]
    while stack:
        for p in russell.nodes[stack.pop()].parents:
            if p not in reach:
                reach.add(p)
                stack.append(p)
    assert reach == set(russell.nodes)


def test_named_mutations(russell):
    inner = next(n for n in russell.ordered_nodes() if n.rule == "resolution" and n.literals)
    assert not check_proof(flip_literal(russell, inner.id))
    leaf = russell.schema_leaves()[0]
    bad = corrupt_schema(russell, leaf.id, 0)
    res = check_proof(bad)
    assert not res and res.node == leaf.id
    assert not check_proof(wrong_parent(russell, inner.id, random.Random(0)))


def test_random_mutations_all_rejected(russell):
    rng = random.Random(3)
    found = list(mutants([("russell", russell)] + small_proofs(), rng))
    assert len(found) >= 10
    for desc, dag in found:
        assert not check_proof(dag), desc
