import subprocess
import sys
from pathlib import Path

import pytest

from zfcprover.bench import (
    RunRecord, SuiteConfig, compare_report, read_csv, run_suite, write_csv,
)
from zfcprover.cli import main, parse_config
from zfcprover.prover import SearchParams

from conftest import DATA

FIXTURE = {
    "solved_a.p": "fof(a,axiom,p). fof(c,conjecture,p).",
    "solved_b.p": "fof(a,axiom,![X]: (q(X) => r(X))). fof(b,axiom,q(k)). fof(c,conjecture,r(k)).",
    "solved_c.p": "fof(a,axiom,a = b). fof(b,axiom,s(a)). fof(c,conjecture,s(b)).",
    "open_d.p": "fof(a,axiom,![X]: p(f(X))). fof(c,conjecture,q).",
    "broken_e.p": "fof(a,axiom,p &).",
}


@pytest.fixture
def fixture_dir(tmp_path):
    for name, text in FIXTURE.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def quick(label="zfc", axioms="zfc0", directory=".", **kw):
    return SuiteConfig(label, str(directory), axioms, SearchParams(schema_mode="off", timeout=2, **kw))


def test_solve_percentage_hand_count(fixture_dir):
    recs = run_suite(quick(directory=fixture_dir))
    assert len(recs) == 5
    status = {r.problem: r.status for r in recs}
    assert status["broken_e"] == "Error"
    assert status["open_d"] in ("CounterSatisfiable", "ResourceOut", "GaveUp")
    rep = compare_report(recs)
    assert rep.totals["zfc"] == (3, 5)
    assert rep.percentage("zfc") == pytest.approx(60.0)
    for r in recs:
        assert (r.proof_len is not None) == r.solved


def test_two_by_two_and_pairs(fixture_dir):
    for name in ("open_d.p", "broken_e.p", "solved_c.p"):
        (fixture_dir / name).unlink()
    recs = run_suite([quick("zfc-a", directory=fixture_dir), quick("nbg-a", directory=fixture_dir)])
    assert len(recs) == 4
    rep = compare_report(recs)
    assert len(rep.pairs) == 2 and rep.zfc_shorter == 0
    text = rep.text()
    assert "reference only" in text and "67%" in text


def test_no_common_problems():
    recs = [RunRecord("x", "zfc", "Theorem", 1, 4), RunRecord("x", "nbg", "ResourceOut", 1)]
    rep = compare_report(recs)
    assert rep.pairs == [] and rep.percentage("nbg") == 0.0
    assert "(none)" in rep.text()


def test_empty_dir(tmp_path):
    assert run_suite(quick(directory=tmp_path)) == []


def test_csv_round_trip(fixture_dir, tmp_path):
    recs = run_suite(quick(directory=fixture_dir))
    out = tmp_path / "r.csv"
    text = write_csv(recs, out)
    assert text.splitlines()[0] == "problem,config,status,time_ms,proof_len,generated,processed,schema_used"
    assert read_csv(out) == recs
    assert read_csv(text) == recs


def test_parallel_matches_serial(fixture_dir):
    serial = run_suite(quick(directory=fixture_dir), jobs=1)
    parallel = run_suite(quick(directory=fixture_dir), jobs=2)
    strip = lambda rs: sorted((r.problem, r.config, r.status, r.proof_len, r.generated, r.processed)
                              for r in rs)
    # time-limited runs may stop at different points; compare the decided ones
    decided = lambda rs: [x for x in strip(rs) if x[2] != "ResourceOut"]
    assert decided(serial) == decided(parallel)


def test_bad_axiom_set():
    with pytest.raises(ValueError):
        SuiteConfig("x", ".", "zf")


def test_parse_config():
    cfg = parse_config("ZFC-ND=zfc0:fragmentary:--definitional-cnf=inf,--eq-unfolding", 5, None, "d")
    assert cfg.label == "ZFC-ND" and cfg.axioms == "zfc0"
    assert cfg.params.clausifier.definitional_threshold == float("inf")
    assert cfg.params.clausifier.eq_unfolding and cfg.params.timeout == 5
    with pytest.raises(ValueError):
        parse_config("nolabel", 5, None, "d")


# ---------------------------------------------------------------------------
# CLI

def cli(*args):
    return subprocess.run([sys.executable, "-m", "zfcprover.cli", *args],
                          capture_output=True, text=True, timeout=300)


def test_prove_theorem(tmp_path):
    f = tmp_path / "t.p"
    f.write_text(FIXTURE["solved_b.p"])
    r = cli("prove", str(f), "--schema-mode", "off")
    assert r.returncode == 0
    assert r.stdout.splitlines()[0] == "% SZS status Theorem for t"
    assert "SZS output start" in r.stdout
    out = tmp_path / "proof.txt"
    r = cli("prove", str(f), "--proof-out", str(out))
    assert r.returncode == 0 and "cnf(" in out.read_text()


def test_prove_exit_codes(tmp_path):
    f = tmp_path / "s.p"
    f.write_text("fof(a,axiom,p). fof(c,conjecture,q).")
    assert cli("prove", str(f), "--schema-mode", "off").returncode == 1
    g = tmp_path / "bad.p"
    g.write_text("fof(a,axiom,p &).")
    r = cli("prove", str(g))
    assert r.returncode == 3 and "SZS status Error" in r.stdout
    h = tmp_path / "hard.p"
    h.write_text("fof(a,axiom,![X]: (p(X) => p(f(X)))). fof(b,axiom,p(a)). fof(c,conjecture,q).")
    assert cli("prove", str(h), "--timeout", "1", "--schema-mode", "off").returncode == 2


def test_translate_cli(tmp_path):
    out = tmp_path / "o.p"
    r = cli("translate", str(DATA / "suite" / "nbg" / "subset_reflexive.p"), "--out", str(out))
    assert r.returncode == 0 and "changed" in r.stderr
    assert "universal_class" not in out.read_text().replace("subclass(X,universal_class)", "")


def test_bench_cli(fixture_dir, tmp_path):
    out = tmp_path / "b.csv"
    rc = main(["bench", str(fixture_dir), "--config", "zfc=zfc0:off:", "--config",
               "nbg=zfc0:off:--age-weight=1:1", "--timeout", "2", "--csv", str(out)])
    assert rc == 0
    assert len(read_csv(out)) == 10
