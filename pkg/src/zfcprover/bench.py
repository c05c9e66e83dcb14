"""Run problem suites under several configurations and compare the results.

Proof length is the number of clause nodes in the refutation DAG, input
and schema clauses included.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional

from .prover import SearchParams, saturate
from .tptp import default_resolver, parse_file, parse_problem

AXIOM_SETS = ("zfc0", "nbg")
SOLVED = ("Theorem", "Unsatisfiable")
CSV_COLUMNS = ("problem", "config", "status", "time_ms", "proof_len", "generated",
               "processed", "schema_used")

# Published solve rates on selected TPTP SET problems (E --auto); shown for
# orientation only, the bundled suite is different and much smaller.
REFERENCE_RATES = (("ZFC", 67), ("ZFC-ND", 77), ("NBG", 77), ("NBG-ND", 72))


@dataclass
class SuiteConfig:
    label: str
    problem_dir: str
    axioms: str = "zfc0"
    params: SearchParams = field(default_factory=SearchParams)
    timeout: Optional[float] = None
    jobs: int = 1
    axiom_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if self.axioms not in AXIOM_SETS:
            raise ValueError(f"axiom set must be one of {AXIOM_SETS}, got {self.axioms!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.timeout is not None:
            self.params = replace(self.params, timeout=self.timeout)

    def validate(self) -> None:
        """Raise unless the axiom file resolves and parses."""
        resolve = default_resolver(self.axiom_dir)
        source, text = resolve(f"{self.axioms}.ax")
        parse_problem(text, resolve, source=source)

    def problems(self) -> list:
        """``DIR/<axioms>/*.p`` when that directory exists, else ``DIR/*.p``."""
        root = Path(self.problem_dir)
        sub = root / self.axioms
        base = sub if sub.is_dir() else root
        return sorted(str(p) for p in base.glob("*.p"))


@dataclass
class RunRecord:
    problem: str
    config: str
    status: str
    time_ms: int
    proof_len: Optional[int] = None
    generated: int = 0
    processed: int = 0
    schema_used: int = 0

    @property
    def solved(self) -> bool:
        return self.status in SOLVED


def run_one(path: str, label: str, params: SearchParams,
            axiom_dir: Optional[str] = None) -> RunRecord:
    name = Path(path).stem
    t0 = time.monotonic()
    try:
        problem = parse_file(path, axiom_dir)
    except (ValueError, OSError):
        return RunRecord(name, label, "Error", int((time.monotonic() - t0) * 1000))
    r = saturate(problem, params)
    ms = int((time.monotonic() - t0) * 1000)
    if r.proof is None:
        return RunRecord(name, label, r.status, ms, None, r.stats.generated, r.stats.processed, 0)
    used = len(r.proof.schema_leaves())
    return RunRecord(name, label, r.status, ms, r.proof.length, r.stats.generated,
                     r.stats.processed, used)


def _task(args) -> RunRecord:
    return run_one(*args)


def run_suite(configs, jobs: Optional[int] = None) -> list:
    """One record per (problem, config). ``configs`` is a SuiteConfig or a
    list of them; ``jobs`` overrides the configs' worker counts."""
    if isinstance(configs, SuiteConfig):
        configs = [configs]
    tasks = []
    for cfg in configs:
        cfg.validate()
        tasks.extend((p, cfg.label, cfg.params, cfg.axiom_dir) for p in cfg.problems())
    n = jobs if jobs is not None else max((c.jobs for c in configs), default=1)
    if n <= 1 or len(tasks) <= 1:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_task, tasks))


# ---------------------------------------------------------------------------
# CSV

def write_csv(records: Iterable[RunRecord], out=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([r.problem, r.config, r.status, r.time_ms,
                    "" if r.proof_len is None else r.proof_len,
                    r.generated, r.processed, r.schema_used])
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


def read_csv(source) -> list:
    """Parse CSV text (or a path to a CSV file) back into records."""
    text = source
    if isinstance(source, Path) or "\n" not in str(source):
        text = Path(source).read_text()
    rows = csv.DictReader(io.StringIO(text))
    out = []
    for row in rows:
        out.append(RunRecord(
            row["problem"], row["config"], row["status"], int(row["time_ms"]),
            int(row["proof_len"]) if row["proof_len"] else None,
            int(row["generated"]), int(row["processed"]), int(row["schema_used"])))
    return out


# ---------------------------------------------------------------------------
# comparison

def family(label: str) -> str:
    """``nbg`` for labels naming the class theory, ``zfc`` otherwise."""
    return "nbg" if "nbg" in label.lower() else "zfc"


@dataclass
class Report:
    totals: dict                 # label -> (solved, total)
    pairs: list                  # (problem, zfc label, nbg label, zfc len, nbg len)

    def percentage(self, label: str) -> float:
        solved, total = self.totals[label]
        return 100.0 * solved / total if total else 0.0

    @property
    def zfc_shorter(self) -> int:
        return sum(1 for p in self.pairs if p[3] < p[4])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("problem", "zfc_config", "nbg_config", "zfc_proof_len", "nbg_proof_len"))
        w.writerows(self.pairs)
        return buf.getvalue()

    def text(self) -> str:
        lines = ["proof length = clause nodes of the refutation DAG, input clauses included", "",
                 "config            solved   total   percent"]
        for label, (solved, total) in self.totals.items():
            lines.append(f"{label:<16} {solved:>7} {total:>7} {self.percentage(label):>8.1f}%")
        lines += ["", "paired proof lengths (problems solved under both)"]
        if self.pairs:
            lines.append("problem                   zfc config  nbg config   zfc   nbg")
            for prob, zl, nl, a, b in self.pairs:
                lines.append(f"{prob:<25} {zl:<11} {nl:<11} {a:>5} {b:>5}")
        else:
            lines.append("(none)")
        lines.append(f"zfc proof strictly shorter: {self.zfc_shorter} of {len(self.pairs)}")
        ref = ", ".join(f"{k} {v}%" for k, v in REFERENCE_RATES)
        lines += ["", "reference only, not reproduced: published solve rates with E --auto "
                  f"on selected TPTP SET problems: {ref}"]
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.text()


def compare_report(records: Iterable[RunRecord], families: Optional[dict] = None) -> Report:
    """Solve rates per config and ZFC/NBG paired proof lengths.

    ``families`` maps config labels to ``zfc`` or ``nbg``; unmapped labels
    are classified by name.
    """
    records = list(records)
    families = families or {}
    fam = lambda label: families.get(label) or family(label)
    totals: dict = {}
    by_key: dict = {}
    for r in records:
        solved, total = totals.get(r.config, (0, 0))
        totals[r.config] = (solved + r.solved, total + 1)
        if r.solved and r.proof_len is not None:
            by_key[(r.problem, r.config)] = r.proof_len
    labels = list(totals)
    zfc = [l for l in labels if fam(l) == "zfc"]
    nbg = [l for l in labels if fam(l) == "nbg"]
    pairs = []
    for prob in sorted({r.problem for r in records}):
        for zl in zfc:
            for nl in nbg:
                a, b = by_key.get((prob, zl)), by_key.get((prob, nl))
                if a is not None and b is not None:
                    pairs.append((prob, zl, nl, a, b))
    return Report(totals, pairs)
