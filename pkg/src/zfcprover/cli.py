"""Command line entry point: prove, translate, bench."""

from __future__ import annotations

import argparse
import logging
import shlex
import sys
from pathlib import Path
from typing import Optional

from .cnf import ClausifierOptions
from .prover import SCHEMA_MODES, SearchParams, saturate
from .tptp import print_problem, print_result

EXIT = {"Theorem": 0, "Unsatisfiable": 0, "Satisfiable": 1, "CounterSatisfiable": 1,
        "ResourceOut": 2, "GaveUp": 2, "Error": 3}


def _ratio(text: str) -> tuple:
    try:
        a, w = text.split(":")
        return int(a), int(w)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:W, got {text!r}")


def _threshold(text: str) -> float:
    if text.lower() in ("inf", "infinity", "none"):
        return float("inf")
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threshold must be >= 1")
    return n


def add_search_options(p: argparse.ArgumentParser) -> None:
    d = SearchParams()
    p.add_argument("--schema-mode", choices=SCHEMA_MODES, default=d.schema_mode)
    p.add_argument("--timeout", type=float, default=d.timeout, help="seconds")
    p.add_argument("--age-weight", type=_ratio, default=d.age_weight, metavar="A:W")
    p.add_argument("--definitional-cnf", type=_threshold, default=100, metavar="N",
                   help="clause-count threshold for definitions (inf disables)")
    eq = p.add_mutually_exclusive_group()
    eq.add_argument("--no-eq-unfolding", dest="eq_unfolding", action="store_false")
    eq.add_argument("--eq-unfolding", dest="eq_unfolding", action="store_true")
    p.set_defaults(eq_unfolding=False)
    p.add_argument("--no-schema-definitions", dest="schema_definitions", action="store_false",
                   help="never introduce definitions while clausifying schema instances")
    p.add_argument("--schema-interval", type=int, default=d.schema_interval, metavar="L")
    p.add_argument("--max-schema-instances", type=int, default=d.max_schema_instances,
                   metavar="N")
    p.add_argument("--schema-on-generated", action="store_true",
                   help="fragmentary hook on every generated clause, not only given ones")
    p.add_argument("--wff-window", type=int, default=d.wff_window, metavar="W")
    p.add_argument("--wff-interleave", type=int, default=d.wff_interleave, metavar="K")
    p.add_argument("--wff-signature", choices=("core", "extended"), default=d.wff_signature)
    p.add_argument("--max-clauses", type=int, default=d.max_clauses)


def params_from(ns: argparse.Namespace) -> SearchParams:
    opts = ClausifierOptions(ns.definitional_cnf, ns.eq_unfolding, ns.schema_definitions)
    return SearchParams(
        age_weight=ns.age_weight, timeout=ns.timeout, max_clauses=ns.max_clauses,
        schema_mode=ns.schema_mode, clausifier=opts, schema_interval=ns.schema_interval,
        max_schema_instances=ns.max_schema_instances,
        schema_on_generated=ns.schema_on_generated, wff_window=ns.wff_window,
        wff_interleave=ns.wff_interleave, wff_signature=ns.wff_signature)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zfcprover")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("prove", help="run the prover on a TPTP FOF problem")
    pr.add_argument("file")
    pr.add_argument("--proof-out", metavar="PATH")
    pr.add_argument("--axiom-dir", metavar="DIR")
    add_search_options(pr)

    tr = sub.add_parser("translate", help="strip sethood guards from a class-theory problem")
    tr.add_argument("input")
    tr.add_argument("--out", required=True)
    tr.add_argument("--guard", action="append", metavar="SYMBOL",
                    help="guard atom over T, e.g. 'member(T,universal_class)', or a "
                         "unary predicate name; repeatable, replaces the defaults")
    tr.add_argument("--axiom-dir", metavar="DIR")

    be = sub.add_parser("bench", help="run a problem directory under several configurations")
    be.add_argument("dir")
    be.add_argument("--config", action="append", required=True, metavar="LABEL=AXIOMS:MODE:FLAGS",
                    help="FLAGS are prove options separated by commas or spaces")
    be.add_argument("--timeout", type=float, default=60.0)
    be.add_argument("--jobs", type=int, default=1)
    be.add_argument("--csv", metavar="OUT")
    be.add_argument("--axiom-dir", metavar="DIR")
    return ap


def parse_config(spec: str, timeout: float, axiom_dir: Optional[str], problem_dir: str):
    from .bench import SuiteConfig

    label, sep, rest = spec.partition("=")
    if not sep or not label:
        raise ValueError(f"config must look like LABEL=AXIOMS:MODE:FLAGS, got {spec!r}")
    parts = rest.split(":", 2)
    axioms = parts[0] or "zfc0"
    mode = parts[1] if len(parts) > 1 and parts[1] else "fragmentary"
    flags = shlex.split(parts[2].replace(",", " ")) if len(parts) > 2 else []
    p = argparse.ArgumentParser(prog=f"--config {label}", add_help=False)
    add_search_options(p)
    ns = p.parse_args(flags + ["--schema-mode", mode, "--timeout", str(timeout)])
    return SuiteConfig(label, problem_dir, axioms, params_from(ns), axiom_dir=axiom_dir)


def _prove(ns) -> int:
    from .tptp import parse_file

    try:
        problem = parse_file(ns.file, ns.axiom_dir)
        params = params_from(ns)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        print(print_result("Error", None, Path(ns.file).stem))
        return 3
    r = saturate(problem, params)
    name = problem.name or Path(ns.file).stem
    print(f"% SZS status {r.status} for {name}")
    if r.proof is not None:
        listing = print_result(r.status, r.proof, name)
        if ns.proof_out:
            Path(ns.proof_out).write_text(listing + "\n")
        else:
            print("\n".join(listing.splitlines()[1:]))
    s = r.stats
    print(f"% steps {s.steps}, processed {s.processed}, generated {s.generated}, "
          f"schema instances {s.schema_instances}, {s.elapsed:.2f} s", file=sys.stderr)
    return EXIT[r.status]


def _translate(ns) -> int:
    from .nbg import DEFAULT_GUARDS, SethoodConfig, translate_problem
    from .tptp import parse_file

    try:
        problem = parse_file(ns.input, ns.axiom_dir)
        cfg = SethoodConfig.from_strings(ns.guard or DEFAULT_GUARDS)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    out, report = translate_problem(problem, cfg)
    Path(ns.out).write_text(print_problem(out))
    print(report, file=sys.stderr)
    return 0


def _bench(ns) -> int:
    from .bench import compare_report, run_suite, write_csv

    try:
        configs = [parse_config(c, ns.timeout, ns.axiom_dir, ns.dir) for c in ns.config]
        records = run_suite(configs, jobs=ns.jobs)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    if ns.csv:
        write_csv(records, ns.csv)
    print(compare_report(records).text(), end="")
    return 0


def main(argv: Optional[list] = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING)
    return {"prove": _prove, "translate": _translate, "bench": _bench}[ns.command](ns)


if __name__ == "__main__":
    sys.exit(main())
