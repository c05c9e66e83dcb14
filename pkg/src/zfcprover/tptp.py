"""Reading and writing the TPTP FOF subset, and SZS result listings."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from .logic import (
    Atom, Binary, Equality, Fn, Formula, Not, Quantified, SymbolTable, Truth, Var,
    FALSE, TRUE,
)

ROLES = ("axiom", "hypothesis", "definition", "conjecture", "negated_conjecture")
SZS_STATUSES = ("Theorem", "Unsatisfiable", "Satisfiable", "CounterSatisfiable",
                "ResourceOut", "GaveUp", "Error")
AXIOM_DIR_ENV = "ZFCPROVER_AXIOMS"


class TPTPSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "") -> None:
        where = f"{source or '<input>'}:{line}:{column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column
        self.source = source


class IncludeError(ValueError):
    pass


@dataclass
class AnnotatedFormula:
    name: str
    role: str
    formula: Formula
    source: str = ""
    line: int = 0


@dataclass
class Problem:
    formulas: list = field(default_factory=list)
    symbols: SymbolTable = field(default_factory=SymbolTable)
    name: str = ""

    @property
    def conjecture(self) -> Optional[AnnotatedFormula]:
        for af in self.formulas:
            if af.role == "conjecture":
                return af
        return None

    def add(self, af: AnnotatedFormula) -> None:
        if any(other.name == af.name for other in self.formulas):
            raise TPTPSyntaxError(f"duplicate formula name {af.name!r}", af.line, 0, af.source)
        if af.role == "conjecture" and self.conjecture is not None:
            raise TPTPSyntaxError("more than one conjecture", af.line, 0, af.source)
        self.symbols.add_formula(af.formula)
        self.formulas.append(af)


# ---------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*|/\*.*?\*/)
  | (?P<op><=>|<~>|=>|<=|~\||~&|!=|[=~&|!?()\[\],:.])
  | (?P<dollar>\$[a-z_]+)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<dquoted>"(?:[^"\\]|\\.)*")
""", re.VERBOSE | re.DOTALL)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, source: str) -> list:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TPTPSyntaxError(f"unexpected character {text[pos]!r}",
                                  line, pos - line_start + 1, source)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, text: str, source: str) -> None:
        self.toks = _tokenize(text, source)
        self.i = 0
        self.source = source

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        return TPTPSyntaxError(msg, tok.line, tok.col, self.source)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        tok = self.tok
        if not self.accept(text):
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return tok

    def name(self) -> str:
        tok = self.tok
        if tok.kind in ("lower", "number", "upper"):
            self.i += 1
            return tok.text
        if tok.kind == "quoted":
            self.i += 1
            return tok.text[1:-1]
        raise self.error(f"expected a name, found {tok.text!r}")

    # statements
    def statements(self):
        while self.tok.kind != "eof":
            tok = self.tok
            if tok.kind != "lower":
                raise self.error(f"expected fof or include, found {tok.text!r}")
            self.i += 1
            if tok.text == "include":
                yield self._include(tok)
            elif tok.text == "fof":
                yield self._fof(tok)
            else:
                raise self.error(f"unsupported statement {tok.text!r} (only fof and include)", tok)

    def _include(self, tok):
        self.expect("(")
        if self.tok.kind != "quoted":
            raise self.error("include expects a quoted file name")
        fname = self.tok.text[1:-1]
        self.i += 1
        selection = None
        if self.accept(","):
            self.expect("[")
            selection = []
            if not self.accept("]"):
                selection.append(self.name())
                while self.accept(","):
                    selection.append(self.name())
                self.expect("]")
        self.expect(")")
        self.expect(".")
        return ("include", fname, selection, tok.line)

    def _fof(self, tok):
        self.expect("(")
        name = self.name()
        self.expect(",")
        role_tok = self.tok
        role = self.name()
        if role not in ROLES:
            raise self.error(f"unknown role {role!r}", role_tok)
        self.expect(",")
        f = self.formula()
        while self.accept(","):
            self._skip_general_term()
        self.expect(")")
        self.expect(".")
        return ("fof", AnnotatedFormula(name, role, f, self.source, tok.line))

    def _skip_general_term(self) -> None:
        depth = 0
        while True:
            tok = self.tok
            if tok.kind == "eof":
                raise self.error("unterminated annotation")
            if tok.kind == "op" and tok.text in "([":
                depth += 1
            elif tok.kind == "op" and tok.text in ")]":
                if depth == 0:
                    return
                depth -= 1
            elif tok.kind == "op" and tok.text == "," and depth == 0:
                return
            self.i += 1

    # formulas: binary (non-assoc) > or > and > unitary
    def formula(self) -> Formula:
        left = self._or()
        tok = self.tok
        if tok.kind == "op" and tok.text in ("=>", "<=", "<=>", "<~>", "~|", "~&"):
            self.i += 1
            right = self._or()
            if tok.text == "=>":
                return Binary("implies", left, right)
            if tok.text == "<=":
                return Binary("implies", right, left)
            if tok.text == "<=>":
                return Binary("iff", left, right)
            if tok.text == "<~>":
                return Not(Binary("iff", left, right))
            if tok.text == "~|":
                return Not(Binary("or", left, right))
            return Not(Binary("and", left, right))
        return left

    def _or(self) -> Formula:
        f = self._and()
        while self.accept("|"):
            f = Binary("or", f, self._and())
        return f

    def _and(self) -> Formula:
        f = self.unitary()
        while self.accept("&"):
            f = Binary("and", f, self.unitary())
        return f

    def unitary(self) -> Formula:
        tok = self.tok
        if tok.kind == "op":
            if tok.text in ("!", "?"):
                self.i += 1
                self.expect("[")
                names = [self._variable()]
                while self.accept(","):
                    names.append(self._variable())
                self.expect("]")
                self.expect(":")
                body = self.unitary()
                q = "forall" if tok.text == "!" else "exists"
                for v in reversed(names):
                    body = Quantified(q, v, body)
                return body
            if tok.text == "~":
                self.i += 1
                return Not(self.unitary())
            if tok.text == "(":
                self.i += 1
                f = self.formula()
                self.expect(")")
                return f
        return self._atomic()

    def _variable(self) -> str:
        tok = self.tok
        if tok.kind != "upper":
            raise self.error(f"expected a variable, found {tok.text!r}")
        self.i += 1
        return tok.text

    def _atomic(self) -> Formula:
        tok = self.tok
        if tok.kind == "dollar":
            self.i += 1
            if tok.text == "$true":
                return TRUE
            if tok.text == "$false":
                return FALSE
            raise self.error(f"unsupported defined word {tok.text!r}", tok)
        t = self.term()
        if self.accept("="):
            return Equality(t, self.term())
        if self.accept("!="):
            return Not(Equality(t, self.term()))
        if type(t) is Var:
            raise self.error("a variable cannot be used as a formula", tok)
        return Atom(t.functor, t.args)

    def term(self):
        tok = self.tok
        if tok.kind == "upper":
            self.i += 1
            return Var(tok.text)
        if tok.kind in ("lower", "quoted", "number", "dquoted"):
            self.i += 1
            name = tok.text[1:-1] if tok.kind == "quoted" else tok.text
            args = []
            if self.accept("("):
                args.append(self.term())
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
            return Fn(name, tuple(args))
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text, "<formula>")
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error(f"trailing input {p.tok.text!r}")
    return f


def default_resolver(axiom_dir: Optional[str] = None, base_dir: Optional[str] = None):
    """Resolve include names against the axiom root, then the including file's dir.

    The axiom root is ``axiom_dir``, else the ``ZFCPROVER_AXIOMS`` or ``TPTP``
    environment variable, else the bundled data directory.
    """
    roots = []
    for cand in (axiom_dir, os.environ.get(AXIOM_DIR_ENV), os.environ.get("TPTP")):
        if cand:
            roots.append(Path(cand))
    roots.append(Path(__file__).parent / "data")
    if base_dir:
        roots.append(Path(base_dir))

    def resolve(name: str) -> tuple:
        for root in roots:
            path = root / name
            if path.is_file():
                return str(path), path.read_text()
        raise IncludeError(f"cannot resolve include {name!r} (searched {', '.join(map(str, roots))})")

    return resolve


def parse_problem(text: str, resolver: Optional[Callable[[str], tuple]] = None,
                  source: str = "<input>", name: str = "") -> Problem:
    """Parse a FOF problem, resolving includes recursively.

    ``resolver`` maps an include name to ``(source_id, text)``.
    """
    if resolver is None:
        resolver = default_resolver()
    problem = Problem(name=name)
    _parse_into(problem, text, source, resolver, [source], None)
    return problem


def _parse_into(problem, text, source, resolver, stack, selection) -> None:
    parser = _Parser(text, source)
    for stmt in parser.statements():
        if stmt[0] == "fof":
            af = stmt[1]
            if selection is None or af.name in selection:
                problem.add(af)
        else:
            _, fname, sel, line = stmt
            src, sub_text = resolver(fname)
            if src in stack:
                raise IncludeError(f"include cycle: {' -> '.join(stack + [src])}")
            _parse_into(problem, sub_text, src, resolver, stack + [src],
                        None if sel is None else set(sel))


def parse_file(path: str, axiom_dir: Optional[str] = None) -> Problem:
    p = Path(path)
    resolver = default_resolver(axiom_dir, str(p.parent))
    return parse_problem(p.read_text(), resolver, source=str(p), name=p.stem)


# ---------------------------------------------------------------------------
# printing

def print_term(t) -> str:
    if type(t) is Var:
        return t.name
    name = t.functor if re.fullmatch(r"[a-z][A-Za-z0-9_]*|[0-9]+", t.functor) else f"'{t.functor}'"
    if not t.args:
        return name
    return f"{name}({','.join(print_term(a) for a in t.args)})"


def _print_atom(a) -> str:
    if type(a) is Equality:
        return f"{print_term(a.lhs)} = {print_term(a.rhs)}"
    return print_term(Fn(a.pred, a.args))


_SYMBOL = {"and": "&", "or": "|", "implies": "=>", "iff": "<=>"}


def print_formula(f: Formula) -> str:
    """TPTP FOF text that parses back to an alpha-equal formula."""
    tf = type(f)
    if tf is Atom or tf is Equality:
        return _print_atom(f)
    if tf is Truth:
        return "$true" if f.value else "$false"
    if tf is Not:
        if type(f.body) is Equality:
            return f"{print_term(f.body.lhs)} != {print_term(f.body.rhs)}"
        return f"~ {_unitary(f.body)}"
    if tf is Quantified:
        names = [f.var]
        body = f.body
        while type(body) is Quantified and body.quantifier == f.quantifier:
            names.append(body.var)
            body = body.body
        q = "!" if f.quantifier == "forall" else "?"
        return f"{q} [{','.join(names)}] : {_unitary(body)}"
    op = f.op
    if op in ("and", "or"):
        left = print_formula(f.left) if _chains(f.left, op) else _unitary(f.left)
        return f"{left} {_SYMBOL[op]} {_unitary(f.right)}"
    return f"{_unitary(f.left)} {_SYMBOL[op]} {_unitary(f.right)}"


def _chains(f, op) -> bool:
    return type(f) is Binary and f.op == op


def _unitary(f: Formula) -> str:
    if type(f) is Binary:
        return f"({print_formula(f)})"
    if type(f) is Not and type(f.body) is Equality:
        return f"({print_formula(f)})"
    return print_formula(f)


def print_annotated(af: AnnotatedFormula) -> str:
    return f"fof({af.name},{af.role},\n    {print_formula(af.formula)})."


def print_problem(problem: Problem) -> str:
    return "\n\n".join(print_annotated(af) for af in problem.formulas) + "\n"


def print_literal(lit) -> str:
    a = lit.atom
    if type(a) is Equality:
        op = "=" if lit.positive else "!="
        return f"{print_term(a.lhs)} {op} {print_term(a.rhs)}"
    return _print_atom(a) if lit.positive else f"~{_print_atom(a)}"


def print_clause(literals: Iterable) -> str:
    literals = list(literals)
    if not literals:
        return "$false"
    return " | ".join(print_literal(l) for l in literals)


def print_result(status: str, proof=None, problem_name: str = "") -> str:
    """SZS status line, followed by the proof listing when one is given."""
    if status not in SZS_STATUSES:
        raise ValueError(f"unknown SZS status {status!r}")
    suffix = f" for {problem_name}" if problem_name else ""
    lines = [f"% SZS status {status}{suffix}"]
    if proof is not None:
        lines.append(f"% SZS output start CNFRefutation{suffix}")
        for node in proof.ordered_nodes():
            lines.append(format_step(node))
        lines.append(f"% SZS output end CNFRefutation{suffix}")
    return "\n".join(lines)


def _node_name(nid: int) -> str:
    return f"f{-nid}" if nid < 0 else f"c{nid}"


def format_step(node) -> str:
    """One derivation line per proof node: ``fof`` for formula leaves,
    ``cnf`` for clauses."""
    rule = node.rule
    name = _node_name(node.id)
    if node.formula is not None:
        body = print_formula(node.formula)
        if rule == "input":
            src = node.detail.get("formula", "unknown")
            role = node.detail.get("role", "axiom")
            source = f"file('{node.detail.get('source', '')}',{src})"
            return f"fof({name},{_tstp_role(role)},{body},{source})."
        origin = node.detail.get("origin", "unknown")
        return f"fof({name},axiom,{body},introduced({rule},[origin({origin})]))."
    body = print_clause(node.literals)
    parents = ",".join(_node_name(p) for p in node.parents)
    if rule == "clausification":
        return f"cnf({name},plain,({body}),inference(clausification,[status(esa)],[{parents}]))."
    return f"cnf({name},plain,({body}),inference({rule},[status(thm)],[{parents}]))."


def _tstp_role(role: str) -> str:
    return "negated_conjecture" if role in ("conjecture", "negated_conjecture") else role
