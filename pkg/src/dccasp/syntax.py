"""Reader for the program language.

Source text is tokenized and parsed into terms with a small Prolog-style
operator-precedence parser, then terms are converted into clauses, denials,
queries and ``#show`` directives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .terms import NIL, Struct, Var, deref, is_callable, make_list

COMPARATORS = frozenset(
    ["=", "\\=", "#<", "#>", "#=<", "#>=", "<", ">", "=<", ">=", "is"]
)
ORDER_OPS = frozenset(["#<", "#>", "#=<", "#>="])
PLAIN_OPS = frozenset(["<", ">", "=<", ">="])

# name -> (priority, type)
PREFIX_OPS = {":-": (1200, "fx"), "?-": (1200, "fx"), "not": (900, "fy"), "-": (200, "fy")}
INFIX_OPS = {
    ":-": (1200, "xfx"),
    ",": (1000, "xfy"),
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "*": (400, "yfx"),
    "//": (400, "yfx"),
    "/": (400, "yfx"),
}
for _op in COMPARATORS:
    INFIX_OPS[_op] = (700, "xfx")


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------- AST


@dataclass(slots=True)
class Lit:
    """A user literal: ``atom`` or ``not atom``."""

    positive: bool
    atom: object

    def __repr__(self):
        return f"{'' if self.positive else 'not '}{self.atom!r}"


@dataclass(slots=True)
class Constraint:
    op: str
    lhs: object
    rhs: object

    def __repr__(self):
        return f"{self.lhs!r} {self.op} {self.rhs!r}"


@dataclass(slots=True)
class Forall:
    var: Var
    body: object

    def __repr__(self):
        return f"forall({self.var!r}, {self.body!r})"


Goal = Union[Lit, Constraint, Forall]


@dataclass
class Clause:
    """``head :- body``.  ``head`` is None for a denial."""

    head: Optional[Lit]
    body: tuple = ()

    @property
    def is_denial(self) -> bool:
        return self.head is None


@dataclass
class Program:
    clauses: list = field(default_factory=list)
    denials: list = field(default_factory=list)
    shows: list = field(default_factory=list)
    queries: list = field(default_factory=list)

    def extend(self, other: "Program") -> "Program":
        return Program(
            self.clauses + other.clauses,
            self.denials + other.denials,
            self.shows + [s for s in other.shows if s not in self.shows],
            self.queries + other.queries,
        )


# ---------------------------------------------------------------- tokens

_SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<block>/\*.*?\*/)
  | (?P<num>\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.|'')*')
  | (?P<directive>\#[a-z]+)
  | (?P<punct>[()\[\]{},|])
  | (?P<symbol>[+\-*/\\^<>=~:.?@#&$]+)
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(slots=True)
class Token:
    kind: str  # num var name punct end directive
    value: object
    line: int
    col: int
    layout: bool  # whitespace precedes the token


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    layout = True
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind in ("ws", "comment", "block"):
            layout = True
        elif kind == "num":
            tokens.append(Token("num", int(value), line, col, layout))
            layout = False
        elif kind == "var":
            tokens.append(Token("var", value, line, col, layout))
            layout = False
        elif kind == "name":
            tokens.append(Token("name", value, line, col, layout))
            layout = False
        elif kind == "quoted":
            body = value[1:-1].replace("''", "'")
            body = re.sub(r"\\(.)", lambda mm: {"n": "\n", "t": "\t"}.get(mm.group(1), mm.group(1)), body)
            tokens.append(Token("name", body, line, col, layout))
            layout = False
        elif kind == "directive":
            tokens.append(Token("directive", value, line, col, layout))
            layout = False
        elif kind == "punct":
            tokens.append(Token("punct", value, line, col, layout))
            layout = False
        else:  # symbol
            end = m.end()
            if value == "." and (end >= n or text[end].isspace() or text[end] == "%"):
                tokens.append(Token("end", ".", line, col, layout))
                layout = True
            elif value.endswith(".") and len(value) > 1 and (end >= n or text[end].isspace()):
                # e.g. "a :- b =.\n" is not valid, but "[]." is handled by punct
                tokens.append(Token("name", value[:-1], line, col, layout))
                tokens.append(Token("end", ".", line, col + len(value) - 1, False))
                layout = True
            else:
                tokens.append(Token("name", value, line, col, layout))
                layout = False
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    return tokens


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, tokens: list[Token], text_end: tuple[int, int]):
        self.tokens = tokens
        self.i = 0
        self.text_end = text_end
        self.varmap: dict[str, Var] = {}

    def peek(self) -> Optional[Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input (missing '.')", *self.text_end)
        self.i += 1
        return tok

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        if tok is None:
            raise ParseError(msg, *self.text_end)
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, kind: str, value=None) -> Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            self.error(f"expected {want!r}, found {tok.value!r}", tok)
        return tok

    def variable(self, name: str) -> Var:
        if name == "_":
            return Var("_")
        v = self.varmap.get(name)
        if v is None:
            v = self.varmap[name] = Var(name)
        return v

    # -- terms

    def _starts_term(self, tok: Optional[Token]) -> bool:
        if tok is None or tok.kind == "end":
            return False
        if tok.kind == "punct":
            return tok.value in ("(", "[", "{")
        if tok.kind == "name" and tok.value in INFIX_OPS and tok.value not in PREFIX_OPS:
            return False
        return True

    def parse(self, max_prec: int):
        left, left_prec = self.parse_primary(max_prec)
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.kind == "punct" and tok.value == ",":
                name = ","
            elif tok.kind == "name" and tok.value in INFIX_OPS:
                name = tok.value
            else:
                break
            prec, typ = INFIX_OPS[name]
            if prec > max_prec:
                break
            left_max = prec if typ == "yfx" else prec - 1
            right_max = prec if typ == "xfy" else prec - 1
            if left_prec > left_max:
                break
            self.next()
            right, _ = self.parse(right_max)
            left = Struct(name, (left, right))
            left_prec = prec
        return left, left_prec

    def parse_primary(self, max_prec: int):
        tok = self.next()
        if tok.kind == "num":
            return tok.value, 0
        if tok.kind == "var":
            return self.variable(tok.value), 0
        if tok.kind == "punct":
            if tok.value == "(":
                t, _ = self.parse(1200)
                self.expect("punct", ")")
                return t, 0
            if tok.value == "[":
                return self.parse_list(), 0
            self.error(f"unexpected {tok.value!r}", tok)
        if tok.kind == "end":
            self.error("unexpected end of clause", tok)
        if tok.kind == "directive":
            self.error(f"unexpected directive {tok.value!r}", tok)
        name = tok.value
        nxt = self.peek()
        if nxt is not None and nxt.kind == "punct" and nxt.value == "(" and not nxt.layout:
            self.next()
            args = [self.parse(999)[0]]
            while True:
                t = self.next()
                if t.kind == "punct" and t.value == ",":
                    args.append(self.parse(999)[0])
                elif t.kind == "punct" and t.value == ")":
                    break
                else:
                    self.error(f"expected ',' or ')', found {t.value!r}", t)
            return Struct(name, tuple(args)), 0
        if name in PREFIX_OPS and self._starts_term(nxt):
            prec, typ = PREFIX_OPS[name]
            if name == "-" and nxt.kind == "num" and not nxt.layout:
                self.next()
                return -nxt.value, 0
            if prec > max_prec:
                prec = 999
            arg_max = prec if typ == "fy" else prec - 1
            arg, _ = self.parse(arg_max)
            return Struct(name, (arg,)), prec
        if name in INFIX_OPS or name in PREFIX_OPS:
            prec = max(INFIX_OPS.get(name, (0,))[0], PREFIX_OPS.get(name, (0,))[0])
            return name, (prec if prec <= max_prec else 0)
        return name, 0

    def parse_list(self):
        tok = self.peek()
        if tok is not None and tok.kind == "punct" and tok.value == "]":
            self.next()
            return NIL
        items = [self.parse(999)[0]]
        tail = NIL
        while True:
            t = self.next()
            if t.kind == "punct" and t.value == ",":
                items.append(self.parse(999)[0])
            elif t.kind == "punct" and t.value == "|":
                tail = self.parse(999)[0]
                self.expect("punct", "]")
                break
            elif t.kind == "punct" and t.value == "]":
                break
            else:
                self.error(f"expected ',', '|' or ']', found {t.value!r}", t)
        return make_list(items, tail)

    # -- sentences

    def sentences(self) -> Iterator[tuple[str, object, Token]]:
        while self.peek() is not None:
            start = self.peek()
            self.varmap = {}
            if start.kind == "directive":
                self.next()
                if start.value != "#show":
                    self.error(f"unknown directive {start.value}", start)
                spec, _ = self.parse(1200)
                tok = self.peek()
                if tok is not None and tok.kind == "end":
                    self.next()
                yield "show", spec, start
                continue
            term, _ = self.parse(1200)
            tok = self.next()
            if tok.kind != "end":
                self.error(f"operator expected, found {tok.value!r}", tok)
            yield "term", term, start


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def _conj(term) -> list:
    out = []
    while type(term) is Struct and term.name == "," and len(term.args) == 2:
        out.append(term.args[0])
        term = term.args[1]
    out.append(term)
    return out


def term_to_goal(term, tok: Token, compiled: bool = False) -> Goal:
    term = deref(term)
    if type(term) is Struct:
        if term.name == "not" and len(term.args) == 1:
            atom = deref(term.args[0])
            if not is_callable(atom) or _is_builtin_struct(atom):
                raise ParseError(f"'not' expects a predicate call, got {atom!r}", tok.line, tok.col)
            return Lit(False, atom)
        if term.name in COMPARATORS and len(term.args) == 2:
            return Constraint(term.name, term.args[0], term.args[1])
        if term.name == "forall" and len(term.args) == 2:
            if not compiled:
                raise ParseError("forall/2 is reserved for compiled programs", tok.line, tok.col)
            var = deref(term.args[0])
            if type(var) is not Var:
                raise ParseError("forall/2 expects a variable", tok.line, tok.col)
            return Forall(var, term_to_goal(term.args[1], tok, compiled))
    if not is_callable(term):
        raise ParseError(f"goal expected, got {term!r}", tok.line, tok.col)
    return Lit(True, term)


def _is_builtin_struct(t) -> bool:
    return type(t) is Struct and t.name in COMPARATORS and len(t.args) == 2


def _head(term, tok: Token, compiled: bool) -> Lit:
    term = deref(term)
    if compiled and type(term) is Struct and term.name == "not" and len(term.args) == 1:
        lit = _head(term.args[0], tok, compiled)
        return Lit(False, lit.atom)
    if not is_callable(term) or _is_builtin_struct(term):
        raise ParseError(f"invalid clause head {term!r}", tok.line, tok.col)
    if term in (":-", "?-") or (type(term) is Struct and term.name in (",", ":-", "?-", "not", "forall")):
        raise ParseError(f"invalid clause head {term!r}", tok.line, tok.col)
    return Lit(True, term)


def _show_spec(spec, tok: Token):
    spec = deref(spec)
    if (
        type(spec) is Struct
        and spec.name == "/"
        and len(spec.args) == 2
        and type(spec.args[0]) is str
        and type(spec.args[1]) is int
    ):
        return (spec.args[0], spec.args[1])
    raise ParseError("#show expects name/arity", tok.line, tok.col)


def read_clauses(text: str, compiled: bool = False) -> Iterator[tuple[str, object]]:
    """Yield ``(kind, item)`` pairs: clause, denial, query or show."""
    parser = _Parser(tokenize(text), _end_position(text))
    for kind, term, tok in parser.sentences():
        if kind == "show":
            yield "show", _show_spec(term, tok)
            continue
        term = deref(term)
        if type(term) is Struct and term.name == ":-" and len(term.args) == 1:
            body = tuple(term_to_goal(g, tok, compiled) for g in _conj(term.args[0]))
            yield "denial", Clause(None, body)
        elif type(term) is Struct and term.name == "?-" and len(term.args) == 1:
            yield "query", [term_to_goal(g, tok, compiled) for g in _conj(term.args[0])]
        elif type(term) is Struct and term.name == ":-" and len(term.args) == 2:
            head = _head(term.args[0], tok, compiled)
            body = tuple(term_to_goal(g, tok, compiled) for g in _conj(term.args[1]))
            yield "clause", Clause(head, body)
        else:
            yield "clause", Clause(_head(term, tok, compiled), ())


def parse_program(text: str) -> Program:
    """Parse program text into a :class:`Program`."""
    prog = Program()
    for kind, item in read_clauses(text):
        if kind == "clause":
            prog.clauses.append(item)
        elif kind == "denial":
            prog.denials.append(item)
        elif kind == "query":
            prog.queries.append(item)
        elif item not in prog.shows:
            prog.shows.append(item)
    return prog


def parse_query(text: str) -> list:
    """Parse ``?- goals.`` or a bare conjunction (the trailing ``.`` is optional)."""
    stripped = text.strip()
    if not stripped.startswith("?-"):
        stripped = "?- " + stripped
    if not stripped.endswith("."):
        stripped += " ."
    queries = [item for kind, item in read_clauses(stripped) if kind == "query"]
    if len(queries) != 1:
        raise ParseError("expected exactly one query", 1, 1)
    return queries[0]


def parse_term(text: str):
    """Parse a single term (used by tests and the REPL-less CLI helpers)."""
    parser = _Parser(tokenize(text + " ."), _end_position(text))
    term, _ = parser.parse(1200)
    parser.expect("end")
    return term


def goal_vars(goals, acc: Optional[list] = None) -> list:
    """Unbound variables of a goal sequence in first-occurrence order."""
    from .terms import term_vars

    acc = [] if acc is None else acc
    for g in goals:
        if type(g) is Lit:
            term_vars(g.atom, acc)
        elif type(g) is Constraint:
            term_vars(g.lhs, acc)
            term_vars(g.rhs, acc)
        else:
            term_vars(g.var, acc)
            goal_vars([g.body], acc)
    return acc
