"""Text rendering of answers, statistics and compiled programs."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .constraints import Dif
from .engine import CHS, PROVED, Answer, JNode, Stats
from .syntax import INFIX_OPS, Constraint, Forall, Lit
from .terms import NIL, Struct, Var, deref, list_items, order_key
from .transform import NMR_CHECK, CompiledProgram

_PLAIN_ATOM = re.compile(r"^(?:[a-z][A-Za-z0-9_]*|[+\-*/\\^<>=~:.?@#&]+|\[\])$")


@dataclass
class RenderOptions:
    show_filter: bool = True
    tree: bool = False
    width: int = 80

    def __post_init__(self):
        if self.width < 40:
            raise ValueError("width must be at least 40")


def format_atom(name: str) -> str:
    if _PLAIN_ATOM.match(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


class Namer:
    """Assigns printable names to variables.

    Query variables keep their source names; every other variable gets the
    next unused capital letter (then letter+digit) in order of first use.
    """

    def __init__(self, reserved: Optional[dict] = None, taken=()):
        self.names: dict = dict(reserved or {})
        self.used = set(self.names.values()) | set(taken)
        self.counter = 0

    def name(self, v) -> str:
        n = self.names.get(v)
        if n is None:
            while True:
                i = self.counter
                self.counter += 1
                letter = chr(ord("A") + i % 26)
                n = letter if i < 26 else f"{letter}{i // 26}"
                if n not in self.used:
                    break
            self.names[v] = n
            self.used.add(n)
        return n


class TermWriter:
    """Writes terms; ``annotate`` adds ``V| {constraints}`` to constrained variables."""

    def __init__(self, namer: Namer, annotate: bool = True):
        self.namer = namer
        self.annotate = annotate

    def term(self, t, prec: int = 999) -> str:
        t = deref(t)
        tt = type(t)
        if tt is Var:
            name = self.namer.name(t)
            if self.annotate:
                cons = self.constraints(t)
                if cons:
                    return f"{name}| {{{','.join(cons)}}}"
            return name
        if tt is int:
            return str(t)
        if tt is str:
            return format_atom(t)
        if tt is Struct:
            return self.compound(t, prec)
        return str(t)  # Fraction

    def plain(self, t) -> str:
        saved = self.annotate
        self.annotate = False
        try:
            return self.term(t)
        finally:
            self.annotate = saved

    def compound(self, t: Struct, prec: int) -> str:
        if t.name == "." and len(t.args) == 2:
            items, tail = list_items(t)
            body = ",".join(self.term(x) for x in items)
            if tail != NIL:
                body += "|" + self.term(tail)
            return f"[{body}]"
        if len(t.args) == 2 and t.name in INFIX_OPS and t.name != ",":
            p, typ = INFIX_OPS[t.name]
            lp = p if typ == "yfx" else p - 1
            rp = p if typ == "xfy" else p - 1
            sep = " " if p >= 700 else ""
            text = f"{self.term(t.args[0], lp)}{sep}{t.name}{sep}{self.term(t.args[1], rp)}"
            return f"({text})" if p > prec else text
        if t.name == "-" and len(t.args) == 1:
            inner = self.term(t.args[0], 200)
            return f"-({inner})" if inner.startswith("-") else f"-{inner}"
        args = ", ".join(self.term(a) for a in t.args)
        return f"{format_atom(t.name)}({args})"

    def constraints(self, v) -> list:
        """Constraint texts of a frozen variable: disequalities in standard
        order of the other side, then interval bounds."""
        if v.attrs is None:
            return []
        others, iv = v.attrs
        name = self.namer.name(v)
        out = []
        plain = [o for o in others if type(o) is not Dif]
        general = [o for o in others if type(o) is Dif]
        for o in sorted(plain, key=order_key):
            out.append(f"{name} \\= {self.plain(o)}")
        for d in general:
            out.append(f"{self.plain(d.lhs)} \\= {self.plain(d.rhs)}")
        if iv is not None:
            lo, ls, hi, hs = iv
            if lo is not None:
                out.append(f"{name} {'#>' if ls else '#>='} {self.term(lo)}")
            if hi is not None:
                out.append(f"{name} {'#<' if hs else '#=<'} {self.term(hi)}")
        return out

    def goal(self, g) -> str:
        if type(g) is Lit:
            atom = self.term(g.atom, 899)
            return atom if g.positive else f"not {atom}"
        if type(g) is Constraint:
            return f"{self.term(g.lhs, 699)} {g.op} {self.term(g.rhs, 699)}"
        if type(g) is Forall:
            return f"forall({self.term(g.var)}, {self.goal(g.body)})"
        raise TypeError(f"not a goal: {g!r}")


def _namer(answer: Answer) -> Namer:
    return Namer(getattr(answer, "var_names", {}), [name for name, _ in answer.bindings])


def _shown(entry, shows) -> bool:
    if not shows:
        return True
    atom = entry.atom
    key = (atom.name, len(atom.args)) if type(atom) is Struct else (atom, 0)
    return key in shows


def _entry_text(entry, w: TermWriter) -> str:
    atom = w.term(entry.atom, 899)
    return atom if entry.positive else f"not {atom}"


def _variant_text(entry, answer: Answer) -> str:
    """Entry text with its non-query variables named locally."""
    return _entry_text(entry, TermWriter(_namer(answer)))


def visible_entries(answer: Answer, show_filter: bool = True) -> list:
    """Model entries to print: filtered by ``#show`` and with repeated
    variants (same literal up to renaming of its own variables) dropped."""
    shows = answer.shows if show_filter else []
    seen = set()
    out = []
    for e in answer.model:
        if not _shown(e, shows):
            continue
        key = _variant_text(e, answer)
        if key in seen:
            continue
        seen.add(key)
        out.append(e)
    return out


def render_model(answer: Answer, opts: Optional[RenderOptions] = None, namer: Optional[Namer] = None) -> str:
    opts = opts or RenderOptions()
    w = TermWriter(namer or _namer(answer))
    parts = [_entry_text(e, w) for e in visible_entries(answer, opts.show_filter)]
    if not parts:
        return "{ }"
    return "{ " + ", ".join(parts) + " }"


def canonical_answer(answer: Answer, show_filter: bool = False) -> str:
    """Order-independent text of an answer, for comparing answer multisets."""
    entries = sorted({_variant_text(e, answer) for e in visible_entries(answer, show_filter)})
    return "{ " + ", ".join(entries) + " } " + render_bindings(answer)


def render_bindings(answer: Answer, namer: Optional[Namer] = None) -> str:
    w = TermWriter(namer or _namer(answer))
    parts = []
    for name, t in answer.bindings:
        t = deref(t)
        if type(t) is Var:
            if t.attrs is not None:
                parts.extend(w.constraints(t))
        else:
            parts.append(f"{name} = {w.term(t)}")
    return ", ".join(parts)


def render_justification(answer: Answer, opts: Optional[RenderOptions] = None, namer: Optional[Namer] = None) -> str:
    w = TermWriter(namer or _namer(answer))
    lines: list = []

    def walk(node: JNode, depth: int) -> None:
        g = node.goal
        if type(g) is Lit and g.atom == NMR_CHECK:
            text = "nmr_check"
        else:
            text = w.goal(g)
        if node.kind == CHS:
            text += " (chs)"
        elif node.kind == PROVED:
            text += " (proved)"
        lines.append("  " * depth + text)
        for c in node.children:
            walk(c, depth + 1)

    for root in answer.tree:
        walk(root, 0)
    return "\n".join(lines)


def render_answer(answer: Answer, opts: Optional[RenderOptions] = None, index: Optional[int] = None) -> str:
    """Model block, bindings line and (optionally) the justification tree."""
    opts = opts or RenderOptions()
    namer = _namer(answer)
    out = []
    if index is not None:
        out.append(f"Answer {index}:")
    if opts.tree:
        out.append(render_justification(answer, opts, namer))
    out.append(render_model(answer, opts, namer))
    bindings = render_bindings(answer, namer)
    if bindings:
        out.append("  " + bindings)
    return "\n".join(out)


def render_stats(stats: Stats, dcc_enabled: bool) -> str:
    return "\n".join(
        [
            f"dcc:               {'on' if dcc_enabled else 'off'}",
            f"models returned:   {stats.models_returned}",
            f"models discarded:  {stats.nmr_discarded}",
            f"dcc detections:    {stats.dcc_detections}",
            f"wall time:         {stats.wall_time:.3f} s",
        ]
    )


def render_stats_raw(stats: Stats) -> str:
    return (
        f"returned={stats.models_returned} discarded={stats.nmr_discarded} "
        f"dcc={stats.dcc_detections} time_ms={round(stats.wall_time * 1000)}"
    )


# ------------------------------------------------------------ compiled code


def render_clause(clause) -> str:
    w = TermWriter(Namer(), annotate=False)
    head = None if clause.head is None else w.goal(clause.head)
    body = ", ".join(w.goal(g) for g in clause.body)
    if head is None:
        return f":- {body}."
    return f"{head} :- {body}." if body else f"{head}."


def render_compiled(compiled: CompiledProgram) -> str:
    """Program text for ``--code``; readable by ``transform.parse_compiled``."""
    lines = []
    for (name, arity), clauses in compiled.user_clauses.items():
        for c in clauses:
            lines.append(render_clause(c))
    lines.append("")
    for c in compiled.dual_clauses:
        lines.append(render_clause(c))
    lines.append("")
    for c in compiled.denials:
        lines.append(render_clause(c))
    for c in compiled.nmr_clauses:
        lines.append(render_clause(c))
    lines.append("")
    for rule in compiled.dcc_rules:
        w = TermWriter(Namer(), annotate=False)
        residual = ", ".join(w.goal(g) for g in rule.residual)
        lines.append(f"dcc({w.goal(rule.trigger)}, [{residual}]).")
    for name, arity in compiled.shows:
        lines.append(f"#show {format_atom(name)}/{arity}.")
    return "\n".join(lines).strip() + "\n"


__all__ = [
    "RenderOptions",
    "Namer",
    "TermWriter",
    "format_atom",
    "render_model",
    "visible_entries",
    "canonical_answer",
    "render_bindings",
    "render_justification",
    "render_answer",
    "render_stats",
    "render_stats_raw",
    "render_clause",
    "render_compiled",
]
