"""Program compilation.

A parsed :class:`~dccasp.syntax.Program` becomes a :class:`CompiledProgram`
holding the user clauses, the dual clauses that define ``not p`` by
constructive negation, the NMR-check clauses built from the denials, and the
DCC rules used to check denials while a model is being built.

Synthesized helper predicates have names starting with ``$``; they are never
recorded in models and never shown.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from .constraints import negate_basic_constraint
from .syntax import Clause, Constraint, Forall, Lit, Program, goal_vars, read_clauses
from .terms import Struct, Var, functor, identical, list_items, term_vars

NMR_CHECK = "$nmr_check"
DCC = "dcc"

PredKey = tuple  # (name, arity)


def is_helper(name: str) -> bool:
    return name.startswith("$")


def pred_of(lit: Lit) -> PredKey:
    return functor(lit.atom)


def make_atom(name: str, args) -> object:
    args = tuple(args)
    return Struct(name, args) if args else name


@dataclass
class DccRule:
    trigger: Lit
    residual: tuple

    def __repr__(self):
        return f"dcc({self.trigger!r}, {list(self.residual)!r})"


@dataclass
class DependencyGraph:
    nodes: set = field(default_factory=set)
    edges: set = field(default_factory=set)  # (from, to, "pos" | "neg")


@dataclass
class CompiledProgram:
    user_clauses: dict = field(default_factory=dict)  # (name, arity) -> [Clause]
    dual_clauses: list = field(default_factory=list)
    nmr_clauses: list = field(default_factory=list)
    dcc_rules: list = field(default_factory=list)
    shows: list = field(default_factory=list)
    denials: list = field(default_factory=list)  # user denials followed by OLON denials
    olon_denials: list = field(default_factory=list)

    def procedures(self) -> dict:
        """All clauses keyed by ``(positive, name, arity)`` of their head."""
        table: dict = defaultdict(list)
        for key, clauses in self.user_clauses.items():
            table[(True,) + key].extend(clauses)
        for clause in self.dual_clauses + self.nmr_clauses:
            head = clause.head
            table[(head.positive,) + pred_of(head)].append(clause)
        return dict(table)


# ---------------------------------------------------------------- helpers


def _fresh_params(n: int) -> list:
    return [Var(f"V{i + 1}") for i in range(n)]


def _goal_identical(a, b) -> bool:
    if type(a) is not type(b):
        return False
    if type(a) is Lit:
        return a.positive == b.positive and identical(a.atom, b.atom)
    if type(a) is Constraint:
        return a.op == b.op and identical(a.lhs, b.lhs) and identical(a.rhs, b.rhs)
    return a.var is b.var and _goal_identical(a.body, b.body)


def negate_goal(goal) -> list:
    if type(goal) is Lit:
        return [Lit(not goal.positive, goal.atom)]
    if type(goal) is Constraint:
        return negate_basic_constraint(goal)
    raise ValueError(f"cannot negate {goal!r}")


def normalize_head(clause: Clause) -> tuple[list, list]:
    """Head parameters and the body with explicit head equalities prepended.

    An argument that is a variable not seen earlier in the head is used as the
    parameter directly; any other argument gets a fresh parameter ``V`` and a
    leading ``V = arg`` goal.
    """
    params = []
    eqs = []
    for i, arg in enumerate(_args(clause.head.atom)):
        if type(arg) is Var and not any(p is arg for p in params):
            params.append(arg)
        else:
            v = Var(f"V{i + 1}")
            params.append(v)
            eqs.append(Constraint("=", v, arg))
    return params, eqs + list(clause.body)


def _args(atom) -> tuple:
    return atom.args if type(atom) is Struct else ()


def negated_conjunction(name: str, params: list, goals: list, positive_head: bool = False) -> list[Clause]:
    """Clauses defining ``not name(params)`` as the negation of ``goals``.

    Variables of ``goals`` that are not parameters are universally quantified
    through ``forall`` over a body helper ``name_body``.  Each prefix clause
    keeps the positive goals before the negated one, so the alternatives are
    disjoint.  With ``positive_head`` the quantified head is ``name`` itself
    (used for the ``chk`` predicates).
    """
    exist = [v for v in goal_vars(goals) if not any(v is p for p in params)]
    out = []
    if exist or positive_head:
        body_name = name + "_1" if positive_head else name + "_body"
        inner = Lit(False, make_atom(body_name, params + exist))
        for v in reversed(exist):
            inner = Forall(v, inner)
        out.append(Clause(Lit(positive_head, make_atom(name, params)), (inner,)))
        head = Lit(False, make_atom(body_name, params + exist))
    else:
        head = Lit(False, make_atom(name, params))
    for j, g in enumerate(goals):
        for neg in negate_goal(g):
            out.append(Clause(head, tuple(goals[:j]) + (neg,)))
    return out


# ---------------------------------------------------------------- analysis


def called_predicates(program: Program) -> set:
    preds = set()
    for clause in program.clauses:
        preds.add(pred_of(clause.head))
    for clause in program.clauses + program.denials:
        for g in clause.body:
            if type(g) is Lit:
                preds.add(pred_of(g))
    for query in program.queries:
        for g in query:
            if type(g) is Lit:
                preds.add(pred_of(g))
    return preds


def dualize(program: Program, extra_preds: Iterable = ()) -> list[Clause]:
    """Dual clauses for every predicate that is defined or called."""
    by_pred: dict = defaultdict(list)
    for clause in program.clauses:
        by_pred[pred_of(clause.head)].append(clause)
    preds = called_predicates(program) | set(extra_preds)
    out: list[Clause] = []
    for name, arity in sorted(preds, key=lambda k: (k[0], k[1])):
        if is_helper(name):
            continue
        clauses = by_pred.get((name, arity), [])
        params = _fresh_params(arity)
        head = Lit(False, make_atom(name, params))
        if not clauses:
            out.append(Clause(head, ()))
            continue
        helper = f"${name}/{arity}"
        out.append(
            Clause(head, tuple(Lit(False, make_atom(f"{helper}_{i + 1}", params)) for i in range(len(clauses))))
        )
        for i, clause in enumerate(clauses):
            cparams, goals = normalize_head(clause)
            out.extend(negated_conjunction(f"{helper}_{i + 1}", cparams, goals))
    return out


def build_dependency_graph(program: Program) -> DependencyGraph:
    graph = DependencyGraph()
    for clause in program.clauses:
        head = pred_of(clause.head)
        graph.nodes.add(head)
        for g in clause.body:
            if type(g) is Lit:
                body = pred_of(g)
                graph.nodes.add(body)
                graph.edges.add((body, head, "pos" if g.positive else "neg"))
    return graph


def odd_components(graph: DependencyGraph) -> list[set]:
    """Strongly connected components that contain a cycle with an odd number of negative edges."""
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    signed: dict = defaultdict(list)
    for src, dst, sign in graph.edges:
        g.add_edge(src, dst)
        signed[src].append((dst, sign == "neg"))
    odd = []
    for comp in nx.strongly_connected_components(g):
        parity: dict = {}
        conflict = False
        for root in sorted(comp):
            if root in parity:
                continue
            parity[root] = False
            stack = [root]
            while stack and not conflict:
                u = stack.pop()
                for v, neg in signed[u]:
                    if v not in comp:
                        continue
                    want = parity[u] ^ neg
                    if v not in parity:
                        parity[v] = want
                        stack.append(v)
                    elif parity[v] != want:
                        conflict = True
                        break
        if conflict:
            odd.append(comp)
    return odd


def _dedup_goals(goals: Iterable) -> tuple:
    out: list = []
    for g in goals:
        if not any(_goal_identical(g, h) for h in out):
            out.append(g)
    return tuple(out)


def canonical(obj) -> object:
    """Hashable canonical form of terms/goals/clauses with variables numbered by first occurrence."""
    numbering: dict = {}

    def term(t):
        from .terms import deref

        t = deref(t)
        if type(t) is Var:
            if t not in numbering:
                numbering[t] = len(numbering)
            return ("$VAR", numbering[t])
        if type(t) is Struct:
            return (t.name,) + tuple(term(a) for a in t.args)
        return (type(t).__name__, t)

    def goal(g):
        if type(g) is Lit:
            return ("lit", g.positive, term(g.atom))
        if type(g) is Constraint:
            return ("con", g.op, term(g.lhs), term(g.rhs))
        if type(g) is Forall:
            return ("all", term(g.var), goal(g.body))
        if type(g) is Clause:
            return ("clause", goal(g.head) if g.head is not None else None, tuple(goal(b) for b in g.body))
        if type(g) is DccRule:
            return ("dcc", goal(g.trigger), tuple(goal(b) for b in g.residual))
        return term(g)

    return goal(obj)


def detect_olon_denials(program: Program, graph: Optional[DependencyGraph] = None) -> list[Clause]:
    """Denials ``:- B, not h`` for rules ``h :- B`` taking part in an odd loop over negation."""
    graph = graph or build_dependency_graph(program)
    comps = odd_components(graph)
    if not comps:
        return []
    where = {}
    for i, comp in enumerate(comps):
        for node in comp:
            where[node] = i
    out: list[Clause] = []
    seen: set = set()
    for clause in program.clauses:
        head = pred_of(clause.head)
        comp = where.get(head)
        if comp is None:
            continue
        if not any(type(g) is Lit and where.get(pred_of(g)) == comp for g in clause.body):
            continue
        body = _dedup_goals(list(clause.body) + [Lit(False, clause.head.atom)])
        denial = Clause(None, body)
        key = canonical(denial)
        if key not in seen:
            seen.add(key)
            out.append(denial)
    return out


def synthesize_nmr_check(denials: list[Clause]) -> list[Clause]:
    out: list[Clause] = []
    chks = []
    for i, denial in enumerate(denials):
        name = f"$chk{i + 1}"
        chks.append(Lit(True, name))
        out.extend(negated_conjunction(name, [], list(denial.body), positive_head=True))
    out.append(Clause(Lit(True, NMR_CHECK), tuple(chks)))
    return out


def synthesize_dcc_rules(denials: list[Clause]) -> list[DccRule]:
    rules = []
    for denial in denials:
        body = list(denial.body)
        for k, g in enumerate(body):
            if type(g) is Lit and not is_helper(pred_of(g)[0]):
                rules.append(DccRule(g, tuple(body[:k] + body[k + 1 :])))
    return rules


def compile_program(program: Program, olon: bool = True) -> CompiledProgram:
    user: dict = defaultdict(list)
    for clause in program.clauses:
        user[pred_of(clause.head)].append(clause)
    olon_denials = detect_olon_denials(program) if olon else []
    denials = list(program.denials) + olon_denials
    dual_extra = set()
    for d in denials:
        for g in d.body:
            if type(g) is Lit:
                dual_extra.add(pred_of(g))
    cp = CompiledProgram(
        user_clauses=dict(user),
        dual_clauses=dualize(program, dual_extra),
        nmr_clauses=synthesize_nmr_check(denials),
        dcc_rules=synthesize_dcc_rules(denials),
        shows=list(program.shows),
        denials=denials,
        olon_denials=olon_denials,
    )
    return cp


# ---------------------------------------------------------------- reading a dump


def parse_compiled(text: str) -> CompiledProgram:
    """Read back the output of :func:`dccasp.output.render_compiled`."""
    from .syntax import term_to_goal, Token

    cp = CompiledProgram()
    user: dict = defaultdict(list)
    tok = Token("name", "", 0, 0, False)
    for kind, item in read_clauses(text, compiled=True):
        if kind == "show":
            cp.shows.append(item)
        elif kind == "denial":
            cp.denials.append(item)
        elif kind == "clause":
            head = item.head
            name, arity = pred_of(head)
            if head.positive and name == DCC and arity == 2 and not item.body:
                trigger, residual = head.atom.args
                items, _ = list_items(residual)
                cp.dcc_rules.append(
                    DccRule(
                        term_to_goal(trigger, tok, compiled=True),
                        tuple(term_to_goal(r, tok, compiled=True) for r in items),
                    )
                )
            elif name == NMR_CHECK or name.startswith("$chk"):
                cp.nmr_clauses.append(item)
            elif head.positive and not is_helper(name):
                user[(name, arity)].append(item)
            else:
                cp.dual_clauses.append(item)
    cp.user_clauses = dict(user)
    return cp
