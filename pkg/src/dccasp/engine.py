"""Goal-directed evaluation of compiled programs.

Search is depth-first with chronological backtracking.  Every solver routine
is a generator: it yields once per solution, leaving its bindings and model
insertions in place, and undoes them (via the store trail) before trying the
next alternative or returning.

Runtime goals are tuples:

* ``(LIT, positive, atom, key, is_helper)`` with ``key = (positive, name, arity)``
* ``(CON, Constraint)``
* ``(ALL, var, body_goal)``
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from .constraints import Dif, Store, in_interval
from .syntax import Constraint, Forall, Lit, goal_vars
from .terms import (
    Slot,
    Struct,
    TStruct,
    Var,
    deref,
    functor,
    ground_key,
    identical,
    instantiate,
    is_ground,
    is_number,
    rename,
    term_vars,
    unify_core,
)
from .transform import NMR_CHECK, CompiledProgram, is_helper

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

LIT, CON, ALL = 0, 1, 2


class LoopType(Enum):
    ODD = "odd"
    EVEN = "even"
    POSITIVE = "positive"
    PROVED = "proved"
    NO_LOOP = "no_loop"


# justification node kinds
NORMAL, CHS, PROVED, BUILTIN, FORALL = "normal", "chs", "proved", "builtin", "forall"


class Node:
    """Justification tree node; ``goal`` is a runtime goal tuple."""

    __slots__ = ("goal", "kind", "children")

    def __init__(self, goal, kind, children=()):
        self.goal = goal
        self.kind = kind
        self.children = children


@dataclass
class Stats:
    models_returned: int = 0
    nmr_discarded: int = 0
    dcc_detections: int = 0
    nmr_checks: int = 0
    wall_time: float = 0.0


@dataclass
class ModelEntry:
    positive: bool
    atom: object
    kind: str  # "lit" or "chs"


@dataclass
class JNode:
    goal: object  # Lit / Constraint / Forall with frozen terms
    kind: str
    children: list = field(default_factory=list)


@dataclass
class Answer:
    model: list  # ModelEntry, in call order
    bindings: list  # (name, frozen term) for every query variable
    tree: list  # JNode roots: query goals then the nmr_check derivation
    shows: list = field(default_factory=list)


# ------------------------------------------------------------ templates


class ClauseT:
    __slots__ = ("head", "body", "nvars", "source")

    def __init__(self, head, body, nvars, source):
        self.head = head  # tuple of argument templates
        self.body = body  # tuple of goal templates
        self.nvars = nvars
        self.source = source


class _Templater:
    def __init__(self):
        self.slots: dict = {}

    def term(self, t):
        t = deref(t)
        if type(t) is Var:
            s = self.slots.get(t)
            if s is None:
                s = self.slots[t] = Slot(len(self.slots), t.name)
            return s
        if type(t) is Struct:
            args = tuple(self.term(a) for a in t.args)
            if any(type(a) in (Slot, TStruct) for a in args):
                return TStruct(t.name, args)
            return Struct(t.name, args)
        return t

    def goal(self, g):
        if type(g) is Lit:
            name, arity = functor(g.atom)
            return (LIT, g.positive, self.term(g.atom), (g.positive, name, arity), is_helper(name))
        if type(g) is Constraint:
            return (CON, g.op, self.term(g.lhs), self.term(g.rhs))
        return (ALL, self.term(g.var), self.goal(g.body))


def compile_clause(clause) -> ClauseT:
    tp = _Templater()
    atom = clause.head.atom
    head = tuple(tp.term(a) for a in atom.args) if type(atom) is Struct else ()
    body = tuple(tp.goal(g) for g in clause.body)
    return ClauseT(head, body, len(tp.slots), clause)


def inst_goal(gt, regs):
    kind = gt[0]
    if kind is LIT:
        return (LIT, gt[1], instantiate(gt[2], regs), gt[3], gt[4])
    if kind is CON:
        return (CON, Constraint(gt[1], instantiate(gt[2], regs), instantiate(gt[3], regs)))
    return (ALL, instantiate(gt[1], regs), inst_goal(gt[2], regs))


def runtime_goal(g):
    """Runtime goal tuple for a parsed goal (variables are shared, not copied)."""
    if type(g) is Lit:
        name, arity = functor(g.atom)
        return (LIT, g.positive, g.atom, (g.positive, name, arity), is_helper(name))
    if type(g) is Constraint:
        return (CON, g)
    return (ALL, g.var, runtime_goal(g.body))


def rename_goal(g, mapping):
    kind = g[0]
    if kind is LIT:
        return (LIT, g[1], rename(g[2], mapping), g[3], g[4])
    if kind is CON:
        c = g[1]
        return (CON, Constraint(c.op, rename(c.lhs, mapping), rename(c.rhs, mapping)))
    return (ALL, g[1], rename_goal(g[2], mapping))


# ------------------------------------------------------------ model


class _Entry:
    # supports: entries of the positive body literals that derived a positive
    # literal; None while the literal is only a coinductive assumption
    __slots__ = ("seq", "positive", "atom", "kind", "supports")

    def __init__(self, seq, positive, atom, kind, supports=None):
        self.seq = seq
        self.positive = positive
        self.atom = atom
        self.kind = kind
        self.supports = supports


def _set_seq(arg) -> None:
    entry, seq = arg
    entry.seq = seq


def _set_supports(arg) -> None:
    entry, supports = arg
    entry.supports = supports


def _reaches(supports, target) -> bool:
    """Whether ``target`` is reachable through positive support edges."""
    seen = set()
    todo = list(supports)
    while todo:
        e = todo.pop()
        if e is target:
            return True
        if id(e) in seen or not e.supports:
            continue
        seen.add(id(e))
        todo.extend(e.supports)
    return False


class Model:
    """Partial model: literals indexed by predicate, with trail-based undo."""

    def __init__(self, store: Store):
        self.store = store
        self.by_pred: dict = {}
        self.ground: dict = {}
        self.nonground: dict = {}
        self.calls = 0
        self.log: list = []  # entries in insertion order

    def next_seq(self) -> int:
        self.calls += 1
        return self.calls

    def find(self, key, atom, gkey) -> Optional[_Entry]:
        """Entry identical to ``atom`` with the polarity of ``key``."""
        if gkey is not None:
            e = self.ground.get((key[0], gkey))
            if e is not None:
                return e
        for e in self.nonground.get(key, ()):
            if identical(e.atom, atom):
                return e
        return None

    def entries(self) -> list:
        out = [e for lst in self.by_pred.values() for e in lst]
        out.sort(key=lambda e: e.seq)
        return out

    def _push(self, key, entry: _Entry) -> None:
        self.log.append(entry)
        self.by_pred.setdefault(key, []).append(entry)
        gkey = ground_key(entry.atom)
        if gkey is not None and (key[0], gkey) not in self.ground:
            self.ground[(key[0], gkey)] = entry
            self.store.push_undo(self._pop_ground, (key, (key[0], gkey)))
        else:
            self.nonground.setdefault(key, []).append(entry)
            self.store.push_undo(self._pop_nonground, key)

    def _pop_ground(self, arg) -> None:
        key, gk = arg
        self.log.pop()
        self.by_pred[key].pop()
        del self.ground[gk]

    def _pop_nonground(self, key) -> None:
        self.log.pop()
        self.by_pred[key].pop()
        self.nonground[key].pop()

    def add(self, key, atom, kind, seq, supports=None) -> Iterator[None]:
        """Insert a literal, keeping the model free of complementary pairs.

        A complementary entry that merely unifies with ``atom`` is separated
        from it by a disequality, which may branch.  Completing a literal that
        was assumed coinductively fails when its own supports lean on that
        assumption (a positive loop through the model).
        """
        gkey = ground_key(atom)
        found = self.find(key, atom, gkey)
        if found is not None:
            if supports is not None and found.supports is None:
                if _reaches(supports, found):
                    return
                mark = self.store.mark()
                self.store.push_undo(_set_supports, (found, None))
                found.supports = supports
                for _ in self._keep_earliest(found, seq):
                    yield
                self.store.undo(mark)
                return
            yield from self._keep_earliest(found, seq)
            return
        ckey = (not key[0], key[1], key[2])
        if gkey is not None:
            if (ckey[0], gkey) in self.ground:
                return
            conflicts = self.nonground.get(ckey, ())
        else:
            conflicts = self.by_pred.get(ckey, ())
        conflicts = list(conflicts)
        entry = _Entry(seq, key[0], atom, kind, supports)
        yield from self._separate(key, entry, conflicts, 0)

    def _keep_earliest(self, found, seq) -> Iterator[None]:
        """Keep the position of the earliest call."""
        if seq < found.seq:
            mark = self.store.mark()
            self.store.push_undo(_set_seq, (found, found.seq))
            found.seq = seq
            yield
            self.store.undo(mark)
        else:
            yield

    def _separate(self, key, entry, conflicts, i) -> Iterator[None]:
        store = self.store
        if i == len(conflicts):
            mark = store.mark()
            self._push(key, entry)
            yield
            store.undo(mark)
            return
        other = conflicts[i].atom
        if identical(other, entry.atom):
            return
        if not store.unifiable(other, entry.atom):
            yield from self._separate(key, entry, conflicts, i + 1)
            return
        for _ in store.disequal(other, entry.atom):
            yield from self._separate(key, entry, conflicts, i + 1)


# ------------------------------------------------------------ engine

_SKIP = object()


class Engine:
    """Interpreter for one compiled program.

    An engine owns its constraint store and model and is not thread-safe;
    create one engine per concurrent run.
    """

    def __init__(self, compiled: CompiledProgram, dcc: bool = False):
        self.compiled = compiled
        self.dcc = dcc
        self.store = Store()
        self.model = Model(self.store)
        self.stats = Stats()
        self.procs = {
            key: [compile_clause(c) for c in clauses]
            for key, clauses in compiled.procedures().items()
        }
        self.dcc_rules: dict = {}
        for rule in compiled.dcc_rules:
            tp = _Templater()
            atom = rule.trigger.atom
            trig = tuple(tp.term(a) for a in atom.args) if type(atom) is Struct else ()
            lits = []
            cons = []
            for g in rule.residual:
                gt = tp.goal(g)
                (lits if gt[0] is LIT else cons).append(gt)
            name, arity = functor(atom)
            self.dcc_rules.setdefault((rule.trigger.positive, name, arity), []).append(
                (trig, tuple(lits), tuple(cons), len(tp.slots))
            )

    # -- resolution

    def _unify_tpl(self, t, a, regs) -> bool:
        tt = type(t)
        if tt is Slot:
            r = regs[t.index]
            if r is None:
                regs[t.index] = a
                return True
            return self.store.unify(r, a)
        if tt is TStruct:
            a = deref(a)
            ta = type(a)
            if ta is Var:
                return self.store.unify(a, instantiate(t, regs))
            if ta is not Struct or a.name != t.name or len(a.args) != len(t.args):
                return False
            for x, y in zip(t.args, a.args):
                if not self._unify_tpl(x, y, regs):
                    return False
            return True
        a = deref(a)
        ta = type(a)
        if ta is Var or ta is Struct or tt is Struct:
            return self.store.unify(t, a)
        return tt is ta and t == a

    def resolve(self, key, atom, stack) -> Iterator[list]:
        clauses = self.procs.get(key)
        if not clauses:
            # a predicate the program never mentions (only the query does)
            # has no clauses, so its negation holds unconditionally
            if not key[0] and not is_helper(key[1]) and (True, key[1], key[2]) not in self.procs:
                yield []
            return
        args = atom.args if type(atom) is Struct else ()
        store = self.store
        mark = store.mark()
        for clause in clauses:
            regs = [None] * clause.nvars
            ok = True
            for t, a in zip(clause.head, args):
                if not self._unify_tpl(t, a, regs):
                    ok = False
                    break
            if ok:
                body = [inst_goal(g, regs) for g in clause.body]
                yield from self.solve(body, 0, stack)
            store.undo(mark)

    def solve(self, goals, i, stack) -> Iterator[list]:
        """Solve ``goals[i:]``; yields the justification nodes of each solution."""
        if i == len(goals):
            yield []
            return
        if i == len(goals) - 1:
            yield from self.solve_goal(goals[i], stack)
            return
        for first in self.solve_goal(goals[i], stack):
            for rest in self.solve(goals, i + 1, stack):
                yield first + rest

    def solve_goal(self, g, stack) -> Iterator[list]:
        kind = g[0]
        if kind is LIT:
            if g[4]:
                yield from self.resolve(g[3], g[2], stack)
            else:
                yield from self.solve_literal(g, stack)
        elif kind is CON:
            for _ in self.store.solve_constraint(g[1]):
                yield [Node(g, BUILTIN)]
        else:
            # the first covering decides the check; later coverings would
            # only repeat the same model
            mark = self.store.mark()
            gen = self.c_forall(g[1], g[2], stack, ())
            children = next(gen, None)
            if children is not None:
                yield [Node(g, FORALL, children)]
                gen.close()
                self.store.undo(mark)

    # -- user literals

    def loop_type(self, key, atom, stack) -> LoopType:
        """Classify a call against the model and its ancestors (nearest first)."""
        if self.model.find(key, atom, ground_key(atom)) is not None:
            return LoopType.PROVED
        negated = False
        name, arity = key[1], key[2]
        frame = stack
        while frame is not None:
            fkey, fatom, frame_parent = frame
            if not fkey[0]:
                negated = True
            if fkey[1] == name and fkey[2] == arity and identical(fatom, atom):
                if fkey[0] == key[0]:
                    return LoopType.EVEN if negated else LoopType.POSITIVE
                return LoopType.ODD
            frame = frame_parent
        return LoopType.NO_LOOP

    def solve_literal(self, g, stack) -> Iterator[list]:
        key = g[3]
        atom = g[2]
        model = self.model
        loop = self.loop_type(key, atom, stack)
        if loop is LoopType.PROVED:
            yield [Node(g, PROVED)]
            return
        if loop is LoopType.ODD or loop is LoopType.POSITIVE:
            return
        seq = model.next_seq()
        if loop is LoopType.EVEN:
            if self.dcc and not self.eval_dcc(key, atom):
                return
            for _ in model.add(key, atom, "chs", seq):
                yield [Node(g, CHS)]
            return
        ckey = (not key[0], key[1], key[2])
        if model.find(ckey, atom, ground_key(atom)) is not None:
            return
        frame = (key, atom, stack)
        for children in self.resolve(key, atom, frame):
            if self.dcc and not self.eval_dcc(key, atom):
                continue
            supports = self._supports(children) if key[0] else None
            for _ in model.add(key, atom, "lit", seq, supports):
                yield [Node(g, NORMAL, children)]

    def _supports(self, children) -> tuple:
        """Model entries of the positive user literals in a clause body."""
        out = []
        find = self.model.find
        for n in children:
            g = n.goal
            if g[0] is LIT and g[1] and not g[4]:
                e = find(g[3], g[2], ground_key(g[2]))
                if e is not None:
                    out.append(e)
        return tuple(out)

    # -- dynamic consistency checking

    def eval_dcc(self, key, atom) -> bool:
        """False when adding the ground literal ``atom`` would violate a denial."""
        rules = self.dcc_rules.get(key)
        if not rules or not is_ground(atom):
            return True
        store = self.store
        args = atom.args if type(atom) is Struct else ()
        for trig, lits, cons, nvars in rules:
            mark = store.mark()
            regs = [None] * nvars
            ok = True
            for t, a in zip(trig, args):
                if not self._unify_tpl(t, a, regs):
                    ok = False
                    break
            if ok:
                goals = [inst_goal(gt, regs) for gt in lits]
                constraints = [inst_goal(gt, regs)[1] for gt in cons]
                if self._holds(goals, 0, constraints):
                    store.undo(mark)
                    self.stats.dcc_detections += 1
                    return False
            store.undo(mark)
        return True

    def _holds(self, lits, i, cons) -> bool:
        store = self.store
        if i == len(lits):
            return self._holds_constraints(cons)
        g = lits[i]
        for e in list(self.model.by_pred.get(g[3], ())):
            mark = store.mark()
            if store.unify(g[2], e.atom) and self._holds(lits, i + 1, cons):
                store.undo(mark)
                return True
            store.undo(mark)
        return False

    def _holds_constraints(self, cons) -> bool:
        store = self.store
        pending = list(cons)
        while pending:
            deferred = []
            for c in pending:
                if c.op == "is":
                    if not is_ground(c.rhs):
                        deferred.append(c)
                        continue
                    from .constraints import eval_arith

                    if not store.unify(c.lhs, eval_arith(c.rhs)):
                        return False
                elif c.op == "=":
                    if not store.unify(c.lhs, c.rhs):
                        return False
                elif is_ground(c.lhs) and is_ground(c.rhs):
                    if not store.entails(c):
                        return False
                else:
                    deferred.append(c)
            if len(deferred) == len(pending):
                return all(store.entails(c) for c in deferred)
            pending = deferred
        return True

    # -- universal quantification

    def c_forall(self, var, body, stack, region) -> Iterator[list]:
        """Succeed when ``body`` holds for every value of ``var`` inside ``region``.

        ``body`` is solved for a fresh copy of ``var``.  A solution that leaves
        the copy unconstrained covers the whole region.  Otherwise the region
        is split along the complement of the constraints the solution placed
        on the copy, and every piece must be covered in turn.
        """
        store = self.store
        mark = store.mark()
        v = Var(var.name)
        goal = rename_goal(body, {var: v})
        for _ in self._apply_region(v, region, 0):
            d0 = deref(v)
            before = (d0, d0.attrs if type(d0) is Var else None)
            for children in self.solve_goal(goal, stack):
                split = self._split(v, before)
                if split is None:
                    yield children
                elif split is not _SKIP:
                    for rest in self._cover(var, body, stack, region, split, 0):
                        yield children + rest
        store.undo(mark)

    def _cover(self, var, body, stack, region, pieces, i) -> Iterator[list]:
        if i == len(pieces):
            yield []
            return
        for first in self.c_forall(var, body, stack, region + (pieces[i],)):
            for rest in self._cover(var, body, stack, region, pieces, i + 1):
                yield first + rest

    def _apply_region(self, v, region, i) -> Iterator[None]:
        if i == len(region):
            yield
            return
        store = self.store
        op, t = region[i]
        if op == "\\=":
            for _ in store.disequal(v, t):
                yield from self._apply_region(v, region, i + 1)
            return
        mark = store.mark()
        ok = store.unify(v, t) if op == "=" else store.add_order(op, v, t)
        if ok:
            yield from self._apply_region(v, region, i + 1)
        store.undo(mark)

    def _split(self, v, before):
        """None if the solution left ``v`` unconstrained, the complement pieces
        of its new constraints otherwise, or _SKIP when no finite complement
        can be expressed."""
        d = deref(v)
        bd, battrs = before
        if d is not bd:
            if _has_fresh_vars(d, v.serial):
                return _SKIP
            return [("\\=", d)]
        if type(d) is not Var or d.attrs is battrs:
            return None
        old_difs = battrs[0] if battrs is not None else ()
        old_iv = battrs[1] if battrs is not None else None
        iv = d.attrs[1]
        pieces = []
        if iv != old_iv:
            lo, ls, hi, hs = iv
            olo, ols, ohi, ohs = old_iv if old_iv is not None else (None, False, None, False)
            if lo is not None and (lo != olo or ls != ols):
                pieces.append(("#=<" if ls else "#<", lo))
            if hi is not None and (hi != ohi or hs != ohs):
                pieces.append(("#>=" if hs else "#>", hi))
        scratch: list = []
        for dif in d.attrs[0]:
            if any(dif is o for o in old_difs):
                continue
            mark = len(scratch)
            active = unify_core(dif.lhs, dif.rhs, scratch, [])
            for x in scratch[mark:]:
                x.ref = None
            del scratch[mark:]
            if not active:
                continue
            lhs = deref(dif.lhs)
            rhs = deref(dif.rhs)
            if lhs is d:
                other = rhs
            elif rhs is d:
                other = lhs
            else:
                return _SKIP
            if _has_fresh_vars(other, v.serial):
                return _SKIP
            if iv is not None and is_number(other) and not in_interval(other, iv):
                continue
            if not any(p[0] == "=" and identical(p[1], other) for p in pieces):
                pieces.append(("=", other))
        return pieces or None

    # -- top level

    def run(self, query) -> Iterator[Answer]:
        """Answers of ``query`` (a list of parsed goals), each passing the NMR check."""
        # work on a copy so the caller's terms are never bound
        fresh = {v: Var(v.name) for v in goal_vars(query)}
        goals = [rename_goal(runtime_goal(g), fresh) for g in query]
        names = []
        for v, copy in fresh.items():
            if v.name and v.name != "_" and not any(n == v.name for n, _ in names):
                names.append((v.name, copy))
        nmr = (LIT, True, NMR_CHECK, (True, NMR_CHECK, 0), True)
        stats = self.stats
        seen = set()
        mark = self.store.mark()
        t0 = time.perf_counter()
        try:
            for qnodes in self.solve(goals, 0, None):
                stats.nmr_checks += 1
                passed = False
                for nnodes in self.solve_goal(nmr, None):
                    passed = True
                    answer = self._freeze(names, qnodes, nnodes)
                    key = answer_key(answer)
                    if key in seen:
                        continue
                    seen.add(key)
                    stats.models_returned += 1
                    stats.wall_time += time.perf_counter() - t0
                    yield answer
                    t0 = time.perf_counter()
                if not passed:
                    stats.nmr_discarded += 1
            stats.wall_time += time.perf_counter() - t0
        finally:
            self.store.undo(mark)

    def _freeze(self, names, qnodes, nnodes) -> Answer:
        fr = _Freezer()
        model = [
            ModelEntry(e.positive, fr.term(e.atom), e.kind)
            for e in self.model.entries()
            if not is_helper(functor(e.atom)[0])
        ]
        bindings = [(name, fr.term(v)) for name, v in names]
        for name, v in names:
            fv = deref(v)
            if type(fv) is Var:
                fr.names[fr.term(fv)] = name
        tree = [fr.node(n) for n in qnodes]
        nmr_children = [fr.node(n) for n in nnodes]
        if nmr_children:
            tree.append(JNode(Lit(True, NMR_CHECK), NORMAL, nmr_children))
        answer = Answer(model, bindings, tree, list(self.compiled.shows))
        answer.var_names = fr.names  # type: ignore[attr-defined]
        return answer


def answer_key(answer: Answer):
    """Hashable form of an answer's model and bindings, up to variable renaming."""
    numbering: dict = {}

    def term(t):
        if type(t) is Var:
            n = numbering.get(t)
            if n is None:
                n = numbering[t] = len(numbering)
                others, iv = t.attrs if t.attrs is not None else ((), None)
                cons = tuple(
                    ("dif", term(o.lhs), term(o.rhs)) if type(o) is Dif else term(o) for o in others
                )
                return ("var", n, cons, iv)
            return ("var", n)
        if type(t) is Struct:
            return (t.name, tuple(term(a) for a in t.args))
        return (type(t).__name__, t)

    entries = frozenset((e.positive, term(e.atom)) for e in answer.model)
    return entries, tuple((name, term(t)) for name, t in answer.bindings)


def _has_fresh_vars(t, serial) -> bool:
    return any(x.serial > serial for x in term_vars(t, []))


class _Freezer:
    """Copies live terms into detached terms carrying constraint snapshots.

    A frozen variable's ``attrs`` is ``(others, interval)`` where ``others``
    lists the terms it must differ from.
    """

    def __init__(self):
        self.map: dict = {}
        self.names: dict = {}

    def term(self, t):
        from .constraints import var_constraints

        t = deref(t)
        if type(t) is Var:
            fv = self.map.get(t)
            if fv is None:
                fv = self.map[t] = Var(t.name)
                others, iv = var_constraints(t)
                frozen = []
                for o in others:
                    if type(o) is Dif:
                        frozen.append(Dif(self.term(o.lhs), self.term(o.rhs)))
                    else:
                        frozen.append(self.term(o))
                fv.attrs = (tuple(frozen), iv)
            return fv
        if type(t) is Struct:
            return Struct(t.name, tuple(self.term(a) for a in t.args))
        return t

    def goal(self, g):
        kind = g[0]
        if kind is LIT:
            return Lit(g[1], self.term(g[2]))
        if kind is CON:
            c = g[1]
            return Constraint(c.op, self.term(c.lhs), self.term(c.rhs))
        return Forall(self.term(g[1]), self.goal(g[2]))

    def node(self, n: Node) -> JNode:
        return JNode(self.goal(n.goal), n.kind, [self.node(c) for c in n.children])


def run_query(compiled: CompiledProgram, query, dcc: bool = False, limit: int = 0):
    """Convenience wrapper: ``(answers, stats)`` for ``query``."""
    engine = Engine(compiled, dcc=dcc)
    answers = []
    for answer in engine.run(query):
        answers.append(answer)
        if limit and len(answers) >= limit:
            break
    return answers, engine.stats
