"""Binding environment: substitution, disequalities and order constraints.

Variables carry their own constraint attributes (``Var.attrs``), a pair
``(difs, interval)``:

* ``difs`` is a tuple of :class:`Dif` records the variable watches;
* ``interval`` is ``(lo, lo_strict, hi, hi_strict)`` with ``None`` for an
  infinite bound, or ``None`` when the variable has no order constraint.

Every change goes through :class:`Store`, which records undo information on
a trail so that search can backtrack to any earlier mark.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

from .syntax import Constraint, ORDER_OPS, PLAIN_OPS
from .terms import (
    Struct,
    Var,
    deref,
    identical,
    is_ground,
    is_number,
    number,
    undo_trail,
    unify_core,
)


class EngineError(Exception):
    """Run-time error raised by a builtin."""


class InstantiationError(EngineError):
    pass


class ArithTypeError(EngineError):
    pass


EVAL = "eval"  # rhs marker of a negated ``is``: X \= eval(E)


class Dif:
    """Pending disequality ``lhs \\= rhs``."""

    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs, rhs):
        self.lhs = lhs
        self.rhs = rhs

    def __repr__(self):
        return f"dif({self.lhs!r}, {self.rhs!r})"


# -------------------------------------------------------------- intervals

FULL = (None, False, None, False)


def _tighter_lo(a, a_strict, b, b_strict):
    if a is None:
        return b, b_strict
    if b is None or a > b:
        return a, a_strict
    if b > a:
        return b, b_strict
    return a, a_strict or b_strict


def _tighter_hi(a, a_strict, b, b_strict):
    if a is None:
        return b, b_strict
    if b is None or a < b:
        return a, a_strict
    if b < a:
        return b, b_strict
    return a, a_strict or b_strict


def intersect(i1, i2):
    """Intersection of two intervals, or None when empty."""
    if i1 is None:
        return i2
    if i2 is None:
        return i1
    lo, ls = _tighter_lo(i1[0], i1[1], i2[0], i2[1])
    hi, hs = _tighter_hi(i1[2], i1[3], i2[2], i2[3])
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and (ls or hs)):
            return None
    return (lo, ls, hi, hs)


def in_interval(value, iv) -> bool:
    lo, ls, hi, hs = iv
    if lo is not None and (value < lo or (ls and value == lo)):
        return False
    if hi is not None and (value > hi or (hs and value == hi)):
        return False
    return True


def half_line(op: str, bound):
    """Interval of ``X op bound``."""
    if op == "#>":
        return (bound, True, None, False)
    if op == "#>=":
        return (bound, False, None, False)
    if op == "#<":
        return (None, False, bound, True)
    return (None, False, bound, False)


_FLIP = {"#<": "#>", "#>": "#<", "#=<": "#>=", "#>=": "#=<",
         "<": ">", ">": "<", "=<": ">=", ">=": "=<"}

_NEGATE = {
    "=": "\\=",
    "\\=": "=",
    "#>": "#=<",
    "#<": "#>=",
    "#>=": "#<",
    "#=<": "#>",
    ">": "=<",
    "<": ">=",
    ">=": "<",
    "=<": ">",
}


def negate_basic_constraint(goal: Constraint) -> list[Constraint]:
    """Finite disjunction of basic constraints covering the complement of ``goal``."""
    if goal.op == "is":
        return [Constraint("\\=", goal.lhs, Struct(EVAL, (goal.rhs,)))]
    rhs = deref(goal.rhs)
    if goal.op == "\\=" and type(rhs) is Struct and rhs.name == EVAL and len(rhs.args) == 1:
        return [Constraint("is", goal.lhs, rhs.args[0])]
    return [Constraint(_NEGATE[goal.op], goal.lhs, goal.rhs)]


def _compare(op: str, a, b) -> bool:
    if op in ("#>", ">"):
        return a > b
    if op in ("#<", "<"):
        return a < b
    if op in ("#>=", ">="):
        return a >= b
    return a <= b


def _truncdiv(a, b):
    if type(a) is not int or type(b) is not int:
        raise ArithTypeError(f"// expects integers, got {a} and {b}")
    if b == 0:
        raise EngineError("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def eval_arith(expr):
    """Evaluate ``+ - * //`` over exact rationals."""
    t = deref(expr)
    tt = type(t)
    if tt is int or tt is Fraction:
        return t
    if tt is Var:
        raise InstantiationError("arithmetic on an unbound variable")
    if tt is Struct:
        args = t.args
        if len(args) == 2:
            a = eval_arith(args[0])
            b = eval_arith(args[1])
            if t.name == "+":
                return number(a + b)
            if t.name == "-":
                return number(a - b)
            if t.name == "*":
                return number(a * b)
            if t.name == "//":
                return _truncdiv(a, b)
        elif len(args) == 1:
            if t.name == "-":
                return -eval_arith(args[0])
            if t.name == "+":
                return eval_arith(args[0])
    raise ArithTypeError(f"not an arithmetic expression: {t!r}")


# -------------------------------------------------------------- the store


class Store:
    """Trail-based constraint store."""

    def __init__(self):
        self.trail: list = []

    # -- trail

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        undo_trail(self.trail, mark)

    def push_undo(self, fn, arg) -> None:
        """Register ``fn(arg)`` to run when backtracking past this point."""
        self.trail.append((fn, arg))

    def set_attrs(self, var: Var, attrs) -> None:
        self.trail.append((var, var.attrs))
        var.attrs = attrs

    # -- unification

    def unify(self, a, b) -> bool:
        """Unify under the constraints; the store is unchanged on failure."""
        trail = self.trail
        mark = len(trail)
        woken: list = []
        if unify_core(a, b, trail, woken) and (not woken or self._wake(woken)):
            return True
        self.undo(mark)
        return False

    def unifiable(self, a, b) -> bool:
        mark = len(self.trail)
        ok = self.unify(a, b)
        self.undo(mark)
        return ok

    def _wake(self, woken: list) -> bool:
        i = 0
        while i < len(woken):
            var = woken[i]
            i += 1
            difs, interval = var.attrs
            target = deref(var)
            if interval is not None:
                if type(target) is Var:
                    if not self._narrow(target, interval, woken):
                        return False
                elif not (is_number(target) and in_interval(target, interval)):
                    return False
            for dif in difs:
                if not self._recheck(dif):
                    return False
        return True

    def _narrow(self, var: Var, interval, woken: list) -> bool:
        attrs = var.attrs
        old = attrs[1] if attrs is not None else None
        new = intersect(old, interval)
        if new is None:
            return False
        if new == old:
            return True
        if new[0] is not None and new[0] == new[2]:
            # degenerate interval: the variable is fixed
            return unify_core(var, new[0], self.trail, woken)
        self.set_attrs(var, (attrs[0] if attrs is not None else (), new))
        return True

    def _recheck(self, dif: Dif) -> bool:
        trail = self.trail
        mark = len(trail)
        if not unify_core(dif.lhs, dif.rhs, trail, []):
            self.undo(mark)
            return True
        bound = [(v, v.ref) for v in trail[mark:]]
        self.undo(mark)
        if not bound:
            return False
        for v, target in bound:
            self._attach(v, dif)
            if type(target) is Var:
                self._attach(target, dif)
        return True

    def _attach(self, var: Var, dif: Dif) -> None:
        attrs = var.attrs
        if attrs is None:
            self.set_attrs(var, ((dif,), None))
            return
        for d in attrs[0]:
            if d is dif:
                return
        self.set_attrs(var, (attrs[0] + (dif,), attrs[1]))

    # -- disequality

    def disequal(self, a, b) -> Iterator[None]:
        """Alternatives of ``a \\= b``; each yield leaves a consistent store.

        Compound terms with the same functor split into one alternative per
        argument position ``k``: arguments before ``k`` equal, argument ``k``
        different.  The alternatives are disjoint and together cover the
        complement of ``a = b``.
        """
        a = deref(a)
        b = deref(b)
        if a is b:
            return
        ta = type(a)
        tb = type(b)
        if ta is Struct and tb is Struct:
            if a.name != b.name or len(a.args) != len(b.args):
                yield
                return
            mark = self.mark()
            for x, y in zip(a.args, b.args):
                yield from self.disequal(x, y)
                if not self.unify(x, y):
                    break
            self.undo(mark)
            return
        if ta is not Var and tb is not Var:
            if not (ta is tb and a == b):
                yield
            return
        if not self.unifiable(a, b):
            yield
            return
        var, other = (a, b) if ta is Var else (b, a)
        attrs = var.attrs
        if attrs is not None:
            for d in attrs[0]:
                if (identical(d.lhs, var) and identical(d.rhs, other)) or (
                    identical(d.rhs, var) and identical(d.lhs, other)
                ):
                    yield
                    return
        mark = self.mark()
        dif = Dif(var, other)
        self._attach(var, dif)
        if type(other) is Var:
            self._attach(other, dif)
        yield
        self.undo(mark)

    # -- order constraints

    def _numeric_side(self, t):
        t = deref(t)
        if type(t) is Var or is_number(t):
            return t
        if type(t) is str:
            raise ArithTypeError(f"order constraint on non-numeric term {t!r}")
        if not is_ground(t):
            raise InstantiationError(f"order constraint on non-ground expression {t!r}")
        return eval_arith(t)

    def add_order(self, op: str, a, b) -> bool:
        """``a op b`` for op in ``#< #> #=< #>=``; at most one side may be a variable."""
        a = self._numeric_side(a)
        b = self._numeric_side(b)
        av = type(a) is Var
        bv = type(b) is Var
        if not av and not bv:
            return _compare(op, a, b)
        if av and bv:
            raise InstantiationError("order constraint between two unbound variables")
        if bv:
            a, b = b, a
            op = _FLIP[op]
        mark = self.mark()
        woken: list = []
        if self._narrow(a, half_line(op, b), woken) and (not woken or self._wake(woken)):
            return True
        self.undo(mark)
        return False

    # -- builtin dispatch

    def solve_constraint(self, c: Constraint) -> Iterator[None]:
        """Execute a constraint goal; yields once per alternative."""
        op = c.op
        if op == "=":
            rhs = deref(c.rhs)
            if type(rhs) is Struct and rhs.name == EVAL and len(rhs.args) == 1:
                rhs = eval_arith(rhs.args[0])
            mark = self.mark()
            if self.unify(c.lhs, rhs):
                yield
                self.undo(mark)
        elif op == "\\=":
            rhs = deref(c.rhs)
            if type(rhs) is Struct and rhs.name == EVAL and len(rhs.args) == 1:
                rhs = eval_arith(rhs.args[0])
            yield from self.disequal(c.lhs, rhs)
        elif op == "is":
            value = eval_arith(c.rhs)
            mark = self.mark()
            if self.unify(c.lhs, value):
                yield
                self.undo(mark)
        elif op in ORDER_OPS:
            mark = self.mark()
            if self.add_order(op, c.lhs, c.rhs):
                yield
                self.undo(mark)
        elif op in PLAIN_OPS:
            if _compare(op, self._plain(c.lhs), self._plain(c.rhs)):
                yield
        else:
            raise EngineError(f"unknown constraint {op}")

    def _plain(self, t):
        t = deref(t)
        if type(t) is Var:
            raise InstantiationError("comparison on an unbound variable")
        return eval_arith(t)

    def entails(self, c: Constraint) -> bool:
        """True iff ``c`` holds for every instance of the current store."""
        op = c.op
        lhs = deref(c.lhs)
        rhs = deref(c.rhs)
        try:
            if type(rhs) is Struct and rhs.name == EVAL and len(rhs.args) == 1:
                if not is_ground(rhs.args[0]):
                    return False
                rhs = eval_arith(rhs.args[0])
            if op == "=":
                return identical(lhs, rhs)
            if op == "\\=":
                return not self.unifiable(lhs, rhs)
            if op == "is":
                return is_ground(c.rhs) and is_number(lhs) and lhs == eval_arith(c.rhs)
            if op in ORDER_OPS or op in PLAIN_OPS:
                if not (is_ground(lhs) and is_ground(rhs)):
                    return op in ORDER_OPS and self._interval_entails(op, lhs, rhs)
                return _compare(op, eval_arith(lhs), eval_arith(rhs))
        except EngineError:
            return False
        return False

    def _interval_entails(self, op, lhs, rhs) -> bool:
        if type(lhs) is Var and is_number(rhs):
            var, bound = lhs, rhs
        elif type(rhs) is Var and is_number(lhs):
            var, bound, op = rhs, lhs, _FLIP[op]
        else:
            return False
        iv = var.attrs[1] if var.attrs is not None else None
        if iv is None:
            return False
        if op in PLAIN_OPS:
            return False
        # entailed iff no value of the interval satisfies the complement
        return intersect(iv, half_line(_NEGATE[op], bound)) is None


def var_constraints(var: Var) -> tuple[list, Optional[tuple]]:
    """Active constraints of an unbound variable: ``([other side, ...], interval)``.

    A disequality that does not mention ``var`` directly on one side is
    returned as a :class:`Dif`.
    """
    attrs = var.attrs
    if attrs is None:
        return [], None
    out = []
    scratch: list = []
    for dif in attrs[0]:
        mark = len(scratch)
        ok = unify_core(dif.lhs, dif.rhs, scratch, [])
        for v in scratch[mark:]:
            v.ref = None
        del scratch[mark:]
        if not ok:
            continue
        lhs = deref(dif.lhs)
        rhs = deref(dif.rhs)
        if lhs is var:
            other = rhs
        elif rhs is var:
            other = lhs
        else:
            other = dif
        if not any(o is other or (type(o) is not Dif and type(other) is not Dif and identical(o, other)) for o in out):
            out.append(other)
    return out, attrs[1]
