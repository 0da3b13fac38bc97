"""Term representation.

Terms are plain Python values:

* ``Var``      logic variable (mutable binding cell)
* ``str``      constant (``a``, ``[]``)
* ``int`` / ``Fraction``  exact rational number
* ``Struct``   compound term; lists use ``'.'/2`` cells ending in ``'[]'``

The hot kernels come from the compiled extension when it is available and
fall back to the pure-Python module otherwise.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Union

if os.environ.get("DCCASP_PURE_PYTHON"):
    from . import _pykernels as _k
else:
    try:
        from . import _ckernels as _k  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build
        from . import _pykernels as _k

KERNEL = "compiled" if _k.__name__.endswith("_ckernels") else "python"

Var = _k.Var
Struct = _k.Struct
Slot = _k.Slot
TStruct = _k.TStruct
deref = _k.deref
occurs = _k.occurs
unify_core = _k.unify_core
identical = _k.identical
is_ground = _k.is_ground
ground_key = _k.ground_key
resolve = _k.resolve
rename = _k.rename
instantiate = _k.instantiate
term_vars = _k.term_vars
undo_trail = _k.undo_trail

Number = Union[int, Fraction]
Term = Union["Var", "Struct", str, int, Fraction]

NIL = "[]"
CONS = "."


def number(value: Number) -> Number:
    """Normalize an exact rational: integral fractions become ints."""
    if type(value) is Fraction and value.denominator == 1:
        return value.numerator
    return value


def is_number(t) -> bool:
    tt = type(t)
    return tt is int or tt is Fraction


def is_callable(t) -> bool:
    tt = type(t)
    return tt is str or tt is Struct


def functor(t) -> tuple[str, int]:
    if type(t) is Struct:
        return t.name, len(t.args)
    return t, 0


def args_of(t) -> tuple:
    return t.args if type(t) is Struct else ()


def make_list(items, tail=NIL):
    out = tail
    for item in reversed(list(items)):
        out = Struct(CONS, (item, out))
    return out


def list_items(t):
    """Split a (possibly partial) list into (items, tail)."""
    items = []
    t = deref(t)
    while type(t) is Struct and t.name == CONS and len(t.args) == 2:
        items.append(t.args[0])
        t = deref(t.args[1])
    return items, t


def order_key(t):
    """Sort key implementing the standard order: Var < Number < Atom < Compound."""
    t = deref(t)
    tt = type(t)
    if tt is Var:
        return (0, t.serial)
    if tt is int or tt is Fraction:
        return (1, t)
    if tt is str:
        return (2, t)
    return (3, len(t.args), t.name, tuple(order_key(a) for a in t.args))
