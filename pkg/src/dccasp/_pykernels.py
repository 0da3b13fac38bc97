"""Pure-Python term kernels.

This module and the compiled ``_ckernels`` extension expose the same names;
``dccasp.terms`` picks one at import time.
"""

from itertools import count

_serials = count()


class Var:
    """A logic variable.  ``ref`` is None while unbound."""

    __slots__ = ("name", "ref", "attrs", "serial")

    def __init__(self, name=None):
        self.name = name
        self.ref = None
        self.attrs = None
        self.serial = next(_serials)

    def __repr__(self):
        if self.ref is not None:
            return repr(deref(self))
        return f"_{self.name or 'G'}{self.serial}"


class Struct:
    """Compound term ``name(args...)``; args is a non-empty tuple."""

    __slots__ = ("name", "args")

    def __init__(self, name, args):
        self.name = name
        self.args = args

    def __eq__(self, other):
        return (
            type(other) is Struct
            and self.name == other.name
            and self.args == other.args
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.name, self.args))

    def __repr__(self):
        return f"{self.name}({', '.join(map(repr, self.args))})"


class Slot:
    """Placeholder for the i-th variable of a clause template."""

    __slots__ = ("index", "name")

    def __init__(self, index, name=None):
        self.index = index
        self.name = name

    def __repr__(self):
        return f"Slot({self.index})"


class TStruct:
    """Compound template node that contains at least one Slot."""

    __slots__ = ("name", "args")

    def __init__(self, name, args):
        self.name = name
        self.args = args

    def __repr__(self):
        return f"T{self.name}{self.args!r}"


def deref(t):
    while type(t) is Var:
        r = t.ref
        if r is None:
            return t
        t = r
    return t


def occurs(v, t):
    t = deref(t)
    if t is v:
        return True
    if type(t) is Struct:
        for a in t.args:
            if occurs(v, a):
                return True
    return False


def unify_core(a, b, trail, woken):
    """Structural unification with occurs check.

    Bindings are pushed onto ``trail``; bound variables that carry
    constraint attributes are appended to ``woken``.  The caller undoes the
    trail on failure.
    """
    a = deref(a)
    b = deref(b)
    if a is b:
        return True
    ta = type(a)
    tb = type(b)
    if ta is Var:
        if tb is Var:
            # younger variable points at the older one
            if a.serial < b.serial:
                a, b = b, a
        elif tb is Struct and occurs(a, b):
            return False
        a.ref = b
        trail.append(a)
        if a.attrs is not None:
            woken.append(a)
        return True
    if tb is Var:
        if ta is Struct and occurs(b, a):
            return False
        b.ref = a
        trail.append(b)
        if b.attrs is not None:
            woken.append(b)
        return True
    if ta is Struct:
        if tb is not Struct or a.name != b.name:
            return False
        aa = a.args
        ba = b.args
        n = len(aa)
        if n != len(ba):
            return False
        for i in range(n):
            if not unify_core(aa[i], ba[i], trail, woken):
                return False
        return True
    if tb is Struct:
        return False
    return ta is tb and a == b


def identical(a, b):
    a = deref(a)
    b = deref(b)
    if a is b:
        return True
    ta = type(a)
    if ta is Struct:
        if type(b) is not Struct or a.name != b.name:
            return False
        aa = a.args
        ba = b.args
        if len(aa) != len(ba):
            return False
        for i in range(len(aa)):
            if not identical(aa[i], ba[i]):
                return False
        return True
    if ta is Var or type(b) is Var:
        return False
    return ta is type(b) and a == b


def is_ground(t):
    t = deref(t)
    tt = type(t)
    if tt is Var:
        return False
    if tt is Struct:
        for a in t.args:
            if not is_ground(a):
                return False
    return True


def ground_key(t):
    """Hashable key of a ground term, or None if ``t`` is not ground."""
    t = deref(t)
    tt = type(t)
    if tt is Var:
        return None
    if tt is Struct:
        key = [t.name]
        for a in t.args:
            k = ground_key(a)
            if k is None:
                return None
            key.append(k)
        return tuple(key)
    return t


def resolve(t):
    """Copy of ``t`` with every bound variable replaced by its value."""
    t = deref(t)
    if type(t) is Struct:
        return Struct(t.name, tuple([resolve(a) for a in t.args]))
    return t


def rename(t, mapping):
    """Copy of ``t`` with unbound variables replaced through ``mapping``."""
    t = deref(t)
    tt = type(t)
    if tt is Var:
        return mapping.get(t, t)
    if tt is Struct:
        return Struct(t.name, tuple([rename(a, mapping) for a in t.args]))
    return t


def instantiate(t, regs):
    tt = type(t)
    if tt is Slot:
        r = regs[t.index]
        if r is None:
            r = regs[t.index] = Var(t.name)
        return r
    if tt is TStruct:
        return Struct(t.name, tuple([instantiate(a, regs) for a in t.args]))
    return t


def term_vars(t, acc):
    """Append unbound variables of ``t`` to ``acc`` in first-occurrence order."""
    t = deref(t)
    tt = type(t)
    if tt is Var:
        for v in acc:
            if v is t:
                return acc
        acc.append(t)
    elif tt is Struct:
        for a in t.args:
            term_vars(a, acc)
    return acc


def undo_trail(trail, mark):
    """Pop trail records down to ``mark``.

    A record is a bound ``Var`` (unbind it), ``(var, old_attrs)`` (restore the
    attributes) or ``(fn, arg)`` (call ``fn(arg)``).
    """
    while len(trail) > mark:
        e = trail.pop()
        if type(e) is Var:
            e.ref = None
        elif type(e[0]) is Var:
            e[0].attrs = e[1]
        else:
            e[0](e[1])
