# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels; same names and behaviour as ``_pykernels``."""

from itertools import count

_serials = count()


cdef class Var:
    """A logic variable.  ``ref`` is None while unbound."""

    cdef public object name
    cdef public object ref
    cdef public object attrs
    cdef public long long serial

    def __init__(self, name=None):
        self.name = name
        self.ref = None
        self.attrs = None
        self.serial = next(_serials)

    def __repr__(self):
        if self.ref is not None:
            return repr(deref(self))
        return f"_{self.name or 'G'}{self.serial}"


cdef class Struct:
    """Compound term ``name(args...)``; args is a non-empty tuple."""

    cdef public object name
    cdef public tuple args

    def __init__(self, name, args):
        self.name = name
        self.args = args

    def __eq__(self, other):
        return (
            type(other) is Struct
            and self.name == (<Struct>other).name
            and self.args == (<Struct>other).args
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.name, self.args))

    def __repr__(self):
        return f"{self.name}({', '.join(map(repr, self.args))})"


cdef class Slot:
    """Placeholder for the i-th variable of a clause template."""

    cdef public Py_ssize_t index
    cdef public object name

    def __init__(self, index, name=None):
        self.index = index
        self.name = name

    def __repr__(self):
        return f"Slot({self.index})"


cdef class TStruct:
    """Compound template node that contains at least one Slot."""

    cdef public object name
    cdef public tuple args

    def __init__(self, name, args):
        self.name = name
        self.args = args

    def __repr__(self):
        return f"T{self.name}{self.args!r}"


cdef inline object _deref(object t):
    cdef object r
    while type(t) is Var:
        r = (<Var>t).ref
        if r is None:
            return t
        t = r
    return t


def deref(t):
    return _deref(t)


cdef bint _occurs(Var v, object t):
    t = _deref(t)
    if t is v:
        return True
    if type(t) is Struct:
        for a in (<Struct>t).args:
            if _occurs(v, a):
                return True
    return False


def occurs(v, t):
    return _occurs(v, t)


cdef bint _unify(object a, object b, list trail, list woken) except -1:
    cdef Var va
    cdef Struct sa, sb
    cdef Py_ssize_t i, n
    a = _deref(a)
    b = _deref(b)
    if a is b:
        return True
    ta = type(a)
    tb = type(b)
    if ta is Var:
        if tb is Var:
            if (<Var>a).serial < (<Var>b).serial:
                a, b = b, a
        elif tb is Struct and _occurs(<Var>a, b):
            return False
        va = <Var>a
        va.ref = b
        trail.append(va)
        if va.attrs is not None:
            woken.append(va)
        return True
    if tb is Var:
        if ta is Struct and _occurs(<Var>b, a):
            return False
        va = <Var>b
        va.ref = a
        trail.append(va)
        if va.attrs is not None:
            woken.append(va)
        return True
    if ta is Struct:
        if tb is not Struct:
            return False
        sa = <Struct>a
        sb = <Struct>b
        if sa.name != sb.name:
            return False
        n = len(sa.args)
        if n != len(sb.args):
            return False
        for i in range(n):
            if not _unify(sa.args[i], sb.args[i], trail, woken):
                return False
        return True
    if tb is Struct:
        return False
    return ta is tb and a == b


def unify_core(a, b, list trail, list woken):
    """Structural unification with occurs check (see ``_pykernels``)."""
    return _unify(a, b, trail, woken)


cdef bint _identical(object a, object b) except -1:
    cdef Struct sa, sb
    cdef Py_ssize_t i, n
    a = _deref(a)
    b = _deref(b)
    if a is b:
        return True
    ta = type(a)
    if ta is Struct:
        if type(b) is not Struct:
            return False
        sa = <Struct>a
        sb = <Struct>b
        if sa.name != sb.name:
            return False
        n = len(sa.args)
        if n != len(sb.args):
            return False
        for i in range(n):
            if not _identical(sa.args[i], sb.args[i]):
                return False
        return True
    if ta is Var or type(b) is Var:
        return False
    return ta is type(b) and a == b


def identical(a, b):
    return _identical(a, b)


cdef bint _is_ground(object t) except -1:
    t = _deref(t)
    tt = type(t)
    if tt is Var:
        return False
    if tt is Struct:
        for a in (<Struct>t).args:
            if not _is_ground(a):
                return False
    return True


def is_ground(t):
    return _is_ground(t)


cdef object _ground_key(object t):
    cdef list key
    t = _deref(t)
    tt = type(t)
    if tt is Var:
        return None
    if tt is Struct:
        key = [(<Struct>t).name]
        for a in (<Struct>t).args:
            k = _ground_key(a)
            if k is None:
                return None
            key.append(k)
        return tuple(key)
    return t


def ground_key(t):
    """Hashable key of a ground term, or None if ``t`` is not ground."""
    return _ground_key(t)


cdef object _resolve(object t):
    t = _deref(t)
    if type(t) is Struct:
        return Struct((<Struct>t).name, tuple([_resolve(a) for a in (<Struct>t).args]))
    return t


def resolve(t):
    return _resolve(t)


cdef object _rename(object t, dict mapping):
    t = _deref(t)
    tt = type(t)
    if tt is Var:
        return mapping.get(t, t)
    if tt is Struct:
        return Struct((<Struct>t).name, tuple([_rename(a, mapping) for a in (<Struct>t).args]))
    return t


def rename(t, dict mapping):
    return _rename(t, mapping)


cdef object _instantiate(object t, list regs):
    cdef Slot s
    tt = type(t)
    if tt is Slot:
        s = <Slot>t
        r = regs[s.index]
        if r is None:
            r = Var(s.name)
            regs[s.index] = r
        return r
    if tt is TStruct:
        return Struct((<TStruct>t).name, tuple([_instantiate(a, regs) for a in (<TStruct>t).args]))
    return t


def instantiate(t, list regs):
    return _instantiate(t, regs)


cdef void _term_vars(object t, list acc):
    t = _deref(t)
    tt = type(t)
    if tt is Var:
        for v in acc:
            if v is t:
                return
        acc.append(t)
    elif tt is Struct:
        for a in (<Struct>t).args:
            _term_vars(a, acc)


def term_vars(t, list acc):
    """Append unbound variables of ``t`` to ``acc`` in first-occurrence order."""
    _term_vars(t, acc)
    return acc


def undo_trail(list trail, Py_ssize_t mark):
    """Pop trail records down to ``mark`` (see ``_pykernels.undo_trail``)."""
    cdef object e, first
    while len(trail) > mark:
        e = trail.pop()
        if type(e) is Var:
            (<Var>e).ref = None
        else:
            first = (<tuple>e)[0]
            if type(first) is Var:
                (<Var>first).attrs = (<tuple>e)[1]
            else:
                first((<tuple>e)[1])
