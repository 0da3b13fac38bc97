"""The compiled and pure-Python kernels must agree on every operation."""

import pytest
from hypothesis import given, settings, strategies as st

from dccasp import _pykernels as py

ck = pytest.importorskip("dccasp._ckernels")

# neutral term shape: ("v", i) | ("s", name, [shapes]) | constant
_leaf = st.one_of(
    st.integers(0, 3).map(lambda i: ("v", i)),
    st.integers(-2, 2),
    st.sampled_from(["a", "b"]),
)
shapes = st.recursive(
    _leaf,
    lambda inner: st.tuples(st.just("s"), st.sampled_from(["f", "g"]), st.lists(inner, min_size=1, max_size=3)),
    max_leaves=8,
)


def build(k, shape, env):
    if type(shape) is tuple and shape[0] == "v":
        if shape[1] not in env:
            env[shape[1]] = k.Var(f"V{shape[1]}")
        return env[shape[1]]
    if type(shape) is tuple:
        return k.Struct(shape[1], tuple(build(k, s, env) for s in shape[2]))
    return shape


def neutral(k, t, env):
    """Kernel-independent view of a term; unbound variables become their index."""
    t = k.deref(t)
    if type(t) is k.Var:
        for i, v in env.items():
            if v is t:
                return ("v", i)
        return ("v", None)
    if type(t) is k.Struct:
        return ("s", t.name, [neutral(k, a, env) for a in t.args])
    return t


def both(a, b):
    out = []
    for k in (py, ck):
        env = {}
        out.append((k, build(k, a, env), build(k, b, env), env))
    return out


@settings(max_examples=300, deadline=None)
@given(shapes, shapes)
def test_unify_agrees(a, b):
    results = []
    for k, ta, tb, env in both(a, b):
        trail, woken = [], []
        ok = k.unify_core(ta, tb, trail, woken)
        view = (ok, neutral(k, ta, env), neutral(k, tb, env)) if ok else (ok,)
        k.undo_trail(trail, 0)
        assert all(k.deref(v) is v for v in env.values())
        results.append(view)
    assert results[0] == results[1]


@settings(max_examples=300, deadline=None)
@given(shapes, shapes)
def test_queries_agree(a, b):
    results = []
    for k, ta, tb, env in both(a, b):
        results.append(
            (
                k.identical(ta, tb),
                k.is_ground(ta),
                k.ground_key(ta),
                [neutral(k, v, env) for v in k.term_vars(ta, [])],
                neutral(k, k.resolve(ta), env),
            )
        )
    assert results[0] == results[1]


@settings(max_examples=100, deadline=None)
@given(shapes)
def test_occurs_agrees(a):
    results = []
    for k in (py, ck):
        env = {}
        t = build(k, a, env)
        v = env.get(0) or k.Var("X")
        results.append(k.occurs(v, t))
    assert results[0] == results[1]


def test_undo_trail_records():
    for k in (py, ck):
        v, w = k.Var("V"), k.Var("W")
        w.attrs = "old"
        seen = []
        trail = []
        k.unify_core(v, 1, trail, [])
        trail.append((w, "old"))
        w.attrs = "new"
        trail.append((seen.append, "called"))
        k.undo_trail(trail, 0)
        assert trail == [] and k.deref(v) is v and w.attrs == "old" and seen == ["called"]
