"""Brute-force stable models of finitely groundable programs.

Independent of the engine: grounding substitutes every tuple of universe
constants, and models come from the Gelfond-Lifschitz reduct computed
directly over sets of ground atoms.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Optional

from dccasp.constraints import EngineError, eval_arith
from dccasp.syntax import Clause, Constraint, Lit, Program, goal_vars
from dccasp.terms import Struct, Var, deref, is_ground, rename, resolve

MAX_BRUTE_ATOMS = 20
MAX_GUESS_ATOMS = 64
MAX_INSTANCES = 200_000


class OracleError(Exception):
    pass


# ------------------------------------------------------------ grounding


def _walk(t, acc: set) -> None:
    t = deref(t)
    if type(t) is Struct:
        for a in t.args:
            _walk(a, acc)
    elif type(t) is not Var:
        acc.add(t)


def _has_open_compound(t) -> bool:
    t = deref(t)
    return type(t) is Struct and not is_ground(t)


def universe_of(program: Program) -> list:
    """Constants and numbers occurring as arguments anywhere in the program."""
    acc: set = set()
    for clause in list(program.clauses) + list(program.denials):
        goals = ([clause.head] if clause.head is not None else []) + list(clause.body)
        for g in goals:
            if type(g) is Lit:
                atom = deref(g.atom)
                if type(atom) is Struct:
                    for a in atom.args:
                        _walk(a, acc)
            elif type(g) is Constraint:
                for side in (g.lhs, g.rhs):
                    t = deref(side)
                    if type(t) is not Struct:
                        _walk(t, acc)
    return sorted(acc, key=lambda c: (type(c) is str, str(c)))


def _eval_constraint(c: Constraint) -> bool:
    lhs, rhs = resolve(c.lhs), resolve(c.rhs)
    op = c.op
    if op == "=":
        return lhs == rhs
    if op == "\\=":
        return lhs != rhs
    if op == "is":
        try:
            return lhs == eval_arith(rhs)
        except EngineError:
            return False
    try:
        a, b = eval_arith(lhs), eval_arith(rhs)
    except EngineError:
        return False
    table = {
        "<": a < b, "#<": a < b, ">": a > b, "#>": a > b,
        "=<": a <= b, "#=<": a <= b, ">=": a >= b, "#>=": a >= b,
        "=:=": a == b, "#=": a == b, "=\\=": a != b, "#\\=": a != b,
    }
    if op not in table:
        raise OracleError(f"unsupported constraint {op}")
    return table[op]


def _ground_clause(clause: Clause, universe: list) -> Iterable[Clause]:
    goals = ([clause.head] if clause.head is not None else []) + list(clause.body)
    for g in goals:
        if type(g) is Lit and type(deref(g.atom)) is Struct:
            if any(_has_open_compound(a) for a in deref(g.atom).args):
                raise OracleError("function symbols over variables make the grounding infinite")
        elif type(g) not in (Lit, Constraint):
            raise OracleError(f"cannot ground goal {g!r}")
    vs = goal_vars(goals)
    for values in itertools.product(universe, repeat=len(vs)):
        mapping = dict(zip(vs, values))
        body = []
        keep = True
        for g in clause.body:
            if type(g) is Constraint:
                if not _eval_constraint(Constraint(g.op, rename(g.lhs, mapping), rename(g.rhs, mapping))):
                    keep = False
                    break
            else:
                body.append(Lit(g.positive, resolve(rename(g.atom, mapping))))
        if keep:
            head = None if clause.head is None else Lit(True, resolve(rename(clause.head.atom, mapping)))
            yield Clause(head, tuple(body))


def ground_program(program: Program, universe: Optional[Iterable] = None) -> Program:
    """All ground instances over ``universe`` (default: the program's own
    constants), with ground constraints evaluated and dropped."""
    universe = universe_of(program) if universe is None else list(universe)
    for c in universe:
        if type(c) not in (str, int, Fraction):
            raise OracleError(f"universe element {c!r} is not a constant")
    out = Program(shows=list(program.shows))
    count = 0
    for src, dst in ((program.clauses, out.clauses), (program.denials, out.denials)):
        for clause in src:
            for g in _ground_clause(clause, universe):
                count += 1
                if count > MAX_INSTANCES:
                    raise OracleError("grounding too large")
                dst.append(g)
    return out


# ------------------------------------------------------------ stable models


def _rules(ground: Program):
    rules = []
    for c in ground.clauses:
        pos = frozenset(l.atom for l in c.body if l.positive)
        neg = frozenset(l.atom for l in c.body if not l.positive)
        rules.append((c.head.atom, pos, neg))
    denials = []
    for c in ground.denials:
        pos = frozenset(l.atom for l in c.body if l.positive)
        neg = frozenset(l.atom for l in c.body if not l.positive)
        denials.append((pos, neg))
    return rules, denials


def _least_model(definite) -> set:
    """Least model of definite rules given as ``(head, positive_body)``."""
    model: set = set()
    changed = True
    while changed:
        changed = False
        for head, pos in definite:
            if head not in model and pos <= model:
                model.add(head)
                changed = True
    return model


def _reduct_model(rules, s) -> set:
    return _least_model([(h, p) for h, p, n in rules if not (n & s)])


def _violates(denials, s) -> bool:
    return any(p <= s and not (n & s) for p, n in denials)


def atoms_of(ground: Program) -> set:
    atoms = set()
    for c in list(ground.clauses) + list(ground.denials):
        if c.head is not None:
            atoms.add(c.head.atom)
        atoms.update(l.atom for l in c.body)
    return atoms


def stable_models_bruteforce(ground: Program) -> set:
    """Every subset S of the atoms with S = LM(P^S), denials respected."""
    atoms = sorted(atoms_of(ground), key=repr)
    if len(atoms) > MAX_BRUTE_ATOMS:
        raise OracleError(f"{len(atoms)} atoms exceed the brute-force limit {MAX_BRUTE_ATOMS}")
    rules, denials = _rules(ground)
    out = set()
    for r in range(len(atoms) + 1):
        for subset in itertools.combinations(atoms, r):
            s = frozenset(subset)
            if _reduct_model(rules, s) == s and not _violates(denials, s):
                out.add(s)
    return out


def stable_models(ground: Program) -> set:
    """All stable models, as frozensets of ground atoms.

    The reduct only depends on which negated atoms are in S, so the search
    enumerates assignments to those atoms (with bound propagation) and checks
    each candidate exactly.
    """
    rules, denials = _rules(ground)
    # atoms that can never be derived are false in every model
    upper = _least_model([(h, p) for h, p, n in rules])
    rules = [(h, p, n & upper) for h, p, n in rules if p <= upper]
    denials = [(p, n & upper) for p, n in denials if p <= upper]
    guess = sorted({a for _, _, n in rules for a in n} | {a for _, n in denials for a in n}, key=repr)
    if len(guess) > MAX_GUESS_ATOMS:
        raise OracleError(f"{len(guess)} negated atoms exceed the limit {MAX_GUESS_ATOMS}")

    out = set()

    def search(i: int, true: frozenset, false: frozenset) -> None:
        lower = _least_model([(h, p) for h, p, n in rules if n <= false])
        if lower & false:
            return
        hi = _least_model([(h, p) for h, p, n in rules if not (n & true)])
        if not true <= hi:
            return
        if any(p <= lower and n <= false for p, n in denials):
            return
        if i == len(guess):
            s = frozenset(_reduct_model(rules, true))
            if s & set(guess) == true and not _violates(denials, s):
                out.add(s)
            return
        a = guess[i]
        search(i + 1, true, false | {a})
        search(i + 1, true | {a}, false)

    search(0, frozenset(), frozenset())
    return out


# ------------------------------------------------------------ embedding


def satisfies(model: frozenset, literals) -> bool:
    """True when positive literals are in ``model`` and negative ones are not."""
    return all((atom in model) == positive for positive, atom in literals)


def answer_literals(answer) -> list:
    """``(positive, ground_atom)`` pairs of an engine answer's model."""
    return [(e.positive, resolve(e.atom)) for e in answer.model]


def embedding_counterexamples(answers, models, query_lits) -> list:
    """Violations of the oracle-equivalence property.

    Each answer's positive literals must lie inside some stable model, and
    every stable model satisfying the query must extend the full literal set
    of some answer.
    """
    problems = []
    lit_sets = [answer_literals(a) for a in answers]
    for lits in lit_sets:
        pos = {atom for p, atom in lits if p}
        if not any(pos <= m for m in models):
            problems.append(("unsupported answer", sorted(map(repr, pos))))
    for m in models:
        if satisfies(m, query_lits) and not any(satisfies(m, lits) for lits in lit_sets):
            problems.append(("missed model", sorted(map(repr, m))))
    return problems
