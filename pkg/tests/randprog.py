"""Random small ground programs for oracle comparisons."""

from __future__ import annotations

import random

PROPOSITIONAL = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]
WITH_ARGS = ["p(1)", "p(2)", "q(a)", "q(b)", "r(1, a)", "r(2, b)", "s", "t", "u(f(1))", "u(f(2))"]


def random_program(seed: int, n_atoms: int = 6, n_rules: int = 10, n_denials: int = 2, atoms=None) -> str:
    """Rules with 0..3 body literals (about a third negated) plus denials."""
    rng = random.Random(seed)
    pool = list(atoms or PROPOSITIONAL)[:n_atoms]
    lines = []

    def body(k: int) -> str:
        lits = []
        for _ in range(k):
            a = rng.choice(pool)
            lits.append(f"not {a}" if rng.random() < 0.4 else a)
        return ", ".join(lits)

    for _ in range(n_rules):
        head = rng.choice(pool)
        k = rng.choice([0, 1, 1, 2, 2, 3])
        lines.append(f"{head} :- {body(k)}." if k else f"{head}.")
    for _ in range(n_denials):
        lines.append(f":- {body(rng.choice([1, 2, 2, 3]))}.")
    return "\n".join(lines) + "\n"


def query_for(seed: int, n_atoms: int = 6, atoms=None) -> str:
    """A one- or two-literal query over the same atom pool."""
    rng = random.Random(seed * 7919 + 1)
    pool = list(atoms or PROPOSITIONAL)[:n_atoms]
    goals = []
    for _ in range(rng.choice([1, 1, 2])):
        a = rng.choice(pool)
        goals.append(f"not {a}" if rng.random() < 0.3 else a)
    return ", ".join(goals)
