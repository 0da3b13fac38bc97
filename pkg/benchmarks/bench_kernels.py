"""Compare the compiled term kernels with the pure-Python fallback.

Micro timings call each kernel module directly.  End-to-end timings run the
solver in a subprocess, once per kernel, since the kernel is fixed at import.

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import os
import statistics
import subprocess
import sys
import timeit
from pathlib import Path

from dccasp import _pykernels

try:
    from dccasp import _ckernels
except ImportError:
    _ckernels = None

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "tests" / "programs"

END_TO_END = [
    ("hamiltonian-4 dcc", ["hamiltonian.pl", "graph_4.pl"], "reachable(a)"),
    ("n-queens 5 dcc", ["n_queens.pl"], "nqueens(5, Q)"),
]

_RUN = """
import time, sys
from dccasp.cli import load_program, run
from dccasp.syntax import parse_query
from dccasp.terms import KERNEL
from dccasp.transform import compile_program
cp = compile_program(load_program(sys.argv[1].split(',')))
t0 = time.perf_counter()
answers, _ = run(cp, parse_query(sys.argv[2]), True)
print(KERNEL, len(answers), time.perf_counter() - t0)
"""


def deep(k, n):
    x = k.Var("X")
    t = x
    for i in range(n):
        t = k.Struct("f", (i, t, "a"))
    return t, x


def micro(k, number):
    a, _ = deep(k, 40)
    b, _ = deep(k, 40)

    def unify():
        trail = []
        k.unify_core(a, b, trail, [])
        k.undo_trail(trail, 0)

    cases = {
        "unify+undo": unify,
        "resolve": lambda: k.resolve(a),
        "term_vars": lambda: k.term_vars(a, []),
        "ground_key": lambda: k.ground_key(a),
    }
    return {name: min(timeit.repeat(fn, number=number, repeat=5)) / number for name, fn in cases.items()}


def end_to_end(files, query, pure, repeats):
    env = dict(os.environ)
    if pure:
        env["DCCASP_PURE_PYTHON"] = "1"
    paths = ",".join(str(PROGRAMS / f) for f in files)
    times = []
    for _ in range(repeats):
        out = subprocess.run([sys.executable, "-c", _RUN, paths, query], env=env, capture_output=True, text=True, check=True)
        kernel, n, t = out.stdout.split()
        times.append(float(t))
    return kernel, int(n), statistics.median(times)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--number", type=int, default=2000)
    args = p.parse_args()

    if _ckernels is None:
        print("compiled kernels not built; run `python setup.py build_ext --inplace`")
        return 1

    py_t = micro(_pykernels, args.number)
    c_t = micro(_ckernels, args.number)
    print(f"{'kernel op':<16} {'python (us)':>12} {'compiled (us)':>14} {'speedup':>8}")
    for name in py_t:
        print(f"{name:<16} {py_t[name] * 1e6:>12.2f} {c_t[name] * 1e6:>14.2f} {py_t[name] / c_t[name]:>8.1f}")

    print()
    print(f"{'program':<20} {'models':>6} {'python (s)':>11} {'compiled (s)':>13} {'speedup':>8}")
    for label, files, query in END_TO_END:
        kp, n, tp = end_to_end(files, query, True, args.repeats)
        kc, _, tc = end_to_end(files, query, False, args.repeats)
        assert (kp, kc) == ("python", "compiled"), (kp, kc)
        print(f"{label:<20} {n:>6} {tp:>11.3f} {tc:>13.3f} {tp / tc:>8.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
