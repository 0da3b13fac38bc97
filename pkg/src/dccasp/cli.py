"""Command-line driver and benchmark harness.

    dccasp [--dcc] [-sN] [-e GOALS] [--stats[=raw]] [--tree] [--code]
           [--verify] [--no-olon] FILE...
    dccasp bench SUITE [--out FILE]

A suite file has one row per line, ``label ; file1,file2 ; query ; repeats``;
blank lines and lines starting with ``#`` are ignored.  Relative file names
are resolved against the suite file's directory.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Optional

from .constraints import EngineError
from .engine import Engine
from .output import RenderOptions, canonical_answer, render_answer, render_compiled, render_stats, render_stats_raw
from .syntax import ParseError, Program, parse_program, parse_query
from .transform import compile_program

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class LoadError(Exception):
    pass


def load_program(paths) -> Program:
    """Concatenate the programs in ``paths`` (in order) into one."""
    program = Program()
    for path in paths:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise LoadError(f"{path}: {exc.strerror or exc}") from None
        try:
            program = program.extend(parse_program(text))
        except ParseError as exc:
            raise LoadError(f"{path}:{exc.line}:{exc.col}: {exc.message}") from None
    return program


def run(compiled, query, dcc: bool, limit: int = 0):
    """Answers and stats of one query; ``limit`` 0 means all answers."""
    engine = Engine(compiled, dcc=dcc)
    answers = []
    for answer in engine.run(query):
        answers.append(answer)
        if limit and len(answers) >= limit:
            break
    return answers, engine.stats


def rendered_multiset(answers) -> Counter:
    return Counter(canonical_answer(a) for a in answers)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dccasp", description="Goal-directed answer set evaluation.")
    p.add_argument("files", nargs="*", help="program files, concatenated in order")
    p.add_argument("--dcc", action="store_true", help="enable dynamic consistency checking")
    p.add_argument("-s", dest="limit", type=int, default=0, metavar="N", help="stop after N answers (0 = all)")
    p.add_argument("-e", dest="query", metavar="GOALS", help="query to run instead of the embedded ones")
    p.add_argument("--stats", action="store_const", const="text", help="print run statistics")
    p.add_argument("--stats=raw", dest="stats", action="store_const", const="raw", help="print statistics as one key=value line")
    p.add_argument("--tree", action="store_true", help="print justification trees")
    p.add_argument("--code", action="store_true", help="print the compiled program")
    p.add_argument("--verify", action="store_true", help="check that DCC does not change the answers")
    p.add_argument("--no-olon", action="store_true", help="skip odd-loop analysis")
    p.add_argument("--all", action="store_true", help="ignore #show directives when printing models")
    return p


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "bench":
        return bench_main(argv[1:])
    parser = _parser()
    argv = ["--stats" if a == "--stats=text" else a for a in argv]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if not args.files and args.query is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.limit < 0:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        program = load_program(args.files)
        queries = [parse_query(args.query)] if args.query is not None else program.queries
    except LoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: query:{exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE

    compiled = compile_program(program, olon=not args.no_olon)
    if args.code:
        print(render_compiled(compiled), end="")
    if not queries:
        if not args.code:
            print("error: no query (use -e or add a ?- line)", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_OK

    opts = RenderOptions(show_filter=not args.all, tree=args.tree)
    status = EXIT_OK
    for query in queries:
        try:
            status = max(status, _run_one(compiled, query, args, opts))
        except EngineError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        except RecursionError:
            print("error: evaluation too deep", file=sys.stderr)
            return EXIT_RUNTIME
    return status


def _run_one(compiled, query, args, opts) -> int:
    from .output import Namer, TermWriter
    from .syntax import goal_vars

    w = TermWriter(Namer({v: v.name for v in goal_vars(query) if v.name != "_"}), annotate=False)
    print(f"?- {', '.join(w.goal(g) for g in query)}.")
    engine = Engine(compiled, dcc=args.dcc)
    answers = []
    for answer in engine.run(query):
        answers.append(answer)
        print()
        print(render_answer(answer, opts, len(answers)))
        sys.stdout.flush()
        if args.limit and len(answers) >= args.limit:
            break
    if not answers:
        print()
        print("no models")
    if args.stats:
        print()
        print(render_stats_raw(engine.stats) if args.stats == "raw" else render_stats(engine.stats, args.dcc))
    if args.verify:
        other, _ = run(compiled, query, not args.dcc, args.limit)
        same = rendered_multiset(answers) == rendered_multiset(other)
        print()
        print("verify: ok" if same else "verify: MISMATCH between DCC on and off")
        if not same:
            return EXIT_MISMATCH
    return EXIT_OK


# ------------------------------------------------------------ benchmarks


def read_suite(path) -> list:
    """Rows ``(label, [files], query_text, repeats)`` of a suite file."""
    base = Path(path).parent
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 4:
            raise LoadError(f"{path}:{lineno}: expected 'label ; files ; query ; repeats'")
        label, files, query, repeats = parts
        try:
            n = int(repeats)
        except ValueError:
            raise LoadError(f"{path}:{lineno}: repeats must be an integer") from None
        paths = [str(base / f.strip()) for f in files.split(",") if f.strip()]
        rows.append((label, paths, query, max(1, n)))
    return rows


def bench_row(files, query_text, repeats) -> dict:
    program = load_program(files)
    query = parse_query(query_text)
    compiled = compile_program(program)
    row: dict = {}
    for mode, dcc in (("off", False), ("on", True)):
        times = []
        stats = None
        answers = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            answers, stats = run(compiled, query, dcc)
            times.append(time.perf_counter() - t0)
        row[mode] = {"time": statistics.median(times), "stats": stats, "answers": len(answers)}
    row["speedup"] = row["off"]["time"] / row["on"]["time"] if row["on"]["time"] > 0 else float("inf")
    return row


def render_bench(results) -> str:
    header = f"{'benchmark':<28} {'models':>6} {'off (s)':>9} {'on (s)':>9} {'speedup':>8} {'disc off':>9} {'disc on':>8} {'dcc':>6}"
    lines = [header, "-" * len(header)]
    for label, row in results:
        if "error" in row:
            lines.append(f"{label:<28} error: {row['error']}")
            continue
        off, on = row["off"], row["on"]
        lines.append(
            f"{label:<28} {on['answers']:>6} {off['time']:>9.3f} {on['time']:>9.3f} {row['speedup']:>8.1f} "
            f"{off['stats'].nmr_discarded:>9} {on['stats'].nmr_discarded:>8} {on['stats'].dcc_detections:>6}"
        )
    return "\n".join(lines)


def bench_main(argv: list) -> int:
    p = argparse.ArgumentParser(prog="dccasp bench", description="Compare runs with DCC off and on.")
    p.add_argument("suite", help="suite file")
    p.add_argument("--out", help="also write the table to this file")
    try:
        args = p.parse_args(argv)
        rows = read_suite(args.suite)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except (OSError, LoadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    results = []
    for label, files, query, repeats in rows:
        try:
            row = bench_row(files, query, repeats)
        except (LoadError, ParseError, EngineError, RecursionError) as exc:
            row = {"error": str(exc) or type(exc).__name__}
        results.append((label, row))
        print(f"{label}: {'error' if 'error' in row else 'done'}", file=sys.stderr)
    table = render_bench(results)
    print(table)
    if args.out:
        Path(args.out).write_text(table + "\n")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
