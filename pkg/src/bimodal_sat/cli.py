"""Command-line front end: ``solve``, ``count``, ``validate`` and ``bench``.

Exit codes of ``solve``: 0 SAT, 1 UNSAT, 2 bad input, 3 resource limit,
4 internal invariant violation or oracle disagreement.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .formula import ParseError, lengths, parse, subformulas
from .models import (
    ModelFormatError,
    UnknownWorld,
    check_frame,
    model_check,
    model_from_json,
    model_from_tableau,
    model_to_json,
)
from .oracle import TooLarge, exhaustive_search, verify_partial_tableau
from .solver import InvariantViolation, ResourceLimit, SearchOptions, solve, step_limit_from_env
from .tableau import Logic, universe

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3
EXIT_INTERNAL = 4

LOGIC_CHOICES = [x.value for x in Logic]

BENCH_FIELDS = [
    "formula", "logic", "verdict", "a", "A", "n", "max_depth", "depth_bound",
    "steps", "wall_time", "error",
]


def read_suite(path: str) -> list[str]:
    """Formula lines of a file; blank lines and ``#`` comments are skipped."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _formula_text(args) -> str:
    if args.formula is not None:
        return args.formula
    lines = read_suite(args.file)
    if len(lines) != 1:
        raise ValueError(f"{args.file} must hold exactly one formula, found {len(lines)}")
    return lines[0]


def cmd_solve(args) -> int:
    try:
        f = parse(_formula_text(args))
    except ParseError as e:
        _err(f"parse error: {e}")
        return EXIT_INPUT
    except (OSError, ValueError) as e:
        _err(f"error: {e}")
        return EXIT_INPUT
    x = Logic(args.logic)
    opts = SearchOptions(
        logic=x,
        memoize=args.memoize,
        step_limit=args.limit_steps,
        time_limit=args.time_limit,
        collect_tableau=bool(args.model_out or args.oracle),
    )
    try:
        v = solve(f, opts)
    except ResourceLimit as e:
        _err(f"resource limit: {e}")
        return EXIT_LIMIT
    except InvariantViolation as e:
        _err(f"invariant violation: {e}")
        return EXIT_INTERNAL
    print("SAT" if v.satisfiable else "UNSAT")

    if args.oracle:
        try:
            expected = exhaustive_search(f, x)
        except TooLarge as e:
            _err(f"oracle skipped: {e}")
        else:
            if expected != v.satisfiable:
                _err(f"oracle disagreement: solver says {v.satisfiable}, oracle says {expected}")
                return EXIT_INTERNAL
        if v.witness is not None:
            w = v.witness
            if not verify_partial_tableau(v.universe, x, w.clouds, [w.initial]):
                _err("oracle disagreement: witness is not a partial tableau")
                return EXIT_INTERNAL
    if args.stats:
        print(json.dumps({"logic": x.value, "satisfiable": v.satisfiable, **v.stats.as_dict()}))
    if args.model_out and v.witness is not None:
        m = model_from_tableau(v.universe, v.witness)
        Path(args.model_out).write_text(json.dumps(model_to_json(m, v.universe), indent=2) + "\n")
    return EXIT_SAT if v.satisfiable else EXIT_UNSAT


def cmd_count(args) -> int:
    try:
        f = parse(args.formula)
    except ParseError as e:
        _err(f"parse error: {e}")
        return EXIT_INPUT
    x = Logic(args.logic)
    n, ell = lengths(f)
    a = subformulas(f).a
    A = universe(f, x).A
    rows = [("formula", str(f)), ("logic", x.label), ("a", a), ("A", A), ("ell", ell), ("n", n)]
    failed = False
    if ell >= 3:
        bound = 2 ** (2 * ell / 3)
        failed = not A < bound
        rows.append(("bound", f"2^(2*{ell}/3) = {bound:.2f}"))
        rows.append(("check", "FAIL" if failed else "PASS"))
    for key, val in rows:
        print(f"{key:<8}{val}")
    return 1 if failed else 0


def cmd_validate(args) -> int:
    try:
        m = model_from_json(Path(args.model).read_text())
    except OSError as e:
        _err(f"cannot read model: {e}")
        return EXIT_INPUT
    except ModelFormatError as e:
        _err(str(e))
        return EXIT_INPUT
    if args.logic:
        x = Logic(args.logic)
    elif m.logic is not None:
        x = m.logic
    else:
        _err("no logic given and none recorded in the model")
        return EXIT_INPUT
    report = check_frame(m, x)
    print(f"frame check for {x.label}")
    print(report)
    ok = report.ok
    if args.formula:
        try:
            f = parse(args.formula)
        except ParseError as e:
            _err(f"parse error: {e}")
            return EXIT_INPUT
        w = args.world if args.world is not None else (m.designated or 0)
        try:
            holds = model_check(m, w, f)
        except UnknownWorld:
            _err(f"unknown world {w}")
            return EXIT_INPUT
        print(f"world {w} satisfies {f}: {'true' if holds else 'false'}")
        ok = ok and holds
    return 0 if ok else 1


def cmd_bench(args) -> int:
    try:
        lines = read_suite(args.suite)
    except (OSError, UnicodeDecodeError) as e:
        _err(f"cannot read suite: {e}")
        return EXIT_INPUT
    logics = list(Logic) if args.logic == "all" else [Logic(args.logic)]
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for text in lines:
            for x in logics:
                writer.writerow(_bench_row(text, x, args))
    finally:
        if args.out:
            out.close()
    return 0


def _bench_row(text: str, x: Logic, args) -> dict:
    row = {"formula": text, "logic": x.value}
    try:
        f = parse(text)
    except ParseError as e:
        return {**row, "verdict": "ERROR", "error": str(e)}
    opts = SearchOptions(
        logic=x, memoize=args.memoize, step_limit=args.limit_steps,
        time_limit=args.time_limit, collect_tableau=False)
    t0 = time.perf_counter()
    try:
        v = solve(f, opts)
    except (ResourceLimit, InvariantViolation) as e:
        return {**row, "verdict": "LIMIT" if isinstance(e, ResourceLimit) else "ERROR",
                "wall_time": f"{time.perf_counter() - t0:.4f}", "error": str(e)}
    st = v.stats
    return {
        **row,
        "verdict": "SAT" if v.satisfiable else "UNSAT",
        "a": st.a,
        "A": st.A,
        "n": st.n,
        "max_depth": st.max_recursion_depth,
        "depth_bound": st.depth_bound,
        "steps": st.steps,
        "wall_time": f"{st.elapsed:.4f}",
        "error": "",
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bimodal-sat",
        description="Satisfiability of bimodal formulas in K4xS5, S4xS5 and SSL.")
    sub = p.add_subparsers(dest="command", required=True)

    def search_flags(q, logic_choices=LOGIC_CHOICES):
        q.add_argument("--logic", choices=logic_choices, default="s4s5")
        q.add_argument("--memoize", action="store_true", help="cache search states (more memory)")
        q.add_argument("--limit-steps", type=int, default=step_limit_from_env(),
                       help="recursion step budget (default: $BIMODAL_SAT_STEP_LIMIT or 2^32)")
        q.add_argument("--time-limit", type=float, default=None, help="seconds")

    s = sub.add_parser("solve", help="decide one formula")
    search_flags(s)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--formula")
    src.add_argument("--file", help="file holding one formula")
    s.add_argument("--model-out", help="write a witness model as JSON")
    s.add_argument("--stats", action="store_true", help="print search statistics as JSON")
    s.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("count", help="count tableau-sets and check the size bound")
    c.add_argument("--logic", choices=LOGIC_CHOICES, default="s4s5")
    c.add_argument("--formula", required=True)
    c.set_defaults(func=cmd_count)

    v = sub.add_parser("validate", help="check a model JSON file")
    v.add_argument("--logic", choices=LOGIC_CHOICES)
    v.add_argument("--model", required=True)
    v.add_argument("--formula")
    v.add_argument("--world", type=int)
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("bench", help="solve a suite and print CSV")
    search_flags(b, LOGIC_CHOICES + ["all"])
    b.add_argument("--suite", required=True)
    b.add_argument("--out", help="CSV path (default: stdout)")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
