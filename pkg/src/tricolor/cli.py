"""``tricolor`` command line.

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 degenerate point or
sampling failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import detform, lattice
from .exactalg import DegeneratePointError
from .lattice import EvaluationPoint, StateCache
from .sampling import SamplingError, sample_point
from .suites import SUITES, SuiteConfig, UsageError, run_suite, worker_count

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cmd_enumerate(args) -> int:
    corners = [args.corner % 3] if args.corner is not None else [0, 1, 2]
    states = []
    for r in corners:
        found = lattice.enumerate_states(args.n, r)
        states.extend(found)
        print(f"n={args.n} r={r} states={len(found)}")
    if args.out:
        lattice.write_states(args.out, states)
        print(f"wrote {len(states)} states to {args.out}")
    return EXIT_OK


def _load_point(path: str) -> EvaluationPoint:
    with open(path) as fh:
        return EvaluationPoint.from_json(json.load(fh))


def cmd_z(args) -> int:
    if args.point:
        pt = _load_point(args.point)
        if pt.n != args.n:
            raise UsageError(f"point file has n={pt.n}, expected {args.n}")
    else:
        pt = sample_point(args.n, args.seed, 0)
    r = args.corner % 3
    out: dict = {"n": args.n, "r": r, "point": pt.to_json()}
    exit_code = EXIT_OK
    brute = closed = None
    if args.method in ("bruteforce", "both"):
        states = StateCache(args.cache).get(args.n, r) if args.cache else None
        brute = lattice.partial_partition(args.n, r, pt, states=states)
        out["bruteforce"] = brute.to_json()
    if args.method in ("determinant", "both"):
        closed = detform.z_closed_form(args.n, r, pt)
        out["determinant"] = closed.to_json()
    if args.method == "both":
        out["match"] = brute == closed
        exit_code = EXIT_OK if out["match"] else EXIT_FAIL
    if args.json:
        print(_dump(out))
    else:
        if brute is not None:
            print(f"bruteforce:  {brute}")
        if closed is not None:
            print(f"determinant: {closed}")
        if "match" in out:
            print("match" if out["match"] else "MISMATCH")
    return exit_code


def cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=args.suite,
        n_min=args.n_min,
        n_max=args.n_max,
        trials=args.trials,
        seed=args.seed,
        output="json" if args.json else "text",
        point=_load_point(args.point) if args.point else None,
        cache=args.cache,
        allow_large=args.allow_large,
        inject_fault=args.inject_fault,
        workers=worker_count(),
    )
    report = run_suite(cfg)
    latex = None
    if args.emit_latex:
        ns = [n for n in range(cfg.n_min, min(cfg.n_max, 4) + 1)]
        latex = detform.latex_table(ns, {n: sample_point(n, cfg.seed, 0) for n in ns})
    if args.json:
        obj = report.to_json()
        if latex is not None:
            obj["latex"] = latex
        print(_dump(obj))
    else:
        print("\n".join(report.text_lines()))
        if latex is not None:
            print(latex)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bench(args) -> int:
    print(f"{'n':>2} {'states':>7} {'enumerate_s':>12} {'bruteforce_s':>13} {'closed_form_s':>14}")
    for n in range(1, args.n_max + 1):
        t0 = time.perf_counter()
        states = {r: lattice.enumerate_states(n, r) for r in range(3)}
        t1 = time.perf_counter()
        pt = sample_point(n, args.seed, 0)
        for r in range(3):
            lattice.partial_partition(n, r, pt, states=states[r])
        t2 = time.perf_counter()
        for r in range(3):
            detform.zprime_closed_form(n, r, pt)
        t3 = time.perf_counter()
        print(f"{n:>2} {len(states[0]):>7} {t1 - t0:>12.4f} {t2 - t1:>13.4f} {t3 - t2:>14.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tricolor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="enumerate domain-wall states")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--corner", type=int, help="corner color r (default: all three)")
    p.add_argument("--out", help="write states as JSON lines")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("z", help="evaluate a partial partition function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--corner", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--seed", type=int)
    src.add_argument("--point", help="JSON point file")
    p.add_argument("--method", choices=("bruteforce", "determinant", "both"), default="both")
    p.add_argument("--cache", help="JSON-lines state cache")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_z)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES + ("all",), required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--point", help="JSON point file used in place of the sampled points of its size")
    p.add_argument("--cache", help="JSON-lines state cache (read if present, written otherwise)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--allow-large", action="store_true", help="raise the per-suite n caps")
    p.add_argument("--emit-latex", action="store_true", help="print a LaTeX table of A, B, C and P, Q values")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time enumeration, brute force and closed form")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tricolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegeneratePointError, SamplingError) as exc:
        print(f"tricolor: degenerate point: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (FileNotFoundError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"tricolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
