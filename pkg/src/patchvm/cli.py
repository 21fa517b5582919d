"""Command-line front door.

Subcommands:
  validate   run a patch pool against a classpath in one mode
  compare    diff two run reports (exit code 2 when statuses diverge)
  gen-corpus write a deterministic synthetic corpus tree

Exit codes: 0 success, 1 configuration or I/O error, 2 divergence found
(compare only).
"""

from __future__ import annotations

import argparse
import sys

from . import corpus
from .errors import DigestMismatchError, PatchVmError
from .pollution import analyze
from .report import (
    build_report,
    classpath_digest,
    compare_reports,
    load_classpath,
    load_manifest,
    load_patch_pool,
    load_report,
    atomic_write,
    save_report,
    timing_summary,
    write_csv,
)
from .validator import RunConfig, validate_pool
from .vm import DEFAULT_ALLOC_BUDGET, DEFAULT_STEP_BUDGET


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patchvm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a patch pool")
    v.add_argument("--classpath", required=True, help="directory of .cls files")
    v.add_argument("--tests", required=True, help="test manifest file")
    v.add_argument("--pool", required=True, help="patch pool directory")
    v.add_argument("--mode", required=True, choices=("restart", "vanilla", "reset"))
    v.add_argument("--step-budget", type=int, default=DEFAULT_STEP_BUDGET)
    v.add_argument("--alloc-budget", type=int, default=DEFAULT_ALLOC_BUDGET)
    v.add_argument("--reset-hook", default=None, help="Class.method run after each epoch reset")
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.add_argument("--csv", default=None, help="write per-patch CSV rows here")
    v.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("compare", help="diff two run reports")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--out", default=None, help="write the divergence summary here")

    g = sub.add_parser("gen-corpus", help="generate a synthetic corpus tree")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--classes", type=int, required=True)
    g.add_argument("--patches", type=int, required=True)
    g.add_argument("--pollution-rate", type=float, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--init-size", type=int, default=None, help="list length built by every initializer")

    return parser


def _cmd_validate(args) -> int:
    classes = load_classpath(args.classpath)
    tests, failing = load_manifest(args.tests)
    pool = load_patch_pool(args.pool)
    cfg = RunConfig(
        mode=args.mode,
        step_budget=args.step_budget,
        alloc_budget=args.alloc_budget,
        failing_tests=failing,
        reset_hook=args.reset_hook,
        seed=args.seed,
    )
    statuses, telemetry = validate_pool(classes, tests, pool, cfg)
    digest = classpath_digest(classes, tests, pool)
    report = build_report(cfg, digest, statuses, telemetry, analyze(classes))
    for rec in report.patches:
        suffix = f" failing_test={rec.failing_test}" if rec.failing_test else ""
        print(f"{rec.id}: {rec.status}{suffix}")
    print(
        f"total: {len(report.patches)} patches, "
        f"{telemetry.sessions_created} sessions, {report.totals['wall_ms']:.1f} ms"
    )
    if args.report:
        save_report(report, args.report)
    if args.csv:
        write_csv(report, args.csv)
    return 0


def _cmd_compare(args) -> int:
    a = load_report(args.a)
    b = load_report(args.b)
    div = compare_reports(a, b)
    lines = [f"{pid}: {sa} != {sb}" for pid, sa, sb in div.entries]
    lines.append(f"mismatches: {div.mismatch_count} / {div.total} ({div.ratio_percent})")
    timing = timing_summary(a, b)
    lines.append(f"speedup (a/b): {timing['speedup']:.1f}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        atomic_write(args.out, text)
    return 2 if div.mismatch_count else 0


def _cmd_gen_corpus(args) -> int:
    out = corpus.generate_pool(
        args.seed, args.classes, args.patches, args.pollution_rate, args.out, args.init_size
    )
    print(f"corpus written to {out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "gen-corpus":
            return _cmd_gen_corpus(args)
    except DigestMismatchError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (PatchVmError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    raise AssertionError(args.command)


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
