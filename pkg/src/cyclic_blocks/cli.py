"""Command-line interface.

Exit status: 0 on success, 1 on a verification failure or theorem mismatch,
2 on usage errors (including instances above an enumeration guard).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, TextIO, Tuple

from .euclid import DomainError
from .kernel import GeneratorSet, build_generator_set, closed_form_generators
from .oracle import (
    OracleBudget,
    TranslateFamily,
    check_theorems,
    format_theorem_table,
    oracle_v,
    oracle_vbar,
)
from .subsets import SubsetMask, format_positions, parse_positions
from .verifier import Budget, default_jobs, verify_coset_partition, verify_group

ORACLE_GUARD = 8


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _corruption(text: str) -> Tuple[int, int, int, int]:
    try:
        n, t, i, pos = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected N,T,I,POS") from None
    return n, t, i, pos


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclic-blocks",
        description="Hitting subgroups for cyclic block translates: construction, verification, oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_t=True):
        p.add_argument("--n", type=_positive, required=True, help="ground-set size")
        if need_t:
            p.add_argument("--t", type=_positive, required=True, help="block length")
        p.add_argument("--format", choices=("text", "json"), default="text")

    def budget_args(p):
        p.add_argument("--max-exhaustive-t", type=_nonnegative, default=16)
        p.add_argument("--samples", type=_positive, default=100_000, help="combos drawn in sampled mode")
        p.add_argument("--seed", type=_nonnegative, default=0)
        p.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: $CYCLIC_BLOCKS_JOBS or 1)")

    p = sub.add_parser("gens", help="print the generators g_1..g_t")
    common(p)
    p.add_argument("--closed-form", action="store_true", help="use the explicit formulas (Euclid depth <= 3)")

    p = sub.add_parser("verify", help="check every nonzero group element against all windows")
    common(p)
    budget_args(p)

    p = sub.add_parser("cosets", help="canonicalize P[n] and check the coset partition")
    common(p)
    p.add_argument("--max-n", type=_positive, default=20, help="enumeration guard")

    p = sub.add_parser("oracle", help="brute-force v and v_bar for the translates of a base set")
    common(p, need_t=False)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--base", help="comma-separated 1-based positions, e.g. 1,2")
    group.add_argument("--t", type=_positive, help="use the block [t] as base")
    p.add_argument("--mode", choices=("v", "vbar", "both"), default="both")
    p.add_argument("--timeout", type=float, default=None, help="seconds per search")
    p.add_argument("--max-n", type=_positive, default=ORACLE_GUARD, help="oracle guard")

    p = sub.add_parser("sweep", help="verify every (n, t) up to --max-n and reproduce the theorems")
    p.add_argument("--max-n", type=_positive, required=True)
    p.add_argument("--oracle-max-n", type=_nonnegative, default=ORACLE_GUARD)
    p.add_argument("--format", choices=("text", "json"), default="text")
    budget_args(p)
    p.add_argument("--corrupt", type=_corruption, action="append", default=[], help=argparse.SUPPRESS)
    return parser


def _budget(args) -> Budget:
    return Budget(max_exhaustive_t=args.max_exhaustive_t, sample_count=args.samples, seed=args.seed)


def _check_nt(n: int, t: int) -> None:
    if t > n:
        raise UsageError(f"--t must not exceed --n (got t={t}, n={n})")


def _emit(out: TextIO, fmt: str, doc, text: str) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def cmd_gens(args, out: TextIO) -> int:
    _check_nt(args.n, args.t)
    if args.closed_form:
        gs = closed_form_generators(args.n, args.t)
        if gs is None:
            raise UsageError(f"no closed form: Euclid depth of ({args.n}, {args.t}) exceeds 3")
    else:
        gs = build_generator_set(args.n, args.t)
    if args.format == "json":
        out.write(gs.to_json() + "\n")
        return 0
    d = gs.dec
    lines = [
        f"n={gs.n} t={gs.t} k={d.k}",
        f"quotients={list(d.quotients)} remainders={list(d.remainders)}",
        f"partial_n={list(d.partial_n)} partial_t={list(d.partial_t)}",
    ]
    for i, g in enumerate(gs.gens, 1):
        lines.append(f"g_{i} = {g}")
    out.write("\n".join(lines) + "\n")
    return 0


def _report_text(report) -> str:
    verdict = "PASS" if report.passed else "FAIL"
    lines = [
        f"{verdict} n={report.n} t={report.t} mode={report.mode} combos={report.combos_checked} "
        f"group_order_confirmed={report.group_order_confirmed} elapsed_ms={report.elapsed * 1000:.1f}"
    ]
    if report.seed is not None:
        lines.append(f"seed={report.seed}")
    for f in report.failures[:20]:
        lines.append(f"  combo={format_positions(_bits(f.combo))} missed window starts at {f.missed_start}")
    if len(report.failures) > 20:
        lines.append(f"  ... {len(report.failures) - 20} more")
    return "\n".join(lines)


def _bits(c: int) -> List[int]:
    return [j + 1 for j in range(c.bit_length()) if c >> j & 1]


def cmd_verify(args, out: TextIO) -> int:
    _check_nt(args.n, args.t)
    report = verify_group(build_generator_set(args.n, args.t), _budget(args), args.jobs)
    _emit(out, args.format, report.to_dict(), _report_text(report))
    return 0 if report.passed and report.group_order_confirmed else 1


def cmd_cosets(args, out: TextIO) -> int:
    _check_nt(args.n, args.t)
    report = verify_coset_partition(build_generator_set(args.n, args.t), max_n=args.max_n)
    text = (
        f"{'PASS' if report.passed else 'FAIL'} n={report.n} t={report.t} cosets={report.coset_count} "
        f"expected={report.expected_cosets} violations={report.agreement_violations}"
    )
    _emit(out, args.format, report.to_dict(), text)
    return 0 if report.passed else 1


def cmd_oracle(args, out: TextIO) -> int:
    n = args.n
    if args.base is not None:
        base = SubsetMask.from_positions(parse_positions(args.base), n)
    else:
        _check_nt(n, args.t)
        base = SubsetMask(n, (1 << args.t) - 1)
    fam = TranslateFamily.of(base)
    budget = OracleBudget(max_n=args.max_n, timeout=args.timeout)
    results = []
    if args.mode in ("v", "both"):
        results.append(oracle_v(fam, budget))
    if args.mode in ("vbar", "both"):
        results.append(oracle_vbar(fam, budget))

    t = fam.block_length()
    predicted = None if t is None else 1 << (n - t)
    ok = all(r.exact for r in results)
    if len(results) == 2:
        ok = ok and results[0].value == results[1].value
    if predicted is not None:
        ok = ok and all(r.value == predicted for r in results)

    doc = {
        "n": n,
        "base": str(base),
        "translates": len(fam.members),
        "predicted": predicted,
        "results": [r.to_dict() for r in results],
        "ok": ok,
    }
    lines = [f"n={n} base={base} translates={len(fam.members)}"]
    for r in results:
        name = "v" if r.quantity == "v" else "v_bar"
        bound = "" if r.exact else f" (bounds {r.lower_bound}..{r.upper_bound}, timed out)"
        lines.append(f"{name} = {r.value}{bound}  nodes={r.nodes_explored}")
    if predicted is not None:
        lines.append(f"2^(n-t) = {predicted}")
    lines.append("OK" if ok else "MISMATCH")
    _emit(out, args.format, doc, "\n".join(lines))
    return 0 if ok else 1


def _sweep_instance(n: int, t: int, corrupt, budget: Budget, jobs: Optional[int]):
    gs = build_generator_set(n, t)
    for cn, ct, i, pos in corrupt:
        if (cn, ct) == (n, t):
            gs = gs.flip(i, pos)
    return verify_group(gs, budget, jobs)


def sweep(n_max: int, budget: Budget, jobs: Optional[int] = None, oracle_max_n: int = ORACLE_GUARD, corrupt=()):
    """Verify every ``(n, t)`` with ``t <= n <= n_max`` and tabulate the oracle up to its guard.

    Returns ``(reports, theorem_rows, errors)``; ``errors`` holds instances
    whose construction was rejected (e.g. a corruption inside ``[t]``).
    """
    reports = []
    errors = []
    for n in range(1, n_max + 1):
        for t in range(1, n + 1):
            try:
                reports.append(_sweep_instance(n, t, corrupt, budget, jobs))
            except RuntimeError as exc:
                errors.append({"n": n, "t": t, "error": str(exc)})
    oracle_n = min(n_max, oracle_max_n)
    rows = check_theorems(oracle_n, OracleBudget(max_n=max(oracle_n, 1))) if oracle_n >= 1 else []
    return reports, rows, errors


def _matrix(n_max: int, reports, errors) -> str:
    status = {(r.n, r.t): "." if r.passed else "X" for r in reports}
    for e in errors:
        status[(e["n"], e["t"])] = "E"
    lines = ["pass/fail matrix (rows n, columns t; '.' pass, 'X' fail, 'E' construction error)"]
    for n in range(1, n_max + 1):
        lines.append(f"{n:>4} " + "".join(status.get((n, t), " ") for t in range(1, n + 1)))
    return "\n".join(lines)


def cmd_sweep(args, out: TextIO) -> int:
    budget = _budget(args)
    reports, rows, errors = sweep(args.max_n, budget, args.jobs, args.oracle_max_n, args.corrupt)
    failed = [r for r in reports if not r.passed or not r.group_order_confirmed]
    mismatched = [r for r in rows if not r.agree]
    ok = not failed and not mismatched and not errors
    doc = {
        "max_n": args.max_n,
        "seed": budget.seed,
        "instances": len(reports) + len(errors),
        "failures": [r.to_dict() for r in failed],
        "errors": errors,
        "theorems": [r.to_dict() for r in rows],
        "ok": ok,
    }
    parts = [_matrix(args.max_n, reports, errors), f"seed={budget.seed}"]
    for r in failed:
        parts.append(_report_text(r))
    for e in errors:
        parts.append(f"ERROR n={e['n']} t={e['t']}: {e['error']}")
    if rows:
        parts.append(format_theorem_table(rows))
    parts.append("ALL PASS" if ok else "FAILURES PRESENT")
    _emit(out, args.format, doc, "\n".join(parts))
    return 0 if ok else 1


COMMANDS = {
    "gens": cmd_gens,
    "verify": cmd_verify,
    "cosets": cmd_cosets,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
}


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    if getattr(args, "jobs", None) is None and hasattr(args, "jobs"):
        try:
            args.jobs = default_jobs()
        except DomainError as exc:
            err.write(f"usage error: {exc}\n")
            return 2
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, DomainError) as exc:
        err.write(f"usage error ({args.command}): {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
