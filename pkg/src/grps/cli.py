"""Command-line front end: run problem files, verify tables, emit CSV.

Subcommands:
  solve FILE [--order K] [--alpha A] [--verify] [--linear] [--preset NAME]
             [--emit PATH] [--samples N] [--tol T] [--seed S]
  list-presets
  schema

Exit codes: 0 all enabled verdicts pass, 1 a verdict failed, 2 bad input.
The environment variable GRPS_SEED overrides the default sampling seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import expr as ex
from . import oracle as orc
from . import solver as slv
from .expr import DEFAULT_SEED
from .problemfile import (
    PROBLEM_SCHEMA,
    ProblemBundle,
    ProblemFileError,
    bundled_path,
    load_problem,
)
from .transform import PRESETS, TransformError, get_preset

__all__ = ["main", "RunReport", "run_solve", "emit_csv", "list_presets_text"]

PASS, FAIL, SKIP = "pass", "fail", "skipped"


@dataclass
class RunReport:
    """Everything one solve run produced, ready for printing or CSV."""

    problem: str
    order: int
    alpha: float
    coeff_texts: Tuple[str, ...]
    sample_values: Tuple[float, ...]
    oracle_match: Tuple[str, ...]
    residual_zero: Tuple[str, ...]
    linear_match: Tuple[str, ...]
    exact_max_err: Optional[float]
    exact_tol: Optional[float]
    exact_verdict: str
    elapsed_s: float

    def verdicts(self) -> List[str]:
        out = list(self.oracle_match) + list(self.residual_zero) + list(self.linear_match)
        out.append(self.exact_verdict)
        return out

    def passed(self) -> bool:
        return all(v != FAIL for v in self.verdicts())


def run_solve(
    bundle: ProblemBundle,
    order: int,
    verify: bool = False,
    linear: bool = False,
    preset_name: str = "laplace",
    samples: int = 64,
    tol: float = 1e-10,
    seed: int = DEFAULT_SEED,
) -> RunReport:
    t0 = time.perf_counter()
    spec = bundle.spec
    preset = get_preset(preset_name)
    boxes = bundle.boxes

    def check(a, b) -> str:
        try:
            return PASS if ex.equiv(a, b, boxes, samples=samples, tol=tol, seed=seed) else FAIL
        except ex.ExprError:
            return FAIL

    table = slv.solve(spec, order)
    kcount = order + 1

    linear_match = ()
    if linear:
        fast = slv.solve_linear(spec, order)
        linear_match = tuple(check(table.coeffs[k], fast.coeffs[k]) for k in range(kcount))
        table = fast

    oracle_match: Tuple[str, ...]
    if verify:
        otab = orc.direct_coefficients(spec, order, preset=preset, zero_box=boxes)
        oracle_match = tuple(check(table.coeffs[k], otab.coeffs[k]) for k in range(kcount))
    else:
        oracle_match = (SKIP,) * kcount

    zero = ex.const(0)
    resid = slv.residual_probe(spec, table)
    residual_zero = tuple(
        check(zero, resid[k - spec.order_n]) if k >= spec.order_n and k - spec.order_n < len(resid) else SKIP
        for k in range(kcount)
    )

    exact_max_err = None
    exact_verdict = SKIP
    if bundle.exact is not None:
        exact_max_err = 0.0
        npts = 5
        axes = [
            [lo + (hi - lo) * i / (npts - 1) for i in range(npts)]
            for lo, hi in (boxes[v] for v in spec.spatial_vars)
        ]
        tgrid = [bundle.t_max * i / (npts - 1) for i in range(npts)]

        def walk(i, binding):
            nonlocal exact_max_err
            if i == len(spec.spatial_vars):
                for t in tgrid:
                    got = slv.partial_sum_eval(table, binding, t)
                    want = bundle.exact(binding, t)
                    exact_max_err = max(exact_max_err, abs(got - want))
                return
            for val in axes[i]:
                binding[spec.spatial_vars[i]] = val
                walk(i + 1, binding)

        walk(0, {})
        exact_verdict = PASS if exact_max_err <= bundle.exact_tol else FAIL

    mid = {v: (boxes[v][0] + boxes[v][1]) / 2 for v in spec.spatial_vars}
    return RunReport(
        problem=bundle.name,
        order=order,
        alpha=spec.alpha,
        coeff_texts=tuple(ex.to_text(c) for c in table.coeffs),
        sample_values=tuple(ex.eval_expr(c, mid) for c in table.coeffs),
        oracle_match=oracle_match,
        residual_zero=residual_zero,
        linear_match=linear_match,
        exact_max_err=exact_max_err,
        exact_tol=bundle.exact_tol if bundle.exact is not None else None,
        exact_verdict=exact_verdict,
        elapsed_s=time.perf_counter() - t0,
    )


def emit_csv(report: RunReport, path: str) -> None:
    """Deterministic coefficient table: one row per k, fixed column order."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "coefficient_text", "sample_value", "oracle_match", "residual_zero"])
    for k, text in enumerate(report.coeff_texts):
        w.writerow(
            [
                k,
                text,
                repr(report.sample_values[k]),
                report.oracle_match[k],
                report.residual_zero[k],
            ]
        )
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def print_report(report: RunReport, out=sys.stdout) -> None:
    print(f"problem: {report.problem}", file=out)
    print(f"order K={report.order}  alpha={report.alpha}", file=out)
    width = max(24, max((len(t) for t in report.coeff_texts), default=0))
    header = f"{'k':>3}  {'coefficient':<{min(width, 64)}}  {'sample':>14}  {'oracle':>8}  {'residual':>8}"
    print(header, file=out)
    for k, text in enumerate(report.coeff_texts):
        shown = text if len(text) <= 64 else text[:61] + "..."
        print(
            f"{k:>3}  {shown:<{min(width, 64)}}  {report.sample_values[k]:>14.6g}"
            f"  {report.oracle_match[k]:>8}  {report.residual_zero[k]:>8}",
            file=out,
        )
    if report.linear_match:
        bad = [k for k, v in enumerate(report.linear_match) if v == FAIL]
        print(
            f"linear fast path: {'agrees with the full recurrence' if not bad else f'MISMATCH at k={bad}'}",
            file=out,
        )
    if report.exact_max_err is not None:
        print(
            f"max |series - exact| on the grid: {report.exact_max_err:.3e}"
            f" (tol {report.exact_tol:.1e}) -> {report.exact_verdict}",
            file=out,
        )
    print(f"elapsed: {report.elapsed_s:.3f} s", file=out)
    print(f"result: {'PASS' if report.passed() else 'FAIL'}", file=out)


def list_presets_text() -> str:
    lines = ["available transforms (omega, nu as in nu(s)*int f(t)exp(-omega(s)t)dt):"]
    for p in PRESETS:
        lines.append(f"  {p.name:<14} omega(s)={p.omega:<6} nu(s)={p.nu}")
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="grps",
        description="fractional power-series solver for time-fractional equations",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a problem file and verify the table")
    sp.add_argument("file", help="problem file path or bundled problem name")
    sp.add_argument("--order", type=int, default=6, help="truncation order K (default 6)")
    sp.add_argument("--alpha", type=float, default=None, help="override the file's alpha")
    sp.add_argument("--verify", action="store_true", help="cross-check with the residual-limit route")
    sp.add_argument("--linear", action="store_true", help="use the linear fast path (and compare)")
    sp.add_argument("--preset", default="laplace", help="transform preset for --verify")
    sp.add_argument("--emit", default=None, help="write the coefficient table as CSV")
    sp.add_argument("--samples", type=int, default=64, help="equivalence sample count")
    sp.add_argument("--tol", type=float, default=1e-10, help="equivalence tolerance")
    sp.add_argument("--seed", type=int, default=None, help="sampling seed (default GRPS_SEED or 0x5EED)")

    sub.add_parser("list-presets", help="list the transform family presets")
    sub.add_parser("schema", help="print the problem-file JSON schema")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-presets":
        print(list_presets_text())
        return 0
    if args.command == "schema":
        print(json.dumps(PROBLEM_SCHEMA, indent=2, sort_keys=True))
        return 0

    seed = args.seed
    if seed is None:
        env = os.environ.get("GRPS_SEED")
        seed = int(env, 0) if env else DEFAULT_SEED

    target = args.file
    if not os.path.exists(target):
        resolved = bundled_path(target)
        if resolved is not None:
            target = resolved
    try:
        bundle = load_problem(target)
        if args.alpha is not None:
            bundle = bundle.with_alpha(args.alpha)
        preset = get_preset(args.preset)  # validate early
    except (ProblemFileError, TransformError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    try:
        report = run_solve(
            bundle,
            order=args.order,
            verify=args.verify,
            linear=args.linear,
            preset_name=preset.name,
            samples=args.samples,
            tol=args.tol,
            seed=seed,
        )
    except (slv.SolverError, orc.OracleError, TransformError, ex.ExprError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    print_report(report)
    if args.emit:
        emit_csv(report, args.emit)
        print(f"wrote {args.emit}")
    return 0 if report.passed() else 1


if __name__ == "__main__":
    raise SystemExit(main())
