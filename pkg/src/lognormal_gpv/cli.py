"""Command-line entry point: ``lngpv test|simulate|reproduce``.

Exit codes: 0 success, 1 internal error, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import tempfile
import time

from . import paper_tables
from .distributions import LogSummary, summarize_log
from .errors import LognormalGPVError
from .pvalues import Alternative, McSettings, Method, TestRequest, run_method
from .simulation import ALL_METHODS, ExperimentConfig, Scenario, default_workers, run_grid

METHOD_ALIASES = {
    "gpv": Method.GPV_A, "gpv_a": Method.GPV_A, "a": Method.GPV_A,
    "km": Method.KM_B, "km_b": Method.KM_B, "b": Method.KM_B,
    "zscore": Method.ZSCORE_C, "zscore_c": Method.ZSCORE_C, "c": Method.ZSCORE_C,
}
SCENARIO_HEADER = ["n1", "n2", "mu1", "mu2", "s1sq", "s2sq"]
OUTPUT_HEADER = SCENARIO_HEADER + ["method", "reps", "rejections", "rate", "se"]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(x, ".6g")


# --- input parsing ------------------------------------------------------------

def parse_summary(text: str) -> tuple[LogSummary, LogSummary]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 6:
        raise UsageError("--summary expects n1,ybar1,s2_1,n2,ybar2,s2_2")
    try:
        n1, n2 = int(parts[0]), int(parts[3])
        y1, v1, y2, v2 = (float(parts[i]) for i in (1, 2, 4, 5))
    except ValueError as exc:
        raise UsageError(f"--summary: {exc}") from None
    return LogSummary(n1, y1, v1), LogSummary(n2, y2, v2)


def read_data_file(path: str) -> tuple[LogSummary, LogSummary, list[str]]:
    """Read a ``group,value`` CSV and summarize each group on the log scale.

    Groups are ordered by first appearance: the first label is group 1.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not rows or [c.strip() for c in rows[0]] != ["group", "value"]:
        raise UsageError(f"{path}: header must be 'group,value'")
    groups: dict[str, list[float]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise UsageError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
        label, raw = row[0].strip(), row[1].strip()
        try:
            value = float(raw)
        except ValueError:
            raise UsageError(f"{path}: line {lineno}: cannot parse value {raw!r}") from None
        if not (value > 0 and math.isfinite(value)):
            raise UsageError(f"{path}: line {lineno}: value must be positive, got {raw}")
        groups.setdefault(label, []).append(value)
    if len(groups) != 2:
        raise UsageError(f"{path}: expected exactly 2 group labels, found {len(groups)}")
    labels = list(groups)
    return summarize_log(groups[labels[0]]), summarize_log(groups[labels[1]]), labels


def read_scenario_file(path: str) -> list[Scenario]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not rows or [c.strip() for c in rows[0]] != SCENARIO_HEADER:
        raise UsageError(f"{path}: header must be '{','.join(SCENARIO_HEADER)}'")
    scenarios = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            if len(row) != 6:
                raise ValueError(f"expected 6 fields, got {len(row)}")
            n1, n2 = int(row[0]), int(row[1])
            mu1, mu2, s1, s2 = (float(c) for c in row[2:])
            if not all(math.isfinite(v) for v in (mu1, mu2, s1, s2)):
                raise ValueError("non-finite parameter")
            scenarios.append(Scenario(n1, n2, mu1, mu2, s1, s2))
        except ValueError as exc:
            raise UsageError(f"{path}: row {lineno - 1} (line {lineno}): {exc}") from None
    return scenarios


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def results_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(OUTPUT_HEADER)
    for res in results:
        s = res.scenario
        for method, out in res.outcomes.items():
            writer.writerow([s.n1, s.n2, fmt(s.mu1), fmt(s.mu2), fmt(s.sigma1_sq),
                             fmt(s.sigma2_sq), method.value, res.reps, out.rejections,
                             fmt(out.rate), fmt(out.binom_se)])
    return buf.getvalue()


# --- commands -----------------------------------------------------------------

def cmd_test(args) -> int:
    if args.data:
        g1, g2, _ = read_data_file(args.data)
    else:
        g1, g2 = parse_summary(args.summary)
    request = TestRequest(g1, g2, Alternative(args.alternative))
    method = METHOD_ALIASES[args.method]
    res = run_method(method, request, McSettings(args.m, args.seed))
    print(f"method={res.method.value}")
    print(f"alternative={res.alternative.value}")
    print(f"p={fmt(res.estimate)}")
    print(f"mc_se={fmt(res.mc_se)}")
    print(f"m={res.m}")
    print(f"seed={args.seed}")
    return 0


def _config(args, methods=ALL_METHODS) -> ExperimentConfig:
    return ExperimentConfig(reps=args.reps, inner_m=args.inner_m, alpha=args.alpha,
                            seed=args.seed, methods=methods, workers=args.threads)


def cmd_simulate(args) -> int:
    scenarios = read_scenario_file(args.config)
    methods = tuple(METHOD_ALIASES[m] for m in args.methods.split(",")) \
        if args.methods else ALL_METHODS
    results = run_grid(scenarios, _config(args, methods))
    write_atomic(args.out, results_csv(results))
    return 0


def _reproduce_rainfall(args):
    request = TestRequest(paper_tables.RAINFALL_SEEDED, paper_tables.RAINFALL_UNSEEDED)
    settings = McSettings(args.m, args.seed)
    print("Cloud seeding example: seeded (26, 5.134, 2.46) vs unseeded (26, 3.990, 2.60)")
    print(f"{'method':<10} {'p (one-sided)':>14} {'mc_se':>10} {'reference':>10}")
    for method in ALL_METHODS:
        res = run_method(method, request, settings)
        ref = paper_tables.RAINFALL_PVALUES[method.value]
        print(f"{method.value:<10} {fmt(res.estimate):>14} {fmt(res.mc_se):>10} {ref:>10.4f}")


def _reproduce_table(args, table, anchors):
    rows = list(anchors) if args.scale == "small" else list(range(len(table)))
    t0 = time.perf_counter()
    results = run_grid([table[i][0] for i in rows], _config(args))
    elapsed = time.perf_counter() - t0
    head = f"{'row':>3} {'n1':>4} {'n2':>4} {'mu1':>4} {'s1sq':>5} {'s2sq':>5}"
    for m in ALL_METHODS:
        head += f"  {m.value + ' obs':>12} {'ref':>6}"
    print(head)
    for i, res in zip(rows, results):
        s, ref = table[i]
        line = (f"{i + 1:>3} {s.n1:>4} {s.n2:>4} {fmt(s.mu1):>4} "
                f"{fmt(s.sigma1_sq):>5} {fmt(s.sigma2_sq):>5}")
        for m in ALL_METHODS:
            line += f"  {res.rate(m):>12.4f} {ref[m.value] / paper_tables.PAPER_REPS:>6.4f}"
        print(line)
    print(f"# reps={args.reps} inner_m={args.inner_m} alpha={args.alpha} "
          f"seed={args.seed} elapsed={elapsed:.1f}s")


def cmd_reproduce(args) -> int:
    if args.preset == "rainfall":
        _reproduce_rainfall(args)
    elif args.preset == "table2":
        _reproduce_table(args, paper_tables.TABLE2, paper_tables.TABLE2_ANCHORS)
    else:
        _reproduce_table(args, paper_tables.TABLE3, paper_tables.TABLE3_ANCHORS)
    return 0


# --- parser ---------------------------------------------------------------------

def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _add_sim_flags(p, reps=10_000):
    p.add_argument("--reps", type=_positive_int, default=reps)
    p.add_argument("--inner-m", type=_positive_int, default=2000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threads", type=_positive_int, default=default_workers(),
                   help="worker processes (results do not depend on this)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lngpv", description="Compare the means of two log-normal populations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test H0: M1 <= M2 on one data set")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="CSV with header 'group,value'")
    src.add_argument("--summary", help="n1,ybar1,s2_1,n2,ybar2,s2_2 (log scale, divisor n)")
    p.add_argument("--method", choices=sorted(METHOD_ALIASES), default="gpv")
    p.add_argument("--alternative", choices=[a.value for a in Alternative],
                   default="greater")
    p.add_argument("--m", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="empirical size/power over a scenario file")
    p.add_argument("--config", required=True,
                   help="CSV with header 'n1,n2,mu1,mu2,s1sq,s2sq'")
    p.add_argument("--out", required=True)
    p.add_argument("--methods", help="comma-separated subset of gpv,km,zscore")
    _add_sim_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", help="rerun the cloud-seeding example or the tables")
    p.add_argument("preset", choices=["rainfall", "table2", "table3"])
    p.add_argument("--scale", choices=["small", "full"], default="small")
    p.add_argument("--m", type=_positive_int, default=1_000_000,
                   help="Monte Carlo size for the rainfall preset")
    _add_sim_flags(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LognormalGPVError) as exc:
        print(f"lngpv {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"lngpv {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
