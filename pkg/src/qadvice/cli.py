"""``qadvice`` command line: one subcommand per experiment.

Exit status is 0 on success, 2 when an experiment's verdict fails and 1 on
usage or parameter errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from . import experiments
from .serialize import dumps, format_decimal, to_plain

MAX_SEED = 2**64 - 1


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="qadvice", description="Quantum advice and one-way communication experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("goodasnew", "measure-and-recover damage versus sqrt(eps)")
    p.add_argument("--dim", type=int)
    p.add_argument("--ancillas", type=int)
    p.add_argument("--trials", type=int, default=1000)

    p = add("reconstruct", "classical simulation of a quantum one-way message")
    p.add_argument("--problem", required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--boost", type=int, default=1)

    p = add("coset-delta", "exact ||D2 - D1^2|| for the coset problem")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--beta", type=float, default=1 / 3)

    p = add("subset-delta", "exact Delta for subset instances")
    p.add_argument("--group")
    p.add_argument("--set", dest="set")
    p.add_argument("--instances", type=int, default=50)

    p = add("randset", "random-subset expectation: closed form, enumeration, Monte Carlo")
    p.add_argument("--group", required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--trials", type=int, default=10_000)

    p = add("vardist-check", "trace-distance certificate versus sqrt(2^(L-1) delta)")
    p.add_argument("--primes", type=_int_list, default=[2, 3])
    p.add_argument("--random", type=int, default=20)
    p.add_argument("--beta", type=float, default=1 / 3)

    p = add("membership", "subgroup membership from advice by a Hadamard test")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", help="generators; default: every subgroup")

    p = add("pqp", "unbounded-error advice success probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--table", help="truth table as a bit string; random by default")

    p = add("diagnostics", "rows, columns, VC-dimension and the Sauer check")
    p.add_argument("--problems", type=lambda s: s.split(";"), default=[])
    p.add_argument("--random", type=int, default=0)

    p = add("cheb", "Chebyshev derivative closed form versus recurrence")
    p.add_argument("--d", type=int, default=20)
    p.add_argument("--m", type=int, default=5)

    p = add("markov", "V. A. Markov and derivative-floor checks on random polynomials")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--floor-trials", type=int, default=100)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--N", type=int, default=4)

    p = add("degree-bound", "degree lower bound from the two Markov branches")
    for flag, kind in (("--N", int), ("--K", int), ("--delta", float), ("--r0", float)):
        p.add_argument(flag, type=kind, required=True)

    p = add("direct-product", "success bound for finding all K marked items")
    for flag in ("--N", "--K", "--T"):
        p.add_argument(flag, type=int, required=True)

    p = add("grover-all", "Grover find-all experiment against the direct-product bound")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--schedule", type=_int_list, help="iterations per stage; optimal by default")
    p.add_argument("--trials", type=int, default=10_000)

    p = add("fingerprint", "classical fingerprint protocols")
    p.add_argument("--kind", choices=("eq", "subset"), default="eq")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--target", type=float)
    p.add_argument("--group")
    p.add_argument("--set", dest="set")
    p.add_argument("--trials", type=int, default=10_000)
    return parser


_GLOBAL = {"command", "format", "seed", "jobs", "out"}


def params_from_args(args: argparse.Namespace) -> dict:
    return {k.replace("-", "_"): v for k, v in vars(args).items() if k not in _GLOBAL}


def _cell(v) -> str:
    v = to_plain(v)
    if isinstance(v, dict) and {"num", "den"} <= set(v):
        return v["decimal"]
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_decimal(v)
    if isinstance(v, (list, dict)):
        return dumps(v)
    return "" if v is None else str(v)


def render_csv(report: experiments.ExperimentReport) -> str:
    records = report.results.get("records") or [
        {k: v for k, v in report.results.items() if k != "records"}
    ]
    header: list[str] = []
    for r in records:
        header += [k for k in r if k not in header]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in records:
        w.writerow([_cell(r.get(k)) for k in header])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return 1
    try:
        report = experiments.run(args.command, params_from_args(args), args.seed, args.jobs)
    except (ValueError, KeyError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = dumps(report) + "\n" if args.format == "json" else render_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.verdict else 2


def main_entry() -> None:
    try:
        code = main()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not our failure
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main_entry()
