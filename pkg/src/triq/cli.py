"""Command-line entry point: ``triq decide|falsify|envelope|crosscheck``.

Exit codes: 0 success, 2 usage error, 3 falsifier disagrees with the
closed-form verdict, 1 crosscheck found disagreements.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

from .characterize import decide
from .envelope import envelope_csv, sample_envelope
from .oracle import SearchConfig, crosscheck, falsify
from .spaces import SpaceDescriptor

EXIT_OK = 0
EXIT_DISAGREE_CROSSCHECK = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _pair(kind):
    def parse(text):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected a,b (got {text!r})")
        try:
            return kind(parts[0]), kind(parts[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed range {text!r}") from None
    return parse


def _space(text):
    try:
        return SpaceDescriptor.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_seed() -> int:
    env = os.environ.get("TRIQ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TRIQ_SEED must be an integer (got {env!r})") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="triq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    d = sub.add_parser("decide", help="closed-form membership in F(p), G(p) or H(p)")
    d.add_argument("--set", required=True, choices=["F", "G", "H"], dest="set_id")
    d.add_argument("--p", required=True, type=float)
    d.add_argument("--mu", required=True, type=_floats)
    d.add_argument("--tol", type=float, default=1e-12)
    d.add_argument("--json", action="store_true")

    f = sub.add_parser("falsify", help="search for vectors violating the inequality")
    f.add_argument("--set", required=True, choices=["F", "G"], dest="set_id")
    f.add_argument("--p", required=True, type=float)
    f.add_argument("--mu", required=True, type=_floats)
    f.add_argument("--space", type=_space, default=SpaceDescriptor(2.0, 2))
    f.add_argument("--budget", type=int, default=10_000)
    f.add_argument("--seed", type=int, default=None)
    f.add_argument("--json", action="store_true")

    e = sub.add_parser("envelope", help="write the envelope surface as CSV")
    e.add_argument("--p", required=True, type=float)
    e.add_argument("--n", required=True, type=int)
    e.add_argument("--grid", required=True, type=int)
    e.add_argument("--out", default=None)

    c = sub.add_parser("crosscheck", help="closed-form verdicts vs. the falsifier")
    c.add_argument("--trials", required=True, type=int)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--p-range", type=_pair(float), default=(1.1, 4.0))
    c.add_argument("--n-range", type=_pair(int), default=(2, 5))
    c.add_argument("--budget", type=int, default=2_000)
    c.add_argument("--space", type=_space, default=SpaceDescriptor(2.0, 2))
    c.add_argument("--json", action="store_true")
    return parser


_NEG_VALUE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv):
    # argparse reads "-1,2" as an option; turn "--mu -1,2" into "--mu=-1,2"
    out = []
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        if tok in ("--mu", "--tol", "--p") and i + 1 < len(argv) and _NEG_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(tok)
    return out


def _cmd_decide(args, out):
    v = decide(args.set_id, args.p, args.mu, args.tol)
    out.write((v.to_json() if args.json else v.describe()) + "\n")
    return EXIT_OK


def _cmd_falsify(args, out):
    if args.budget < 1:
        raise UsageError("--budget must be positive")
    seed = _default_seed() if args.seed is None else args.seed
    cfg = SearchConfig(budget=args.budget, seed=seed, space=args.space)
    verdict = decide(args.set_id, args.p, args.mu)
    res = falsify(args.set_id, args.p, args.mu, cfg)
    if args.json:
        if res.found:
            out.write(res.witness.to_json() + "\n")
        else:
            gap = res.min_gap if math.isfinite(res.min_gap) else None
            out.write(json.dumps({"witness": None, "min_gap": gap, "probe": res.min_probe}) + "\n")
    elif res.found:
        w = res.witness
        out.write(f"witness via {w.probe} probe in {w.space}: gap = {w.gap:.6g}\n")
        for i, v in enumerate(w.vectors, 1):
            out.write(f"  x{i} = [{', '.join(f'{c:.12g}' for c in v)}]  |x{i}| = {w.norms[i - 1]:.12g}\n")
        out.write(f"  |sum| = {w.sum_norm:.12g}  lhs = {w.lhs:.12g}  rhs = {w.rhs:.12g}\n")
    else:
        out.write(f"no witness found (min gap = {res.min_gap:.6g})\n")
    consistent = res.found != verdict.member
    return EXIT_OK if consistent else EXIT_INCONSISTENT


def _cmd_envelope(args, out):
    rows = sample_envelope(args.p, args.n, args.grid)
    text = envelope_csv(rows, args.n)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _cmd_crosscheck(args, out):
    if args.trials < 0:
        raise UsageError("--trials must be nonnegative")
    if args.budget < 1:
        raise UsageError("--budget must be positive")
    seed = _default_seed() if args.seed is None else args.seed
    cfg = SearchConfig(budget=args.budget, seed=seed, space=args.space)
    report = crosscheck(args.trials, seed, args.p_range, args.n_range, cfg)
    out.write(report.to_json() + "\n" if args.json else report.to_text())
    return EXIT_OK if report.disagreements == 0 else EXIT_DISAGREE_CROSSCHECK


_COMMANDS = {
    "decide": _cmd_decide,
    "falsify": _cmd_falsify,
    "envelope": _cmd_envelope,
    "crosscheck": _cmd_crosscheck,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(_glue_negative_values(argv))
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        return _COMMANDS[args.verb](args, stdout)
    except (UsageError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())
