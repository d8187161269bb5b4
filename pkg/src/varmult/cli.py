"""Command line front end.

Exit codes: 0 success, 2 hypothesis violation, 3 invariant failure,
4 input/output or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import checks
from .decomposition import decompose, verify_lemma_bounds
from .errors import HypothesisError, InvariantError
from .maximal import LowerBudget, bound_report
from .serialize import (FormatError, decomposition_to_json, grid_from_json,
                        load_json, multiplier_from_json)
from .squarefun import var_carleson
from .sweep import SweepConfig, run_sweep, write_sweep
from .variation import variation_power, vr_norm

EXIT_OK, EXIT_HYPOTHESIS, EXIT_INVARIANT, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_multiplier(args):
    return multiplier_from_json(load_json(args.file), n=args.n)


def cmd_vr_norm(args):
    m = _load_multiplier(args)
    out = {"r": args.r, "n": m.size, "vr_norm": vr_norm(m, args.r),
           "variation_power": variation_power(m, args.r)}
    print(repr(out["vr_norm"]))
    _write(args.json, json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_decompose(args):
    m = _load_multiplier(args)
    d = decompose(m, args.r, args.tol)
    report = verify_lemma_bounds(d)
    doc = {"decomposition": decomposition_to_json(d), "report": report.as_dict()}
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    if not report.passed:
        print("level bounds violated", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _endpoints(text, n):
    if text is None:
        return None
    if text.startswith("every:"):
        step = int(text.split(":", 1)[1])
        return np.unique(np.r_[np.arange(0, n + 1, step), n])
    return np.array(_ints(text))


def cmd_varcarleson(args):
    f = grid_from_json(load_json(args.file))
    fld = var_carleson(f, args.s, _endpoints(args.endpoints, f.size))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "value", "witness"])
    for x, (val, coll) in enumerate(zip(fld.values, fld.witness)):
        writer.writerow([x, repr(float(val)), str(coll)])
    _write(args.output, buf.getvalue())
    return EXIT_OK


def cmd_maximal(args):
    f = grid_from_json(load_json(args.input))
    budget = LowerBudget(max_jumps=args.max_jumps, ascent_steps=args.budget,
                         ascent_points=args.ascent_points)
    rep = bound_report(
        f, args.r, tuple(args.p), s_grid=_floats(args.s_grid) if args.s_grid else None,
        budget=budget, endpoints=_endpoints(args.endpoints, f.size),
        witness_points=_ints(args.witness_points) if args.witness_points else ())
    _write(args.json, json.dumps(rep.as_dict(), indent=2) + "\n")
    if args.csv:
        lines = ["x,lower,upper\n"]
        lines += [f"{x},{lo!r},{up!r}\n" for x, (lo, up)
                  in enumerate(zip(rep.lower.tolist(), rep.upper.tolist()))]
        _write(args.csv, "".join(lines))
    if not rep.sandwich_ok:
        print("lower bound exceeds upper bound", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_sweep(args):
    doc = load_json(args.config) if args.config else {}
    try:
        cfg = SweepConfig.from_dict(doc)
    except TypeError as exc:
        raise FormatError(str(exc)) from exc
    rows = run_sweep(cfg)
    for path in write_sweep(cfg, rows, args.output_dir):
        print(path)
    stable = [row for row in rows if row[5] in ("stable", "sandwich_ok")]
    if not all(row[6] for row in stable):
        print("sweep found unstable ratios or a failed sandwich", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_verify(args):
    results = checks.run_checks(args.only)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f"  {detail}" if detail else ""))
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print(f"first failing property: {failed[0]}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="varmult", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("vr-norm", help="r-variation norm of a multiplier file")
    p.add_argument("file")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--n", type=int, help="grid size for a bare piecewise list")
    p.add_argument("--json", default=None, help="write JSON here (default stdout)")
    p.set_defaults(func=cmd_vr_norm)

    p = sub.add_parser("decompose", help="level-wise interval decomposition")
    p.add_argument("file")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--n", type=int)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("varcarleson", help="variational square function CSV")
    p.add_argument("file")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--endpoints", default=None,
                   help="comma-separated cuts, or every:K")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_varcarleson)

    p = sub.add_parser("maximal", help="pointwise bounds on the maximal operator")
    p.add_argument("--input", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--p", type=float, action="append", required=True)
    p.add_argument("--s-grid", default=None)
    p.add_argument("--budget", type=int, default=20, help="ascent steps")
    p.add_argument("--ascent-points", type=int, default=None)
    p.add_argument("--max-jumps", type=int, default=8)
    p.add_argument("--endpoints", default=None)
    p.add_argument("--witness-points", default=None)
    p.add_argument("--json", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("sweep", help="operator-norm ratio sweep from a JSON config")
    p.add_argument("config", nargs="?")
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--only", action="append", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (OSError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
