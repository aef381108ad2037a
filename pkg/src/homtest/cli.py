"""Command line entry point.

Exit codes: 0 when every enabled assertion passed, 2 on an assertion
failure (the report carries the counterexample), 3 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from fractions import Fraction

from .bounds import fraction_text
from .campaign import run_campaign, summary_table
from .config import ConfigWarning, load_config, parse_eps, parse_gen, parse_k, parse_space
from .engine import constants_report
from .errors import ConfigError, HomtestError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConfigWarning)
        cfg = load_config(args.config)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    matrix = args.matrix
    if matrix is None and args.out and any(r.verify == "all" for r in cfg.rows):
        matrix = os.path.splitext(args.out)[0] + "_matrix.csv"
    report = run_campaign(cfg, workers=args.workers, timings=args.timings, matrix_path=matrix)
    _emit(dumps(report.as_dict()), args.out)
    if not args.quiet:
        sys.stderr.write(summary_table(report))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    from .suite import dumps as sdumps
    from .suite import matrix_csv, run_suite, suite_summary

    try:
        results = run_suite(args.suite, args.max_order, args.seed, args.workers)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    summary = suite_summary(results, args.seed, args.max_order, args.suite)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, "verify.json"), "w", encoding="utf-8") as fh:
            fh.write(sdumps(summary))
        with open(os.path.join(args.out_dir, "verify_matrix.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(matrix_csv(results))
    else:
        sys.stdout.write(sdumps(summary))
    if not args.quiet:
        for r in results:
            print(f"{r.status:4}  {r.identity:24}  {r.instance}", file=sys.stderr)
        c = summary["counts"]
        print(f"{c['PASS']} passed, {c['FAIL']} failed, {c['SKIP']} skipped", file=sys.stderr)
    return EXIT_OK if summary["ok"] else EXIT_FAIL


def cmd_constants(args) -> int:
    space = parse_space(args.space)
    rows = []
    for k in parse_k(args.k_range):
        rows.append(constants_report(space, k, timings=args.timings).row())
    _emit(dumps({"space": space.text(), "rows": rows}), args.out)
    return EXIT_OK


def cmd_listdecode(args) -> int:
    from .oracles import FunctionGenerator
    from .samplers import RngStream

    space = parse_space(args.space)
    eps = parse_eps(args.eps_grid)
    g = parse_gen(args.gen)
    if g.kind == "all":
        raise ConfigError("listdecode needs a single-function generator")
    homs = g.homs or ((space.codewords[min(1, space.size - 1)].text(),) if g.kind == "corrupt" else ())
    gen = FunctionGenerator(g.kind, homs, g.alpha, g.constant)
    rng = RngStream(args.seed)
    out, ok = [], True
    for i in range(args.count):
        f = gen.generate(space, rng.split(i))
        from .oracles import list_decode

        reps = [list_decode(f, space, e).as_dict() for e in eps]
        ok &= all(r["satisfied"] for r in reps)
        out.append({"function": f"{f.label}#{i}", "reports": reps})
    _emit(dumps({"space": space.text(), "eps": [fraction_text(Fraction(e)) for e in eps], "functions": out, "ok": ok}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="homtest", description="Exact homomorphism testing experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("--out", help="JSON report path (default: stdout)")
    r.add_argument("--matrix", help="CSV path for the verification matrix when a row sets verify=all")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--timings", action="store_true", help="record wall-clock times (breaks byte identity)")
    r.add_argument("--quiet", action="store_true", help="no summary table on stderr")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run the oracle verification matrix")
    v.add_argument("--suite", default="all", help="'all' or comma-separated identities")
    v.add_argument("--max-order", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out-dir")
    v.add_argument("--quiet", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="gamma_k, eta_k, rho_k for a space")
    c.add_argument("--space", required=True)
    c.add_argument("--k-range", default="1..4")
    c.add_argument("--timings", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_constants)

    ld = sub.add_parser("listdecode", help="exhaustive list decoding against the list-size bound")
    ld.add_argument("--space", required=True)
    ld.add_argument("--eps-grid", default="1/9,2/9,1/3,1/2")
    ld.add_argument("--gen", default="random")
    ld.add_argument("--count", type=int, default=10)
    ld.add_argument("--seed", type=int, default=0)
    ld.add_argument("--out")
    ld.set_defaults(func=cmd_listdecode)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (HomtestError, ValueError) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
