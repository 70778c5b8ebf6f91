"""Command-line driver."""

from __future__ import annotations

import argparse
import sys

from .cfg import CfgError, build_cfg, dump_cfg, dump_cfg_dot
from .engine import EngineConfig, FixpointBudgetExceeded, analyze_function, assertion_texts
from .frontend import FrontendError, load, to_c
from .normalizer import normalize
from .report import emit_report, exit_status


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _non_negative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="canalyzer",
        description="Abstract-interpretation static analyzer for a small C subset.")
    p.add_argument("file", help="C source file to analyze")
    p.add_argument("--domain", choices=("interval", "octagon", "sign"), default="interval")
    p.add_argument("--unroll", type=_positive, default=5,
                   help="back-edge visits before widening is applied (default 5)")
    p.add_argument("--narrow", type=_non_negative, default=2,
                   help="narrowing sweeps after the ascending phase; 0 disables (default 2)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", metavar="PATH", help="also write the report to PATH")
    p.add_argument("--dump-cfg", action="store_true", help="print the control-flow graph")
    p.add_argument("--dump-cfg-dot", action="store_true", help="print the CFG in Graphviz format")
    p.add_argument("--dump-normalized", action="store_true", help="print the normalized source")
    p.add_argument("--trace", action="store_true", help="log block visits and fixpoints")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as e:
        print(f"canalyzer: cannot read {args.file}: {e.strerror}", file=sys.stderr)
        return 2

    config = EngineConfig(args.domain, args.unroll, args.narrow, trace=args.trace)
    results = []
    try:
        for fn in load(source, args.file):
            texts = assertion_texts(fn)
            norm = normalize(fn)
            if args.dump_normalized:
                print(to_c(norm))
            if args.dump_cfg or args.dump_cfg_dot:
                cfg = build_cfg(norm)
                print(dump_cfg_dot(cfg) if args.dump_cfg_dot else dump_cfg(cfg))
            results.append(analyze_function(norm, config, texts))
    except (FrontendError, CfgError) as e:
        print(f"canalyzer: error: {e}", file=sys.stderr)
        return 2
    except FixpointBudgetExceeded as e:
        print(f"canalyzer: internal error: {e}", file=sys.stderr)
        return 2

    text = emit_report(results, config, args.format, args.trace)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return exit_status(results)


if __name__ == "__main__":
    sys.exit(main())
