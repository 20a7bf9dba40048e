"""Command-line runner for the verification suites.

Configuration comes from a JSON document (--config) or from flags; flags
override the document.  The JSON report written with --out is canonical
(sorted keys, no timings), so identical configurations produce identical
bytes.  Exit status is 0 exactly when every requested suite passes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .suites import SUITES, SuiteConfig, run_suite


def build_parser():
    parser = argparse.ArgumentParser(
        prog="steinberg-verify",
        description="Run desk-scale verification suites for Steinberg-group identities.",
    )
    parser.add_argument("--config", help="JSON config file (single suite or {'suites': [...]})")
    parser.add_argument("--suite", choices=sorted(SUITES), help="suite to run")
    parser.add_argument("--ring", action="append", default=None, metavar="SPEC",
                        help="ring spec (repeatable), e.g. z/6, f2, quo(poly(f2,X),[0,0,1])")
    parser.add_argument("--system", action="append", default=None, metavar="NAME",
                        help="root system name (repeatable), e.g. A3, D4")
    parser.add_argument("--ideal", default=None, help="ideal generators as a JSON list, or 'kernel'")
    parser.add_argument("--n", type=int, default=None, help="matrix size for the linear-family suites")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--tier", choices=("exact", "matrix", "auto"), default=None)
    parser.add_argument("--max-cosets", type=int, default=None)
    parser.add_argument("--out", help="write the canonical JSON report here")
    parser.add_argument("--format", choices=("json", "text"), default="text",
                        help="what to print on stdout")
    return parser


def _configs_from_args(args):
    docs = []
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        docs = doc["suites"] if isinstance(doc, dict) and "suites" in doc else [doc]
    elif args.suite:
        docs = [{"suite": args.suite}]
    else:
        raise SystemExit("need --suite or --config")
    configs = []
    for doc in docs:
        cfg = SuiteConfig.from_dict(doc)
        if args.suite and len(docs) == 1:
            cfg.suite = args.suite or cfg.suite
        if args.ring is not None:
            cfg.rings = tuple(args.ring)
        if args.system is not None:
            cfg.systems = tuple(args.system)
        if args.ideal is not None:
            cfg.ideal = args.ideal
        for flag, attr in (
            (args.n, "n"),
            (args.seed, "seed"),
            (args.samples, "samples"),
            (args.tier, "tier"),
            (args.max_cosets, "max_cosets"),
        ):
            if flag is not None:
                setattr(cfg, attr, flag)
        configs.append(cfg)
    return configs


def main(argv=None):
    args = build_parser().parse_args(argv)
    configs = _configs_from_args(args)
    ok = True
    json_blobs = []
    for cfg in configs:
        report = run_suite(cfg)
        json_blobs.append(report.to_json())
        sys.stdout.write(report.to_text() if args.format == "text" else report.to_json())
        if report.verdict != "pass":
            ok = False
    if args.out:
        with open(args.out, "w") as fh:
            fh.writelines(json_blobs)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
