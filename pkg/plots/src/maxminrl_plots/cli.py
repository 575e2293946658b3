"""Figure CLI: `maxminrl-plot <kind> --in <dir> --out <file.png>`.

Kinds: visitation, returns, histograms, probes, cross_sections.
Exits 0 on success; on failure prints one machine-readable JSON error
line to stderr (naming the offending file/column where known) and exits
nonzero, leaving no image behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .figures import KINDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxminrl-plot",
                                     description="render figures from runner CSVs")
    parser.add_argument("kind", choices=sorted(KINDS))
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding the input CSVs")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--step", type=int, default=None,
                        help="cross_sections only: which xsec_<step>.csv to render")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        fn = KINDS[args.kind]
        if args.kind == "cross_sections":
            meta = fn(args.in_dir, args.out, step=args.step)
        else:
            meta = fn(args.in_dir, args.out)
        print(f"wrote {args.out} ({json.dumps(meta)[:120]}...)")
        return 0
    except Exception as exc:
        if os.path.exists(args.out):
            os.remove(args.out)
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
