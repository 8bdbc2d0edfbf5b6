"""Command line entry point for the figure scripts.

Each invocation renders exactly one image from one or more flat record
files.  Configuration and schema problems exit with status 2 and a
message on stderr; success exits 0.
"""

from __future__ import annotations

import argparse
import sys

from .records import SchemaError, SelectionError
from .render import KINDS, PlotJob, plot


def build_parser():
    parser = argparse.ArgumentParser(
        prog="figplots",
        description="Render figures from flat gap-lab run records.",
    )
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="FILE",
        help="record file to read (repeatable)",
    )
    parser.add_argument("--kind", choices=KINDS, required=True, help="figure type")
    parser.add_argument("--out", required=True, metavar="FILE", help="image path to write")
    parser.add_argument(
        "--select",
        action="append",
        default=[],
        metavar="COLUMN=VALUE",
        help="keep only rows whose column equals the value (repeatable)",
    )
    parser.add_argument(
        "--no-overlay",
        action="store_true",
        help="suppress the dashed analytic overlay lines",
    )
    parser.add_argument("--logy", action="store_true", help="logarithmic y axis")
    parser.add_argument("--title", help="figure title")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    selects = []
    for item in args.select:
        key, sep, value = item.partition("=")
        if not sep or not key:
            print(f"error: --select expects COLUMN=VALUE, got {item!r}", file=sys.stderr)
            return 2
        selects.append((key, value))
    job = PlotJob(
        inputs=tuple(args.inputs),
        kind=args.kind,
        out=args.out,
        overlay=not args.no_overlay,
        logy=args.logy,
        selects=tuple(selects),
        title=args.title,
    )
    try:
        plot(job)
    except (SchemaError, SelectionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
