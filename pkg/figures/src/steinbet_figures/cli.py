"""Standalone figure renderer for experiment CSV bundles."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinbet-figures",
        description="Render figures from steinbet CSV bundles (no recomputation)",
    )
    parser.add_argument("inputs", nargs="+", help="input CSV file(s)")
    parser.add_argument("--kind", choices=FIGURE_KINDS, required=True)
    parser.add_argument("--out", required=True, help="output image (.svg or .png)")
    parser.add_argument("--label", action="append", default=[], dest="labels")
    parser.add_argument("--title", default="")
    parser.add_argument(
        "--threshold",
        type=float,
        default=None,
        help="horizontal reference line, e.g. log(1/alpha) on wealth plots",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = render(
            FigureSpec(
                inputs=args.inputs,
                kind=args.kind,
                output=args.out,
                labels=args.labels,
                title=args.title,
                threshold=args.threshold,
            )
        )
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
