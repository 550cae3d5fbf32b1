"""Command-line entry point: ``plotkit <kind> --in FILE [--in FILE ...] --out FILE``."""

from __future__ import annotations

import argparse
import sys

from .csvio import SchemaError
from .figures import FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render fairbandits experiment CSVs as figures (SVG by default, PNG by extension).",
    )
    parser.add_argument("kind", choices=("aggregate", "single-run"), help="figure kind")
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="FILE",
        help="input CSV; repeat for side-by-side panels",
    )
    parser.add_argument("--out", required=True, metavar="FILE", help="output image path")
    parser.add_argument("--title", default=None, help="optional figure title")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(inputs=args.inputs, output=args.out, kind=args.kind, title=args.title)
    try:
        render(spec)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
