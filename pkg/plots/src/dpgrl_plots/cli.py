"""Command-line figure rendering: dpgrl-plots --input results.csv
--kind accuracy-vs-epsilon --output figure.png"""

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def build_parser():
    parser = argparse.ArgumentParser(prog="dpgrl-plots", description=__doc__)
    parser.add_argument("--input", required=True, help="source CSV")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--output", required=True, help="image file to write")
    parser.add_argument(
        "--linear-x",
        action="store_true",
        help="linear epsilon axis instead of log",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(args.input, args.kind, args.output, not args.linear_x)
        render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
