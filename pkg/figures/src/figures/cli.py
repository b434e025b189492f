"""figures <kind> --in a.csv [b.csv ...] --out fig.png"""

import argparse
import sys

from .render import render
from .schema import SchemaError


def build_parser():
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figures from integrator CSV outputs",
    )
    parser.add_argument("kind", choices=["fig1", "fig2", "fig3", "fig4"])
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        render(args.kind, args.inputs, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
