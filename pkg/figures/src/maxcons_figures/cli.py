"""figures command line: regenerate one paper figure from scenario CSVs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import MissingInput, SchemaMismatch
from .plots import INPUT_FILES, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Regenerate figures from maxcons scenario CSV artifacts",
    )
    parser.add_argument("fig_id", choices=sorted(INPUT_FILES), metavar="fig-id")
    parser.add_argument("--in", dest="input_dir", type=Path, required=True,
                        help="scenario output directory holding the CSVs")
    parser.add_argument("--out", type=Path, required=True, help="output .svg path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(figure_id=args.fig_id, input_dir=args.input_dir, output_path=args.out)
    try:
        out = render(spec)
    except MissingInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SchemaMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
