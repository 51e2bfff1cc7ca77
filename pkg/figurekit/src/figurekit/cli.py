"""Command-line driver: render one figure kind, or a batch manifest.

``figurekit render KIND RUN_DIR -o OUTPUT`` renders one figure from a run
directory's artifacts; ``figurekit batch MANIFEST`` renders a JSON list of
figure entries; ``figurekit list-kinds`` prints the known kinds.  Schema
mismatches and bad manifests exit with code 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .figures import render
from .spec import FIGURE_KINDS, FigureSpec, SchemaError

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figurekit",
        description="deterministic figures from gaugemem run artifacts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    one = sub.add_parser("render", help="render one figure kind")
    one.add_argument("kind", choices=FIGURE_KINDS)
    one.add_argument("run_dir", help="directory holding the run's artifacts")
    one.add_argument("-o", "--output", required=True,
                     help="output stem; .svg and .png are written")
    one.add_argument("--bins", type=int, default=None,
                     help="histogram bin count for the ratio kinds")
    one.add_argument("--title", default=None)

    batch = sub.add_parser("batch", help="render every entry of a manifest")
    batch.add_argument("manifest", help="JSON list of figure entries")
    batch.add_argument("-o", "--output-root", default=".",
                       help="directory output stems are resolved against")

    sub.add_parser("list-kinds", help="print the known figure kinds")
    return parser


def _style_from_args(args) -> dict:
    style = {}
    if args.bins is not None:
        style["bins"] = args.bins
    if args.title is not None:
        style["title"] = args.title
    return style


def _cmd_render(args) -> int:
    spec = FigureSpec.from_run_dir(
        args.kind, args.run_dir, args.output, _style_from_args(args)
    )
    for path in render(spec):
        print(path)
    return 0


def _cmd_batch(args) -> int:
    try:
        entries = json.loads(Path(args.manifest).read_text())
    except (OSError, ValueError) as exc:
        raise SchemaError(f"cannot read manifest {args.manifest}: {exc}")
    if not isinstance(entries, list):
        raise SchemaError("manifest must be a JSON list of figure entries")
    root = Path(args.output_root)
    for i, entry in enumerate(entries):
        keys = set(entry) - {"kind", "run_dir", "output", "style"}
        if keys or not {"kind", "run_dir", "output"} <= set(entry):
            raise SchemaError(
                f"manifest entry {i} needs kind/run_dir/output "
                f"(optional style), got {sorted(entry)}"
            )
        spec = FigureSpec.from_run_dir(
            entry["kind"], entry["run_dir"], root / entry["output"],
            entry.get("style", {}),
        )
        for path in render(spec):
            print(path)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "render":
            return _cmd_render(args)
        if args.command == "batch":
            return _cmd_batch(args)
        print("\n".join(FIGURE_KINDS))
        return 0
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
