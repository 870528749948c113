"""CLI: extract --labels labels.txt --encoders <names> --out dir --batch-size B"""

from __future__ import annotations

import argparse
import json
import sys

from .encoders import DEFAULT_ENCODERS
from .errors import ExtractorError
from .extract import extract


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="extract",
        description="Embed a text-label file into unit-norm NPY files, one per encoder.",
    )
    parser.add_argument("--labels", required=True, help="UTF-8 file, one label text per line")
    parser.add_argument(
        "--encoders",
        nargs="+",
        default=list(DEFAULT_ENCODERS),
        help="encoder names: hash<dim>, clip, bert, gpt2, or hf:<checkpoint>",
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--batch-size", type=int, default=64)
    parser.add_argument(
        "--pad-to-common",
        action="store_true",
        help="zero-pad every file to the widest encoder dimension so they stack",
    )
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 1

    try:
        sidecar = extract(
            args.labels, args.encoders, args.out, args.batch_size,
            pad_to_common=args.pad_to_common,
        )
    except (ExtractorError, OSError) as exc:
        print(f"extract: {exc}", file=sys.stderr)
        return 1
    json.dump(sidecar, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
