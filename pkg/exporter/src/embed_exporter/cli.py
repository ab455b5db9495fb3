"""Command line front end: `export` runs a model, `fixture` writes hash vectors.

Exit codes: 0 on success (skipped texts still count as success; check the
sidecar), 1 for configuration or model problems, 2 for malformed input files.
"""

from __future__ import annotations

import argparse
import sys

from .adapters import POOLINGS
from .errors import ExporterError, PairFormatError
from .jobs import DEFAULT_SIG_DIGITS, KINDS, ExportJob, export_embeddings, export_fixture


class _Parser(argparse.ArgumentParser):
    # argparse exits the process on bad flags; raise instead so main() owns
    # the exit code
    def error(self, message):
        raise ExporterError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="embed-exporter",
                     description="Write embedding JSONL files for summary pairs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    export = sub.add_parser("export", help="encode pairs with a configured model")
    export.add_argument("--pairs", required=True, help="pairs JSONL file")
    export.add_argument("--model", required=True,
                        help="model id: hash:<dim>:<seed>, st:<checkpoint>, or hf:<checkpoint>")
    export.add_argument("--kind", choices=KINDS, default="sentence")
    export.add_argument("--pooling", choices=POOLINGS, default="model_default")
    export.add_argument("--out", required=True, help="output JSONL path")
    export.add_argument("--batch", type=int, default=32, help="texts per inference batch")
    export.add_argument("--digits", type=int, default=DEFAULT_SIG_DIGITS,
                        help="significant digits for serialized floats; 0 keeps full precision")

    fixture = sub.add_parser("fixture", help="write full-precision hash vectors")
    fixture.add_argument("--dim", type=int, required=True)
    fixture.add_argument("--seed", type=int, default=0)
    fixture.add_argument("--pairs", required=True, help="pairs JSONL file")
    fixture.add_argument("--out", required=True, help="output JSONL path")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "export":
            if args.digits < 0:
                raise ExporterError(f"--digits must be >= 0, got {args.digits}")
            job = ExportJob(pairs_path=args.pairs, model=args.model, out_path=args.out,
                            kind=args.kind, pooling=args.pooling, batch_size=args.batch)
            result = export_embeddings(job, digits=None if args.digits == 0 else args.digits)
        else:
            result = export_fixture(args.pairs, args.out, dim=args.dim, seed=args.seed)
    except ExporterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except PairFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    suffix = f" ({len(result.skipped)} skipped, see {result.errors_path})" if result.skipped else ""
    print(f"wrote {result.records_written} records to {result.out_path}{suffix}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
