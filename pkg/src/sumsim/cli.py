"""Command-line front end.

Exit codes: 0 on success, 1 for configuration problems, 2 for malformed
input data.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import build_config, load_config_file, parse_config_value
from .errors import ConfigError, DataFormatError
from .pipeline import cmd_correlate, cmd_cross, cmd_ratings, cmd_report, cmd_score


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; remap to the config-error code."""

    def error(self, message):
        raise ConfigError(message)


def _add_common_flags(sub):
    sub.add_argument("--config", metavar="FILE", help="flat key = value config file")
    sub.add_argument("--out", metavar="DIR", help="output directory (default sumsim_out)")


def _add_scoring_flags(sub):
    sub.add_argument("--pairs", metavar="JSONL", help="summary pairs file")
    sub.add_argument("--metrics", metavar="LIST", help="comma-separated metric names")
    sub.add_argument(
        "--embeddings", metavar="JSONL", action="append", default=None,
        help="embedding file; repeat for multiple models",
    )
    sub.add_argument("--tokenizer", choices=("standard", "pretokenized"), default=None)
    sub.add_argument("--synonyms", metavar="FILE", help="synonym lexicon for METEOR")
    sub.add_argument("--tfidf-corpus", metavar="FILE", help="one document per line; defaults to the pair texts")
    sub.add_argument("--bleu-weights", metavar="LIST", help="comma-separated weights summing to 1")
    sub.add_argument("--bleu-smoothing", choices=("none", "add_epsilon"), default=None)
    sub.add_argument("--no-brevity-penalty", action="store_true", help="disable the BLEU brevity penalty")
    sub.add_argument("--rouge-beta", type=float, default=None)
    sub.add_argument("--rouge-w-alpha", type=float, default=None)
    sub.add_argument("--meteor-alpha", type=float, default=None)
    sub.add_argument("--meteor-gamma", type=float, default=None)
    sub.add_argument("--meteor-beta", type=float, default=None)


def _add_ratings_flags(sub):
    sub.add_argument("--ratings", metavar="CSV", help="participant answers file")
    sub.add_argument("--invert", metavar="LIST", help="criteria answered on an inverted scale")


def _add_group_flags(sub):
    sub.add_argument("--group-low", type=float, default=None, help="agree when mean <= this (default 2)")
    sub.add_argument("--group-high", type=float, default=None, help="disagree when mean >= this (default 3)")


def build_parser() -> _Parser:
    parser = _Parser(prog="sumsim", description="Score summary pairs and correlate with human ratings")
    commands = parser.add_subparsers(dest="command", required=True)

    score = commands.add_parser("score", help="compute per-pair metric scores")
    _add_common_flags(score)
    _add_scoring_flags(score)

    ratings = commands.add_parser("ratings", help="aggregate participant answers")
    _add_common_flags(ratings)
    _add_ratings_flags(ratings)

    correlate = commands.add_parser("correlate", help="correlate scores with rating aggregates")
    _add_common_flags(correlate)
    _add_group_flags(correlate)
    correlate.add_argument("--scores", metavar="JSONL", required=True)
    correlate.add_argument("--aggregates", metavar="CSV", required=True)

    cross = commands.add_parser("cross", help="pairwise correlations among score and rating series")
    _add_common_flags(cross)
    cross.add_argument("--scores", metavar="JSONL", required=True)
    cross.add_argument("--aggregates", metavar="CSV", required=True)

    rep = commands.add_parser("report", help="run the full pipeline")
    _add_common_flags(rep)
    _add_scoring_flags(rep)
    _add_ratings_flags(rep)
    _add_group_flags(rep)
    return parser


def _config_from_args(args):
    file_values = load_config_file(args.config) if getattr(args, "config", None) else None

    overrides = {}

    def take(attr, key):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value

    if getattr(args, "pairs", None) is not None:
        overrides["pairs_path"] = Path(args.pairs)
    if getattr(args, "ratings", None) is not None:
        overrides["ratings_path"] = Path(args.ratings)
    if getattr(args, "embeddings", None):
        overrides["embeddings_paths"] = tuple(Path(p) for p in args.embeddings)
    if getattr(args, "metrics", None) is not None:
        overrides["metrics"] = parse_config_value("metrics", args.metrics)
    if getattr(args, "invert", None) is not None:
        overrides["inverted_criteria"] = parse_config_value("invert", args.invert)
    if getattr(args, "out", None) is not None:
        overrides["out_dir"] = Path(args.out)
    if getattr(args, "synonyms", None) is not None:
        overrides["synonyms_path"] = Path(args.synonyms)
    if getattr(args, "tfidf_corpus", None) is not None:
        overrides["tfidf_corpus_path"] = Path(args.tfidf_corpus)
    if getattr(args, "bleu_weights", None) is not None:
        overrides["bleu_weights"] = parse_config_value("bleu_weights", args.bleu_weights)
    if getattr(args, "no_brevity_penalty", False):
        overrides["brevity_penalty"] = False
    take("tokenizer", "tokenizer")
    take("bleu_smoothing", "bleu_smoothing")
    take("group_low", "group_low")
    take("group_high", "group_high")
    take("rouge_beta", "rouge_beta")
    take("rouge_w_alpha", "rouge_w_alpha")
    take("meteor_alpha", "meteor_alpha")
    take("meteor_gamma", "meteor_gamma")
    take("meteor_beta", "meteor_beta")

    return build_config(file_values, **overrides)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
        if args.command == "score":
            run = cmd_score(config)
            print(f"wrote {run.paths['scores']} ({len(run.scores)} scores, {len(run.errors)} issues)")
        elif args.command == "ratings":
            run = cmd_ratings(config)
            total = sum(len(v) for v in run.aggregates.values())
            print(f"wrote {run.paths['aggregates']} ({total} aggregates)")
        elif args.command == "correlate":
            rep, paths = cmd_correlate(Path(args.scores), Path(args.aggregates), config)
            print(f"wrote {paths['table']} ({len(rep.rows)} metrics x {len(rep.criteria)} criteria)")
        elif args.command == "cross":
            matrices, paths = cmd_cross(Path(args.scores), Path(args.aggregates), config)
            print(f"wrote {paths['table']} ({len(matrices.labels)} series)")
        elif args.command == "report":
            cmd_report(config)
            print(f"wrote reports under {config.out_dir}")
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
