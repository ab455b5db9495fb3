#!/usr/bin/env python3
"""Generate a synthetic demo study: pairs, ratings, embeddings, and a config.

Prediction quality varies smoothly across items and participant answers track
that quality with noise, so the downstream correlation report has real
structure to find instead of flat tables.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
from pathlib import Path

from sumsim.ratings import CRITERIA, DEFAULT_INVERTED_CRITERIA
from sumsim.text import normalize_tokenize
from sumsim.vectors import det_embed, det_token_vectors

VOCAB = (
    "returns the list of active users opens a file handle computes checksum "
    "for given block removes stale cache entries parses header fields from "
    "request writes buffer to disk validates input before saving creates "
    "index on first access closes connection pool sorts records by key "
    "updates counter value reads configuration at startup sends notification "
    "when job finishes splits string into tokens merges adjacent ranges "
    "checks whether path exists frees allocated memory logs every failed "
    "attempt converts timestamp local time builds lookup table escapes "
    "special characters loads plugin modules counts distinct items filters "
    "rows matching pattern"
).split()

SENTENCE_MODEL = "demo-sent"
TOKEN_MODEL = "demo-tok"


def make_pairs(rng: random.Random, n_items: int):
    """Reference summaries plus predictions corrupted inversely to quality."""
    rows = []
    for i in range(n_items):
        quality = i / max(n_items - 1, 1)
        ref = [rng.choice(VOCAB) for _ in range(rng.randint(5, 12))]
        pred = list(ref)
        n_replace = round((1.0 - quality) * 0.8 * len(pred))
        for pos in rng.sample(range(len(pred)), n_replace):
            pred[pos] = rng.choice(VOCAB)
        rows.append((f"item{i:03d}", " ".join(pred), " ".join(ref), quality))
    return rows


def write_pairs(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item_id, pred, ref, _ in rows:
            fh.write(json.dumps({"id": item_id, "prediction": pred, "reference": ref}) + "\n")


def write_ratings(path: Path, rows, n_participants: int, rng: random.Random) -> None:
    """Answers on the 1..4 scale; 1 is most favorable after ingestion.

    Negatively phrased criteria are stored pre-flip, the way a questionnaire
    export would deliver them.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["participant_id", "item_id", "shown_variant", "criterion", "answer"])
        for k in range(n_participants):
            for item_id, _, _, quality in rows:
                for criterion in CRITERIA:
                    favorable = 1.0 + 3.0 * (1.0 - quality) + rng.gauss(0.0, 0.35)
                    answer = min(4, max(1, round(favorable)))
                    if criterion in DEFAULT_INVERTED_CRITERIA:
                        answer = 5 - answer
                    writer.writerow([f"p{k:02d}", item_id, "generated", criterion, answer])


def write_embeddings(path: Path, rows, dim: int, seed: int, kind: str, model: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item_id, pred, ref, _ in rows:
            for role, text in (("prediction", pred), ("reference", ref)):
                seq = normalize_tokenize(text)
                record = {"id": item_id, "role": role, "model": model, "kind": kind}
                if kind == "sentence":
                    record["vector"] = [float(v) for v in det_embed(seq, dim, seed)]
                else:
                    record["tokens"] = list(seq.tokens)
                    record["matrix"] = [
                        [float(v) for v in row] for row in det_token_vectors(seq, dim, seed)
                    ]
                fh.write(json.dumps(record) + "\n")


def write_config(path: Path, out_dir: Path) -> None:
    metrics = ",".join(
        [
            "jaccard",
            "bleu",
            "rouge-l",
            "rouge-w",
            "meteor",
            f"emb-cosine:{SENTENCE_MODEL}",
            f"bertscore:{TOKEN_MODEL}",
        ]
    )
    path.write_text(
        f"pairs = {out_dir / 'pairs.jsonl'}\n"
        f"ratings = {out_dir / 'ratings.csv'}\n"
        f"embeddings = {out_dir / 'emb_sentence.jsonl'},{out_dir / 'emb_tokens.jsonl'}\n"
        f"metrics = {metrics}\n"
        f"out = {out_dir / 'reports'}\n",
        encoding="utf-8",
    )


def generate(out_dir: Path, items: int = 60, participants: int = 8,
             seed: int = 7, dim: int = 32) -> Path:
    """Write the full demo dataset; returns the config file path."""
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    rows = make_pairs(rng, items)
    write_pairs(out_dir / "pairs.jsonl", rows)
    write_ratings(out_dir / "ratings.csv", rows, participants, rng)
    write_embeddings(out_dir / "emb_sentence.jsonl", rows, dim, seed, "sentence", SENTENCE_MODEL)
    write_embeddings(out_dir / "emb_tokens.jsonl", rows, dim, seed, "tokens", TOKEN_MODEL)
    config_path = out_dir / "run.cfg"
    write_config(config_path, out_dir)
    return config_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("demo_data"), help="output directory")
    parser.add_argument("--items", type=int, default=60)
    parser.add_argument("--participants", type=int, default=8)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--dim", type=int, default=32, help="embedding dimension")
    args = parser.parse_args(argv)

    config_path = generate(args.out, args.items, args.participants, args.seed, args.dim)
    print(f"demo dataset in {args.out}")
    print(f"run the pipeline with: sumsim report --config {config_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
