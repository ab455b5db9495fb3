"""File formats: summary pairs, score files, aggregate tables.

CSV/JSONL outputs keep full float precision (shortest round-trip repr);
human-readable tables elsewhere format to four decimals.  All writers emit
rows in a fixed sort order so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math

from .errors import DataFormatError
from .overlap import MetricScore, Orientation, SummaryPair
from .ratings import AggregateRating, CRITERIA
from .text import normalize_tokenize


def load_pairs(path, tokenizer_mode: str = "standard") -> list[SummaryPair]:
    """Read {"id", "prediction", "reference"} JSONL and tokenize both sides."""
    pairs = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", path=path, line_no=line_no) from exc
            if not isinstance(obj, dict):
                raise DataFormatError("record must be a JSON object", path=path, line_no=line_no)
            item_id = obj.get("id")
            if not isinstance(item_id, str) or not item_id:
                raise DataFormatError("missing or empty 'id'", path=path, line_no=line_no)
            if item_id in seen:
                raise DataFormatError(f"duplicate item id {item_id!r}", path=path, line_no=line_no)
            prediction = obj.get("prediction")
            reference = obj.get("reference")
            if not isinstance(prediction, str) or not isinstance(reference, str):
                raise DataFormatError(
                    "'prediction' and 'reference' must be strings", path=path, line_no=line_no
                )
            seen.add(item_id)
            pairs.append(
                SummaryPair(
                    item_id=item_id,
                    prediction=normalize_tokenize(prediction, tokenizer_mode),
                    reference=normalize_tokenize(reference, tokenizer_mode),
                )
            )
    return pairs


def write_scores_jsonl(path, scores) -> None:
    ordered = sorted(scores, key=lambda s: (s.item_id, s.metric_name))
    with open(path, "w", encoding="utf-8") as fh:
        for s in ordered:
            fh.write(
                json.dumps(
                    {
                        "item_id": s.item_id,
                        "metric": s.metric_name,
                        "value": s.value,
                        "orientation": s.orientation.value,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def load_scores_jsonl(path) -> list[MetricScore]:
    scores = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", path=path, line_no=line_no) from exc
            try:
                orientation = Orientation(obj.get("orientation", Orientation.HIGHER.value))
                value = obj["value"]
                if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                    raise ValueError(f"non-finite value {value!r}")
                scores.append(
                    MetricScore(
                        metric_name=obj["metric"],
                        item_id=obj["item_id"],
                        value=float(value),
                        orientation=orientation,
                    )
                )
            except (KeyError, ValueError, TypeError) as exc:
                raise DataFormatError(f"bad score record: {exc}", path=path, line_no=line_no) from exc
    return scores


def write_error_sidecar(path, entries) -> None:
    """entries: (item_id, metric, message, is_warning) tuples."""
    ordered = sorted(entries, key=lambda e: (e[0], e[1], e[2]))
    with open(path, "w", encoding="utf-8") as fh:
        for item_id, metric, message, is_warning in ordered:
            fh.write(
                json.dumps(
                    {
                        "item_id": item_id,
                        "metric": metric,
                        "error": message,
                        "warning": bool(is_warning),
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def write_score_summary(path, scores) -> None:
    """Arithmetic mean per metric over the scored items."""
    by_metric: dict[str, list[float]] = {}
    for s in scores:
        by_metric.setdefault(s.metric_name, []).append(s.value)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric", "mean", "n"])
        for metric in sorted(by_metric):
            values = by_metric[metric]
            writer.writerow([metric, repr(sum(values) / len(values)), len(values)])


_AGG_HEADER = ["item_id", "criterion", "mean", "count"]


def write_aggregates_csv(path, aggregates) -> None:
    ordered = sorted(aggregates, key=lambda a: (a.criterion, a.item_id))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_AGG_HEADER)
        for agg in ordered:
            writer.writerow([agg.item_id, agg.criterion, repr(agg.mean), agg.count])


def load_aggregates_csv(path) -> list[AggregateRating]:
    aggregates = []
    seen = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError("missing header row", path=path, line_no=1) from None
        if header != _AGG_HEADER:
            raise DataFormatError(f"header must be {','.join(_AGG_HEADER)}", path=path, line_no=1)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise DataFormatError(f"expected 4 fields, got {len(row)}", path=path, line_no=line_no)
            item_id, criterion, mean_raw, count_raw = (f.strip() for f in row)
            if criterion not in CRITERIA:
                raise DataFormatError(f"unknown criterion {criterion!r}", path=path, line_no=line_no)
            if not item_id:
                raise DataFormatError("empty item_id", path=path, line_no=line_no)
            try:
                mean = float(mean_raw)
                count = int(count_raw)
            except ValueError:
                raise DataFormatError(
                    f"bad mean/count: {mean_raw!r}, {count_raw!r}", path=path, line_no=line_no
                ) from None
            if not math.isfinite(mean) or not (1.0 <= mean <= 4.0):
                raise DataFormatError(f"mean out of range 1..4: {mean_raw}", path=path, line_no=line_no)
            if count < 1:
                raise DataFormatError(f"count must be >= 1, got {count}", path=path, line_no=line_no)
            key = (item_id, criterion)
            if key in seen:
                raise DataFormatError(
                    f"duplicate aggregate for item {item_id!r}, criterion {criterion!r}",
                    path=path, line_no=line_no,
                )
            seen.add(key)
            aggregates.append(AggregateRating(item_id, criterion, mean, count))
    return aggregates
