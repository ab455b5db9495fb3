"""Survey answer ingestion, polarity handling, aggregation, and agreement."""

from __future__ import annotations

import csv
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, replace

from .errors import DataFormatError

CRITERIA = ("accuracy", "completeness", "conciseness", "similarity")
SHOWN_VARIANTS = ("generated", "reference")

# Criteria phrased negatively in the questionnaire; their answers are flipped
# (5 - answer) at ingestion so that 1 always means the most favorable rating.
DEFAULT_INVERTED_CRITERIA = frozenset({"completeness", "conciseness"})

_RATINGS_HEADER = ["participant_id", "item_id", "shown_variant", "criterion", "answer"]


@dataclass(frozen=True)
class RatingRecord:
    participant_id: str
    item_id: str
    shown_variant: str
    criterion: str
    answer: int

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.shown_variant not in SHOWN_VARIANTS:
            raise ValueError(f"unknown shown_variant {self.shown_variant!r}")
        if self.answer not in (1, 2, 3, 4):
            raise ValueError(f"answer must be in 1..4, got {self.answer!r}")


@dataclass(frozen=True)
class AggregateRating:
    item_id: str
    criterion: str
    mean: float
    count: int


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    geometric_mean: float
    harmonic_mean: float
    median: float
    stddev: float
    cv: float
    variance: float


@dataclass(frozen=True)
class GroupSplit:
    """Item ids partitioned by aggregate rating level."""

    agree_ids: frozenset
    disagree_ids: frozenset
    excluded_ids: frozenset


def load_ratings(path) -> list[RatingRecord]:
    """Read the ratings CSV; any malformed row fails the whole load."""
    records = []
    seen: set[tuple[str, str, str]] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError("missing header row", path=path, line_no=1) from None
        if header != _RATINGS_HEADER:
            raise DataFormatError(
                f"header must be {','.join(_RATINGS_HEADER)}", path=path, line_no=1
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise DataFormatError(
                    f"expected 5 fields, got {len(row)}", path=path, line_no=line_no
                )
            participant, item, variant, criterion, answer_raw = (f.strip() for f in row)
            if not participant or not item:
                raise DataFormatError("empty participant_id or item_id", path=path, line_no=line_no)
            try:
                answer = int(answer_raw)
            except ValueError:
                raise DataFormatError(
                    f"answer must be an integer, got {answer_raw!r}", path=path, line_no=line_no
                ) from None
            try:
                record = RatingRecord(participant, item, variant, criterion, answer)
            except ValueError as exc:
                raise DataFormatError(str(exc), path=path, line_no=line_no) from exc
            key = (participant, item, criterion)
            if key in seen:
                raise DataFormatError(
                    f"duplicate rating for participant {participant!r}, item {item!r}, "
                    f"criterion {criterion!r}",
                    path=path, line_no=line_no,
                )
            seen.add(key)
            records.append(record)
    return records


def normalize_polarity(record: RatingRecord, inverted=DEFAULT_INVERTED_CRITERIA) -> RatingRecord:
    """Flip answers (5 - answer) for negatively phrased criteria."""
    if record.criterion in inverted:
        return replace(record, answer=5 - record.answer)
    return record


def normalize_all(records, inverted=DEFAULT_INVERTED_CRITERIA) -> list[RatingRecord]:
    return [normalize_polarity(r, inverted) for r in records]


def aggregate(records, criterion: str) -> list[AggregateRating]:
    """Per-item mean answer for one criterion, sorted by item id."""
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    by_item: dict[str, list[int]] = defaultdict(list)
    for rec in records:
        if rec.criterion == criterion:
            by_item[rec.item_id].append(rec.answer)
    return [
        AggregateRating(item, criterion, sum(answers) / len(answers), len(answers))
        for item, answers in sorted(by_item.items())
    ]


def descriptive_stats(values) -> DescriptiveStats:
    """Location and spread summary; stddev uses the n-1 denominator."""
    data = [float(v) for v in values]
    if not data:
        raise ValueError("descriptive_stats requires at least one value")
    if any(v <= 0 for v in data):
        raise ValueError("descriptive_stats requires strictly positive values")
    mean = statistics.fmean(data)
    gmean = math.exp(statistics.fmean([math.log(v) for v in data]))
    hmean = len(data) / sum(1.0 / v for v in data)
    median = float(statistics.median(data))
    stddev = statistics.stdev(data) if len(data) > 1 else 0.0
    return DescriptiveStats(
        mean=mean,
        geometric_mean=gmean,
        harmonic_mean=hmean,
        median=median,
        stddev=stddev,
        cv=stddev / mean,
        variance=stddev * stddev,
    )


def agreement_histogram(records) -> dict[int, float]:
    """Distribution of |answer difference| over co-rating participant pairs.

    Every unordered pair of participants who answered the same
    (item, criterion, shown_variant) cell contributes one difference; the
    returned fractions sum to 1.  Empty when no cell was co-rated.
    """
    cells: dict[tuple[str, str, str], list[int]] = defaultdict(list)
    for rec in records:
        cells[(rec.item_id, rec.criterion, rec.shown_variant)].append(rec.answer)
    tallies = {0: 0, 1: 0, 2: 0, 3: 0}
    total = 0
    for answers in cells.values():
        for i in range(len(answers)):
            for j in range(i + 1, len(answers)):
                tallies[abs(answers[i] - answers[j])] += 1
                total += 1
    if total == 0:
        return {}
    return {diff: count / total for diff, count in tallies.items()}


def split_groups(aggregates, low: float = 2.0, high: float = 3.0) -> GroupSplit:
    """Partition items into agreement groups by mean rating.

    Items rated <= low count as agreement, >= high as disagreement; anything
    strictly between is excluded.  Both boundaries are inclusive.
    """
    if low >= high:
        raise ValueError(f"low must be < high, got low={low}, high={high}")
    agree, disagree, excluded = set(), set(), set()
    for agg in aggregates:
        if agg.mean <= low:
            agree.add(agg.item_id)
        elif agg.mean >= high:
            disagree.add(agg.item_id)
        else:
            excluded.add(agg.item_id)
    return GroupSplit(frozenset(agree), frozenset(disagree), frozenset(excluded))
