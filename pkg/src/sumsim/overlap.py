"""N-gram overlap metrics: Jaccard, sentence-level BLEU, ROUGE-L/W, METEOR."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .text import TokenSequence, lcs_length, ngram_profile, stem, wlcs_score


class Orientation(str, Enum):
    HIGHER = "higher_is_more_similar"
    LOWER = "lower_is_more_similar"


@dataclass(frozen=True)
class SummaryPair:
    """A generated summary and the reference it is judged against."""

    item_id: str
    prediction: TokenSequence
    reference: TokenSequence

    def __post_init__(self):
        if not self.item_id:
            raise ValueError("item_id must be non-empty")


@dataclass(frozen=True)
class MetricScore:
    metric_name: str
    item_id: str
    value: float
    orientation: Orientation = Orientation.HIGHER

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"{self.metric_name}: non-finite score {self.value!r}")


@dataclass(frozen=True)
class RougeResult:
    """Recall/precision against the reference plus their F-measure."""

    recall: float
    precision: float
    beta: float
    f: float


@dataclass(frozen=True)
class MeteorResult:
    matches: int
    chunks: int
    precision: float
    recall: float
    fmean: float
    penalty: float
    score: float
    stage_counts: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MeteorParams:
    """Harmonic-mean weight, penalty scale, and penalty exponent."""

    alpha_f: float = 0.9
    gamma: float = 0.5
    beta_m: float = 3.0


class SynonymLexicon:
    """Groups of interchangeable words.

    Two words are synonyms when at least one group contains both.  The
    relation is symmetric but deliberately not transitive across groups.
    """

    def __init__(self, groups):
        self._membership: dict[str, set[int]] = {}
        for idx, group in enumerate(groups):
            for word in group:
                self._membership.setdefault(word, set()).add(idx)

    @classmethod
    def load(cls, path) -> "SynonymLexicon":
        groups = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                words = line.split()
                if words:
                    groups.append(words)
        return cls(groups)

    def are_synonyms(self, a: str, b: str) -> bool:
        first = self._membership.get(a)
        if not first:
            return False
        second = self._membership.get(b)
        if not second:
            return False
        return not first.isdisjoint(second)

    def __len__(self) -> int:
        return len(self._membership)


def jaccard(pair: SummaryPair) -> MetricScore:
    """Set overlap of tokens; word order is ignored entirely."""
    pred = set(pair.prediction.tokens)
    ref = set(pair.reference.tokens)
    if not pred and not ref:
        value = 1.0
    elif not pred or not ref:
        value = 0.0
    else:
        value = len(pred & ref) / len(pred | ref)
    return MetricScore("jaccard", pair.item_id, value)


def bleu_n(pair: SummaryPair, n: int) -> MetricScore:
    """Clipped n-gram precision: matches are capped at the reference count."""
    pred_prof = ngram_profile(pair.prediction, n)
    ref_prof = ngram_profile(pair.reference, n)
    total = pred_prof.total()
    if total == 0:
        value = 0.0
    else:
        clipped = sum(
            min(count, ref_prof.counts.get(gram, 0))
            for gram, count in pred_prof.counts.items()
        )
        value = clipped / total
    return MetricScore(f"bleu{n}", pair.item_id, value)


def _brevity_penalty(pred_len: int, ref_len: int) -> float:
    if pred_len == 0:
        return 0.0
    if pred_len > ref_len:
        return 1.0
    return math.exp(1.0 - ref_len / pred_len)


_SMOOTHING_MODES = ("none", "add_epsilon")
_EPSILON = 1e-7


def bleu_composite(
    pair: SummaryPair,
    weights=(0.25, 0.25, 0.25, 0.25),
    smoothing: str = "none",
    use_brevity_penalty: bool = True,
) -> MetricScore:
    """Weighted geometric mean of clipped precisions times a brevity penalty.

    weights[i] weights the (i+1)-gram precision and must sum to 1.  Without
    smoothing a single zero precision (with nonzero weight) zeroes the score;
    "add_epsilon" substitutes 1e-7 for zero precisions instead.
    """
    if not weights:
        raise ValueError("weights must be non-empty")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {sum(weights)!r}")
    if smoothing not in _SMOOTHING_MODES:
        raise ValueError(f"unknown smoothing {smoothing!r}; expected one of {_SMOOTHING_MODES}")

    bp = 1.0
    if use_brevity_penalty:
        bp = _brevity_penalty(len(pair.prediction), len(pair.reference))

    log_sum = 0.0
    for order, weight in enumerate(weights, start=1):
        if weight == 0:
            continue
        p = bleu_n(pair, order).value
        if p == 0.0:
            if smoothing == "none":
                return MetricScore("bleu", pair.item_id, 0.0)
            p = _EPSILON
        log_sum += weight * math.log(p)
    return MetricScore("bleu", pair.item_id, bp * math.exp(log_sum))


def _f_measure(recall: float, precision: float, beta: float) -> float:
    denom = recall + beta * beta * precision
    if denom <= 0.0:
        return 0.0
    return (1.0 + beta * beta) * recall * precision / denom


def rouge_l(pair: SummaryPair, beta: float = 1.0) -> RougeResult:
    """LCS recall/precision; beta > 1 weights recall more heavily."""
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    pred_len = len(pair.prediction)
    ref_len = len(pair.reference)
    if pred_len == 0 or ref_len == 0:
        return RougeResult(0.0, 0.0, beta, 0.0)
    lcs = lcs_length(pair.prediction, pair.reference)
    recall = lcs / ref_len
    precision = lcs / pred_len
    return RougeResult(recall, precision, beta, _f_measure(recall, precision, beta))


def rouge_w(pair: SummaryPair, alpha: float = 1.2, beta: float = 1.0) -> RougeResult:
    """Weighted-LCS variant of rouge_l; contiguous matches count for more."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    pred_len = len(pair.prediction)
    ref_len = len(pair.reference)
    if pred_len == 0 or ref_len == 0:
        return RougeResult(0.0, 0.0, beta, 0.0)
    score = wlcs_score(pair.prediction, pair.reference, alpha)
    inv = 1.0 / alpha
    recall = (score / float(ref_len) ** alpha) ** inv
    precision = (score / float(pred_len) ** alpha) ** inv
    return RougeResult(recall, precision, beta, _f_measure(recall, precision, beta))


def _align_stage(pred, ref, pred_free, ref_free, same, alignment):
    """One greedy left-to-right matching pass over the still-unmatched tokens.

    Ties prefer the reference position that continues the chunk started by
    the previous prediction token; otherwise the leftmost candidate wins.
    """
    pairs = set(alignment)
    matched = 0
    for i in range(len(pred)):
        if not pred_free[i]:
            continue
        candidates = [j for j in range(len(ref)) if ref_free[j] and same(pred[i], ref[j])]
        if not candidates:
            continue
        chosen = None
        for j in candidates:
            if (i - 1, j - 1) in pairs:
                chosen = j
                break
        if chosen is None:
            chosen = candidates[0]
        alignment.append((i, chosen))
        pairs.add((i, chosen))
        pred_free[i] = False
        ref_free[chosen] = False
        matched += 1
    return matched


def _chunk_count(alignment) -> int:
    if not alignment:
        return 0
    ordered = sorted(alignment)
    chunks = 1
    for (pi, pj), (ci, cj) in zip(ordered, ordered[1:]):
        if ci != pi + 1 or cj != pj + 1:
            chunks += 1
    return chunks


def meteor(
    pair: SummaryPair,
    params: MeteorParams = MeteorParams(),
    synonyms: SynonymLexicon | None = None,
) -> MeteorResult:
    """Staged unigram matching with a fragmentation penalty.

    Matching runs in three passes (surface, stem, synonym), each consuming
    only tokens the earlier passes left unmatched; every token matches at
    most once.  The penalty grows with the number of chunks the matched
    pairs break into, so scrambled word order is punished.
    """
    if not (0.0 < params.alpha_f <= 1.0):
        raise ValueError(f"alpha_f must be in (0, 1], got {params.alpha_f}")
    if not (0.0 < params.gamma <= 1.0):
        raise ValueError(f"gamma must be in (0, 1], got {params.gamma}")
    if params.beta_m <= 0:
        raise ValueError(f"beta_m must be > 0, got {params.beta_m}")

    pred = pair.prediction.tokens
    ref = pair.reference.tokens
    pred_free = [True] * len(pred)
    ref_free = [True] * len(ref)
    alignment: list[tuple[int, int]] = []

    pred_stems = [stem(t) for t in pred]
    ref_stems = [stem(t) for t in ref]

    stage_counts = {"exact": 0, "stem": 0, "synonym": 0}
    stage_counts["exact"] = _align_stage(
        pred, ref, pred_free, ref_free, lambda a, b: a == b, alignment
    )
    stage_counts["stem"] = _align_stage(
        pred_stems, ref_stems, pred_free, ref_free, lambda a, b: a == b, alignment
    )
    if synonyms is not None and len(synonyms):
        stage_counts["synonym"] = _align_stage(
            pred, ref, pred_free, ref_free, synonyms.are_synonyms, alignment
        )

    matches = len(alignment)
    if matches == 0:
        return MeteorResult(0, 0, 0.0, 0.0, 0.0, 0.0, 0.0, stage_counts)

    precision = matches / len(pred)
    recall = matches / len(ref)
    fmean = precision * recall / (params.alpha_f * precision + (1.0 - params.alpha_f) * recall)
    chunks = _chunk_count(alignment)
    penalty = params.gamma * (chunks / matches) ** params.beta_m
    score = fmean * (1.0 - penalty)
    return MeteorResult(matches, chunks, precision, recall, fmean, penalty, score, stage_counts)
