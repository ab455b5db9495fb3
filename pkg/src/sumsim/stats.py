"""Rank statistics: tie-averaged ranks, Spearman, Kendall tau-b, Mann-Whitney U."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

from .errors import DegenerateInputError
from .overlap import Orientation

U_TEST_MODES = ("auto", "exact", "normal_approx")

# Exact enumeration walks C(n1+n2, n1) labelings; past this total it is
# refused rather than left to run for minutes.
_EXACT_LIMIT = 20


@dataclass(frozen=True)
class CorrelationResult:
    kind: str
    value: float
    n: int


@dataclass(frozen=True)
class UTestResult:
    u1: float
    u2: float
    z: float
    p_two_sided: float
    method: str
    n1: int
    n2: int


def rank_average(values) -> list[float]:
    """1-based ranks; tied values share the average of their rank block."""
    data = [float(v) for v in values]
    order = sorted(range(len(data)), key=data.__getitem__)
    ranks = [0.0] * len(data)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and data[order[j + 1]] == data[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _check_paired(x, y):
    xs = [float(v) for v in x]
    ys = [float(v) for v in y]
    if len(xs) != len(ys):
        raise ValueError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("need at least two paired observations")
    return xs, ys


def spearman_rho(x, y) -> CorrelationResult:
    """Pearson correlation of the tie-averaged ranks."""
    xs, ys = _check_paired(x, y)
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        raise DegenerateInputError("spearman_rho is undefined for a constant series")
    rx = rank_average(xs)
    ry = rank_average(ys)
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    rho = cov / math.sqrt(vx * vy)
    return CorrelationResult("spearman", max(-1.0, min(1.0, rho)), n)


def kendall_tau_b(x, y) -> CorrelationResult:
    """Tie-corrected Kendall correlation, O(n^2) pair walk."""
    xs, ys = _check_paired(x, y)
    n = len(xs)
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            prod = dx * dy
            if prod > 0:
                concordant += 1
            elif prod < 0:
                discordant += 1
    n0 = n * (n - 1) // 2
    n1 = sum(t * (t - 1) // 2 for t in Counter(xs).values())
    n2 = sum(t * (t - 1) // 2 for t in Counter(ys).values())
    denom = math.sqrt(float(n0 - n1) * float(n0 - n2))
    if denom == 0.0:
        raise DegenerateInputError("kendall_tau_b is undefined for a constant series")
    tau = (concordant - discordant) / denom
    return CorrelationResult("kendall", max(-1.0, min(1.0, tau)), n)


def _u_statistic(group1, group2) -> float:
    u = 0.0
    for a in group1:
        for b in group2:
            if a > b:
                u += 1.0
            elif a == b:
                u += 0.5
    return u


def _tie_corrected_sigma(pooled, n1: int, n2: int) -> float:
    n = n1 + n2
    tie_term = sum(t**3 - t for t in Counter(pooled).values())
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    return math.sqrt(var) if var > 0 else 0.0


def _exact_p(pooled, n1: int, observed_u: float) -> float:
    """Two-sided permutation p: share of labelings at least as extreme.

    Uses U = (rank sum of group 1) - n1(n1+1)/2, which holds with midranks,
    so tied data is handled by construction.
    """
    n = len(pooled)
    n2 = n - n1
    ranks = rank_average(pooled)
    mu = n1 * n2 / 2.0
    threshold = abs(observed_u - mu) - 1e-12
    extreme = 0
    total = 0
    offset = n1 * (n1 + 1) / 2.0
    for combo in itertools.combinations(ranks, n1):
        u = sum(combo) - offset
        if abs(u - mu) >= threshold:
            extreme += 1
        total += 1
    return extreme / total


def mann_whitney_u(group1, group2, mode: str = "auto") -> UTestResult:
    """Two-sided Mann-Whitney U test.

    u1 counts pairs where a group-1 value beats a group-2 value (ties count
    half).  "auto" enumerates labelings exactly for small untied samples and
    otherwise uses the normal approximation with tie-corrected variance and
    a 0.5 continuity correction.
    """
    if mode not in U_TEST_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {U_TEST_MODES}")
    g1 = [float(v) for v in group1]
    g2 = [float(v) for v in group2]
    if not g1 or not g2:
        raise ValueError("both groups must be non-empty")
    n1, n2 = len(g1), len(g2)
    pooled = g1 + g2
    has_ties = len(set(pooled)) < len(pooled)

    u1 = _u_statistic(g1, g2)
    u2 = n1 * n2 - u1
    mu = n1 * n2 / 2.0
    sigma = _tie_corrected_sigma(pooled, n1, n2)

    if sigma == 0.0:
        z = 0.0
    else:
        shift = max(abs(u1 - mu) - 0.5, 0.0)
        z = math.copysign(shift / sigma, u1 - mu) if u1 != mu else 0.0

    if mode == "auto":
        method = "exact" if (n1 + n2 <= _EXACT_LIMIT and not has_ties) else "normal_approx"
    else:
        method = mode

    if method == "exact":
        if n1 + n2 > _EXACT_LIMIT:
            raise ValueError(
                f"exact enumeration limited to n1+n2 <= {_EXACT_LIMIT}, got {n1 + n2}"
            )
        p = _exact_p(pooled, n1, u1)
    else:
        p = 1.0 if sigma == 0.0 else math.erfc(abs(z) / math.sqrt(2.0))
    return UTestResult(u1, u2, z, min(p, 1.0), method, n1, n2)


def oriented_series(scores, aggregates) -> tuple[list[float], list[float]]:
    """Align one metric's scores with one criterion's aggregates.

    Returns (x, y) over the item intersection sorted by item id, where x is
    the metric value negated for lower-is-more-similar metrics and y is the
    agreement level 5 - mean (higher = stronger agreement), so a metric that
    tracks human judgment correlates positively.
    """
    score_list = list(scores)
    agg_list = list(aggregates)
    if not score_list or not agg_list:
        raise ValueError("scores and aggregates must be non-empty")
    metric_names = {s.metric_name for s in score_list}
    if len(metric_names) != 1:
        raise ValueError(f"scores mix metrics: {sorted(metric_names)}")
    criteria = {a.criterion for a in agg_list}
    if len(criteria) != 1:
        raise ValueError(f"aggregates mix criteria: {sorted(criteria)}")

    orientation = score_list[0].orientation
    by_item_score = {s.item_id: s.value for s in score_list}
    by_item_mean = {a.item_id: a.mean for a in agg_list}
    common = sorted(set(by_item_score) & set(by_item_mean))
    if len(common) < 2:
        raise ValueError(f"need at least 2 overlapping items, got {len(common)}")
    sign = -1.0 if orientation == Orientation.LOWER else 1.0
    x = [sign * by_item_score[item] for item in common]
    y = [5.0 - by_item_mean[item] for item in common]
    return x, y
