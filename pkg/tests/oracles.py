"""Independent brute-force oracles used to validate the fast implementations.

Everything here favors obviousness over speed: exhaustive enumeration for
subsequence and alignment scoring, quadratic pair walks for rank statistics,
full labeling enumeration for the exact U test.  Inputs are plain token
lists / float lists so the oracles share no code paths with the package
internals (the stemmer is reused deliberately: stem equality is part of the
metric definition, not of the search being validated).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

from sumsim.text import stem

# ---------------------------------------------------------------------------
# subsequence scoring
# ---------------------------------------------------------------------------


def lcs_brute(a, b):
    """Longest common subsequence by trying every subsequence of a."""
    best = 0
    n = len(a)
    for mask in range(1 << n):
        sub = [a[i] for i in range(n) if mask >> i & 1]
        if len(sub) <= best:
            continue
        it = iter(b)
        if all(tok in it for tok in sub):
            best = len(sub)
    return best


def _monotone_matchings(a, b):
    """Every set of token-equal index pairs strictly increasing in both."""
    pairs = [(i, j) for i in range(len(a)) for j in range(len(b)) if a[i] == b[j]]

    def rec(start, last_i, last_j):
        yield []
        for k in range(start, len(pairs)):
            i, j = pairs[k]
            if i > last_i and j > last_j:
                for rest in rec(k + 1, i, j):
                    yield [(i, j)] + rest

    yield from rec(0, -1, -1)


def _run_weight_total(matching, alpha):
    total = 0.0
    run = 0
    prev = None
    for i, j in matching:
        if prev is not None and i == prev[0] + 1 and j == prev[1] + 1:
            run += 1
        else:
            if run:
                total += float(run) ** alpha
            run = 1
        prev = (i, j)
    if run:
        total += float(run) ** alpha
    return total


def wlcs_brute(a, b, alpha):
    """Best run-weighted score over every embedded common subsequence."""
    best = 0.0
    for matching in _monotone_matchings(a, b):
        best = max(best, _run_weight_total(matching, alpha))
    return best


# ---------------------------------------------------------------------------
# n-gram precision metrics
# ---------------------------------------------------------------------------


def jaccard_brute(pred, ref):
    ps, rs = set(pred), set(ref)
    if not ps and not rs:
        return 1.0
    if not ps or not rs:
        return 0.0
    inter = sum(1 for t in ps if t in rs)
    union = len(ps) + len(rs) - inter
    return inter / union


def clipped_ngram_precision(pred, ref, n):
    """Walk the prediction n-grams, crediting each until the reference count
    for that gram is used up."""
    pred_grams = [tuple(pred[i : i + n]) for i in range(len(pred) - n + 1)]
    if not pred_grams:
        return 0.0
    ref_counts = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
    used: Counter = Counter()
    hits = 0
    for gram in pred_grams:
        if used[gram] < ref_counts.get(gram, 0):
            hits += 1
            used[gram] += 1
    return hits / len(pred_grams)


def bleu_composite_brute(pred, ref, weights=(0.25, 0.25, 0.25, 0.25),
                         smoothing="none", brevity=True):
    if brevity:
        if len(pred) == 0:
            bp = 0.0
        elif len(pred) > len(ref):
            bp = 1.0
        else:
            bp = math.exp(1.0 - len(ref) / len(pred))
    else:
        bp = 1.0
    acc = 0.0
    for idx, w in enumerate(weights):
        if w == 0:
            continue
        p = clipped_ngram_precision(pred, ref, idx + 1)
        if p == 0.0:
            if smoothing == "none":
                return 0.0
            p = 1e-7
        acc += w * math.log(p)
    return bp * math.exp(acc)


def _fbeta(recall, precision, beta):
    denom = recall + beta * beta * precision
    if denom <= 0:
        return 0.0
    return (1 + beta * beta) * recall * precision / denom


def rouge_l_brute(pred, ref, beta=1.0):
    if not pred or not ref:
        return 0.0
    lcs = lcs_brute(pred, ref)
    return _fbeta(lcs / len(ref), lcs / len(pred), beta)


def rouge_w_brute(pred, ref, alpha=1.2, beta=1.0):
    if not pred or not ref:
        return 0.0
    wl = wlcs_brute(pred, ref, alpha)
    recall = (wl / len(ref) ** alpha) ** (1 / alpha)
    precision = (wl / len(pred) ** alpha) ** (1 / alpha)
    return _fbeta(recall, precision, beta)


# ---------------------------------------------------------------------------
# staged alignment scoring
# ---------------------------------------------------------------------------


def _max_matching_size(left, candidates):
    """Kuhn's augmenting-path maximum bipartite matching size."""
    match_right = {}

    def try_assign(i, visited):
        for j in candidates[i]:
            if j in visited:
                continue
            visited.add(j)
            if j not in match_right or try_assign(match_right[j], visited):
                match_right[j] = i
                return True
        return False

    size = 0
    for i in left:
        if try_assign(i, set()):
            size += 1
    return size


def _matchings_of_max_size(free_pred, free_ref, related):
    """All maximum-cardinality matchings between the free index sets."""
    left = sorted(free_pred)
    right = sorted(free_ref)
    candidates = {i: [j for j in right if related(i, j)] for i in left}
    target = _max_matching_size(left, candidates)
    found = []

    def rec(k, used, acc):
        if len(acc) + (len(left) - k) < target:
            return
        if k == len(left):
            if len(acc) == target:
                found.append(list(acc))
            return
        rec(k + 1, used, acc)
        i = left[k]
        for j in candidates[i]:
            if j not in used:
                used.add(j)
                acc.append((i, j))
                rec(k + 1, used, acc)
                acc.pop()
                used.discard(j)
    rec(0, set(), [])
    return found


def chunk_count_brute(pairs):
    if not pairs:
        return 0
    ordered = sorted(pairs)
    chunks = 1
    for (pi, pj), (ci, cj) in zip(ordered, ordered[1:]):
        if (ci, cj) != (pi + 1, pj + 1):
            chunks += 1
    return chunks


def meteor_brute(pred, ref, alpha_f=0.9, gamma=0.5, beta_m=3.0, synonyms=None):
    """Best staged alignment by exhaustive search.

    Each stage contributes some maximum-cardinality matching over the tokens
    earlier stages left free; over all such stage choices the alignment with
    the most total matches and, among those, the fewest chunks wins.
    Returns (score, matches, chunks).
    """
    pred_stems = [stem(t) for t in pred]
    ref_stems = [stem(t) for t in ref]

    relations = [
        lambda i, j: pred[i] == ref[j],
        lambda i, j: pred_stems[i] == ref_stems[j],
    ]
    if synonyms is not None:
        relations.append(lambda i, j: synonyms.are_synonyms(pred[i], ref[j]))

    best = {"key": None, "pairs": None}

    def run(stage, free_p, free_r, acc):
        if stage == len(relations):
            m = len(acc)
            ch = chunk_count_brute(acc)
            key = (m, -ch)
            if best["key"] is None or key > best["key"]:
                best["key"] = key
                best["pairs"] = list(acc)
            return
        for matching in _matchings_of_max_size(free_p, free_r, relations[stage]):
            taken_p = {i for i, _ in matching}
            taken_r = {j for _, j in matching}
            run(
                stage + 1,
                free_p - taken_p,
                free_r - taken_r,
                acc + matching,
            )

    run(0, set(range(len(pred))), set(range(len(ref))), [])

    pairs = best["pairs"] or []
    m = len(pairs)
    if m == 0 or not pred or not ref:
        return 0.0, 0, 0
    precision = m / len(pred)
    recall = m / len(ref)
    fmean = precision * recall / (alpha_f * precision + (1 - alpha_f) * recall)
    chunks = chunk_count_brute(pairs)
    penalty = gamma * (chunks / m) ** beta_m
    return fmean * (1.0 - penalty), m, chunks


# ---------------------------------------------------------------------------
# rank statistics
# ---------------------------------------------------------------------------


def ranks_brute(values):
    """Average rank by counting: 1 + #smaller + (#equal - 1) / 2."""
    out = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        out.append(less + (equal + 1) / 2.0)
    return out


def spearman_brute(x, y):
    rx, ry = ranks_brute(x), ranks_brute(y)
    n = len(x)
    mx = sum(rx) / n
    my = sum(ry) / n
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    dx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    dy = math.sqrt(sum((b - my) ** 2 for b in ry))
    return num / (dx * dy)


def kendall_brute(x, y):
    n = len(x)
    concordant = discordant = tied_x = tied_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            if x[i] == x[j]:
                tied_x += 1
            if y[i] == y[j]:
                tied_y += 1
            if x[i] == x[j] or y[i] == y[j]:
                continue
            agree = (x[i] < x[j]) == (y[i] < y[j])
            if agree:
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) // 2
    return (concordant - discordant) / math.sqrt((n0 - tied_x) * (n0 - tied_y))


def u_statistic_brute(g1, g2):
    u = 0.0
    for a in g1:
        for b in g2:
            if a > b:
                u += 1.0
            elif a == b:
                u += 0.5
    return u


def mann_whitney_exact_brute(g1, g2):
    """Two-sided p over every way of labeling the pooled values."""
    pooled = list(g1) + list(g2)
    n = len(pooled)
    n1 = len(g1)
    mu = n1 * (n - n1) / 2.0
    observed = u_statistic_brute(g1, g2)
    deviation = abs(observed - mu)
    extreme = total = 0
    for combo in itertools.combinations(range(n), n1):
        chosen = set(combo)
        a = [pooled[i] for i in combo]
        b = [pooled[i] for i in range(n) if i not in chosen]
        if abs(u_statistic_brute(a, b) - mu) >= deviation - 1e-12:
            extreme += 1
        total += 1
    return extreme / total


# ---------------------------------------------------------------------------
# shared randomized fixture pairs for the oracle comparison suite
# ---------------------------------------------------------------------------

_BASE_VOCAB = (
    "load", "data", "file", "user", "list", "name", "index", "value",
    "node", "query", "path", "code", "map", "tree",
)
_MORPH_VOCAB = (
    "loads", "loading", "loaded", "files", "naming", "queries", "running",
    "run", "values", "indexed",
)
_SYN_WORDS = ("fetch", "retrieve", "delete", "remove", "start", "begin")

SYNONYM_GROUPS = (("fetch", "retrieve"), ("delete", "remove"), ("start", "begin"))


def fixture_pairs(seed, count=50, max_len=8):
    """Deterministic overlapping token pairs exercising every match stage."""
    import random

    rng = random.Random(seed)
    pool = list(_BASE_VOCAB + _MORPH_VOCAB + _SYN_WORDS)
    pairs = []
    for _ in range(count):
        ref_len = rng.randint(1, max_len)
        ref = [rng.choice(pool) for _ in range(ref_len)]
        pred = []
        for tok in ref:
            roll = rng.random()
            if roll < 0.55:
                pred.append(tok)  # keep
            elif roll < 0.75:
                pred.append(rng.choice(pool))  # replace
            # else drop
        while not pred or (len(pred) < max_len and rng.random() < 0.2):
            pred.append(rng.choice(pool))
        if rng.random() < 0.25:
            rng.shuffle(pred)
        pairs.append((pred[:max_len], ref))
    return pairs
