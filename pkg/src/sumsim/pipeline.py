"""Command implementations behind the CLI: score, ratings, correlate, cross.

Each command reads its inputs, writes fixed-order output files into the
configured directory, and returns the computed objects for callers that
drive the pipeline from Python.  Per-item scoring failures are recorded in
an error sidecar and skipped; configuration problems abort the run.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from . import dataio, report as report_mod
from .config import RunConfig, parse_metric_name
from .errors import ConfigError
from .overlap import (
    MeteorParams,
    MetricScore,
    Orientation,
    SynonymLexicon,
    bleu_composite,
    bleu_n,
    jaccard,
    meteor,
    rouge_l,
    rouge_w,
)
from .ratings import (
    CRITERIA,
    agreement_histogram,
    aggregate,
    descriptive_stats,
    load_ratings,
    normalize_all,
)
from .text import normalize_tokenize
from .vectors import (
    bertscore_f1,
    cosine_similarity,
    euclidean_distance,
    is_zero_vector,
    load_embeddings,
    tfidf_fit,
    tfidf_vector,
)


@dataclass
class ScoreRun:
    scores: list
    errors: list  # (item_id, metric, message, is_warning)
    paths: dict


@dataclass
class RatingsRun:
    aggregates: dict  # criterion -> list[AggregateRating]
    stats: dict  # criterion -> DescriptiveStats
    histograms: dict  # label -> {diff: fraction}
    paths: dict


def _ensure_out_dir(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_stores(config: RunConfig) -> dict:
    stores = {}
    for path in config.embeddings_paths:
        store = load_embeddings(path)
        if store.model is None:
            continue  # empty file contributes nothing
        if store.model in stores:
            raise ConfigError(f"model {store.model!r} appears in more than one embeddings file")
        stores[store.model] = store
    return stores


def _tfidf_corpus(config: RunConfig, pairs):
    if config.tfidf_corpus_path is not None:
        docs = []
        text = Path(config.tfidf_corpus_path).read_text(encoding="utf-8")
        for line in text.splitlines():
            if line.strip():
                docs.append(normalize_tokenize(line, config.tokenizer))
        if not docs:
            raise ConfigError(f"tf-idf corpus {config.tfidf_corpus_path} has no documents")
        return docs
    docs = []
    for pair in pairs:
        docs.append(pair.prediction)
        docs.append(pair.reference)
    return docs


def _need_tfidf(config: RunConfig) -> bool:
    return any(parse_metric_name(m)[0] in ("tfidf-cosine", "tfidf-euclid") for m in config.metrics)


def _sentence_vector(store, item_id, role):
    record = store.get(item_id, role)
    if record is None:
        raise LookupError(f"no {role} embedding for item {item_id!r} in model {store.model!r}")
    if record.kind != "sentence":
        raise LookupError(f"{role} embedding for item {item_id!r} is not sentence-kind")
    return record.vector


def _token_record(store, item_id, role):
    record = store.get(item_id, role)
    if record is None:
        raise LookupError(f"no {role} embedding for item {item_id!r} in model {store.model!r}")
    if record.kind != "tokens":
        raise LookupError(f"{role} embedding for item {item_id!r} is not token-kind")
    return record


def score_pairs(pairs, config: RunConfig, stores=None, synonyms=None, tfidf_model=None):
    """Score every pair with every enabled metric.

    Returns (scores, errors); errors carry per-item failures and degeneracy
    warnings without aborting the batch.
    """
    stores = stores or {}
    scores = []
    errors = []
    meteor_params = MeteorParams(config.meteor_alpha, config.meteor_gamma, config.meteor_beta)

    for name in config.metrics:
        family, model = parse_metric_name(name)
        if model is not None and model not in stores:
            raise ConfigError(
                f"metric {name!r} needs embeddings for model {model!r}; "
                f"loaded models: {sorted(stores) or 'none'}"
            )

    for pair in sorted(pairs, key=lambda p: p.item_id):
        for name in config.metrics:
            family, model = parse_metric_name(name)
            try:
                if family == "jaccard":
                    scores.append(jaccard(pair))
                elif family == "bleu1":
                    scores.append(bleu_n(pair, 1))
                elif family == "bleu":
                    scores.append(
                        bleu_composite(
                            pair,
                            weights=config.bleu_weights,
                            smoothing=config.bleu_smoothing,
                            use_brevity_penalty=config.brevity_penalty,
                        )
                    )
                elif family == "rouge-l":
                    res = rouge_l(pair, beta=config.rouge_beta)
                    scores.append(MetricScore("rouge-l", pair.item_id, res.f))
                elif family == "rouge-w":
                    res = rouge_w(pair, alpha=config.rouge_w_alpha, beta=config.rouge_beta)
                    scores.append(MetricScore("rouge-w", pair.item_id, res.f))
                elif family == "meteor":
                    res = meteor(pair, params=meteor_params, synonyms=synonyms)
                    scores.append(MetricScore("meteor", pair.item_id, res.score))
                elif family in ("tfidf-cosine", "tfidf-euclid"):
                    pv = tfidf_vector(tfidf_model, pair.prediction)
                    rv = tfidf_vector(tfidf_model, pair.reference)
                    if family == "tfidf-cosine":
                        if is_zero_vector(pv) or is_zero_vector(rv):
                            errors.append(
                                (pair.item_id, name, "zero-norm tf-idf vector; cosine recorded as 0.0", True)
                            )
                        scores.append(MetricScore(name, pair.item_id, cosine_similarity(pv, rv)))
                    else:
                        scores.append(
                            MetricScore(name, pair.item_id, euclidean_distance(pv, rv), Orientation.LOWER)
                        )
                elif family == "emb-cosine":
                    store = stores[model]
                    pv = _sentence_vector(store, pair.item_id, "prediction")
                    rv = _sentence_vector(store, pair.item_id, "reference")
                    if is_zero_vector(pv) or is_zero_vector(rv):
                        errors.append(
                            (pair.item_id, name, "zero-norm embedding; cosine recorded as 0.0", True)
                        )
                    scores.append(MetricScore(name, pair.item_id, cosine_similarity(pv, rv)))
                elif family == "emb-euclid":
                    store = stores[model]
                    pv = _sentence_vector(store, pair.item_id, "prediction")
                    rv = _sentence_vector(store, pair.item_id, "reference")
                    scores.append(
                        MetricScore(name, pair.item_id, euclidean_distance(pv, rv), Orientation.LOWER)
                    )
                elif family == "bertscore":
                    store = stores[model]
                    pred_rec = _token_record(store, pair.item_id, "prediction")
                    ref_rec = _token_record(store, pair.item_id, "reference")
                    scores.append(MetricScore(name, pair.item_id, bertscore_f1(pred_rec, ref_rec).f1))
                else:  # pragma: no cover - parse_metric_name already rejects
                    raise ConfigError(f"unhandled metric {name!r}")
            except (LookupError, ValueError) as exc:
                errors.append((pair.item_id, name, str(exc), False))
    return scores, errors


def cmd_score(config: RunConfig) -> ScoreRun:
    config.validate()
    if config.pairs_path is None:
        raise ConfigError("score requires --pairs")
    out = _ensure_out_dir(config)
    pairs = dataio.load_pairs(config.pairs_path, config.tokenizer)
    stores = _load_stores(config)
    synonyms = SynonymLexicon.load(config.synonyms_path) if config.synonyms_path else None
    tfidf_model = tfidf_fit(_tfidf_corpus(config, pairs)) if (_need_tfidf(config) and pairs) else None

    scores, errors = score_pairs(pairs, config, stores, synonyms, tfidf_model)
    paths = {
        "scores": out / "scores.jsonl",
        "summary": out / "score_summary.csv",
        "errors": out / "score_errors.jsonl",
    }
    dataio.write_scores_jsonl(paths["scores"], scores)
    dataio.write_score_summary(paths["summary"], scores)
    dataio.write_error_sidecar(paths["errors"], errors)
    return ScoreRun(scores=scores, errors=errors, paths=paths)


def cmd_ratings(config: RunConfig) -> RatingsRun:
    config.validate()
    if config.ratings_path is None:
        raise ConfigError("ratings requires --ratings")
    out = _ensure_out_dir(config)
    records = normalize_all(load_ratings(config.ratings_path), config.inverted_criteria)

    aggregates = {}
    stats = {}
    histograms = {"all": agreement_histogram(records)}
    for criterion in CRITERIA:
        crit_records = [r for r in records if r.criterion == criterion]
        if not crit_records:
            continue
        aggregates[criterion] = aggregate(crit_records, criterion)
        stats[criterion] = descriptive_stats([r.answer for r in crit_records])
        histograms[criterion] = agreement_histogram(crit_records)

    paths = {
        "aggregates": out / "aggregates.csv",
        "stats": out / "rating_stats.csv",
        "histogram": out / "agreement_histogram.csv",
    }
    all_aggs = [a for criterion in sorted(aggregates) for a in aggregates[criterion]]
    dataio.write_aggregates_csv(paths["aggregates"], all_aggs)
    _write_rating_stats(paths["stats"], stats)
    _write_histograms(paths["histogram"], histograms)
    return RatingsRun(aggregates=aggregates, stats=stats, histograms=histograms, paths=paths)


def _write_rating_stats(path, stats_by_criterion) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["criterion", "mean", "geometric_mean", "harmonic_mean",
             "median", "stddev", "cv", "variance"]
        )
        for criterion in sorted(stats_by_criterion):
            s = stats_by_criterion[criterion]
            writer.writerow(
                [criterion, repr(s.mean), repr(s.geometric_mean), repr(s.harmonic_mean),
                 repr(s.median), repr(s.stddev), repr(s.cv), repr(s.variance)]
            )


def _write_histograms(path, histograms) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["criterion", "abs_difference", "fraction"])
        for label in sorted(histograms):
            hist = histograms[label]
            for diff in sorted(hist):
                writer.writerow([label, diff, repr(hist[diff])])


def _group_scores_by_metric(scores) -> dict:
    grouped: dict[str, list] = {}
    for s in scores:
        grouped.setdefault(s.metric_name, []).append(s)
    return grouped


def _group_aggregates_by_criterion(aggregates) -> dict:
    grouped: dict[str, list] = {}
    for a in aggregates:
        grouped.setdefault(a.criterion, []).append(a)
    return grouped


def cmd_correlate(score_path, aggregates_path, config: RunConfig):
    config.validate()
    out = _ensure_out_dir(config)
    scores = dataio.load_scores_jsonl(score_path)
    aggregates = dataio.load_aggregates_csv(aggregates_path)
    by_metric = _group_scores_by_metric(scores)
    by_criterion = _group_aggregates_by_criterion(aggregates)
    metric_order = sorted(by_metric)

    rep = report_mod.build_correlation_report(
        by_metric,
        by_criterion,
        metric_order,
        config_label=config.label(),
        group_low=config.group_low,
        group_high=config.group_high,
    )
    paths = {
        "csv": out / "correlation_report.csv",
        "utest": out / "utest_details.csv",
        "table": out / "correlation_report.txt",
    }
    report_mod.write_correlation_csv(rep, paths["csv"])
    report_mod.write_utest_csv(rep, paths["utest"])
    Path(paths["table"]).write_text(report_mod.render_correlation_report(rep), encoding="utf-8")
    return rep, paths


def cmd_cross(score_path, aggregates_path, config: RunConfig):
    config.validate()
    out = _ensure_out_dir(config)
    scores = dataio.load_scores_jsonl(score_path)
    aggregates = dataio.load_aggregates_csv(aggregates_path)

    series = {}
    labels = []
    for metric in sorted(_group_scores_by_metric(scores)):
        metric_scores = [s for s in scores if s.metric_name == metric]
        sign = -1.0 if metric_scores[0].orientation == Orientation.LOWER else 1.0
        series[metric] = {s.item_id: sign * s.value for s in metric_scores}
        labels.append(metric)
    by_criterion = _group_aggregates_by_criterion(aggregates)
    for criterion in CRITERIA:
        aggs = by_criterion.get(criterion)
        if not aggs:
            continue
        label = f"rating:{criterion}"
        series[label] = {a.item_id: 5.0 - a.mean for a in aggs}
        labels.append(label)

    matrices = report_mod.build_cross_matrices(series, labels)
    paths = {
        "spearman": out / "cross_spearman.csv",
        "kendall": out / "cross_kendall.csv",
        "table": out / "cross_matrices.txt",
    }
    report_mod.write_matrix_csv(matrices.labels, matrices.spearman, paths["spearman"])
    report_mod.write_matrix_csv(matrices.labels, matrices.kendall, paths["kendall"])
    text = report_mod.render_matrix(
        "Cross Spearman rho (oriented scores and rating agreement)",
        matrices.labels, matrices.spearman,
    ) + "\n" + report_mod.render_matrix(
        "Cross Kendall tau-b (oriented scores and rating agreement)",
        matrices.labels, matrices.kendall,
    )
    Path(paths["table"]).write_text(text, encoding="utf-8")
    return matrices, paths


def cmd_report(config: RunConfig) -> dict:
    """Full pipeline: score, aggregate ratings, correlate, cross-correlate."""
    score_run = cmd_score(config)
    ratings_run = cmd_ratings(config)
    rep, corr_paths = cmd_correlate(score_run.paths["scores"], ratings_run.paths["aggregates"], config)
    matrices, cross_paths = cmd_cross(score_run.paths["scores"], ratings_run.paths["aggregates"], config)
    paths = dict(score_run.paths)
    paths.update(ratings_run.paths)
    paths.update({f"correlate_{k}": v for k, v in corr_paths.items()})
    paths.update({f"cross_{k}": v for k, v in cross_paths.items()})
    return {
        "score": score_run,
        "ratings": ratings_run,
        "report": rep,
        "cross": matrices,
        "paths": paths,
    }
