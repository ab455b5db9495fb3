"""End-to-end command-line runs against small on-disk fixtures."""

import json

import pytest

from sumsim.cli import main
from sumsim.text import normalize_tokenize
from sumsim.vectors import cosine_similarity, det_embed, det_token_vectors

PAIRS = (
    ("p1", "returns the user id", "returns the user id"),
    ("p2", "open the file", "open the file handle"),
    ("p3", "compute checksum", "compute the checksum of the block"),
    ("p4", "delete rows", "remove all rows from the table"),
)

RATINGS_HEADER = "participant_id,item_id,shown_variant,criterion,answer"


def write_pairs(path, pairs=PAIRS):
    with open(path, "w", encoding="utf-8") as fh:
        for item_id, prediction, reference in pairs:
            fh.write(json.dumps(
                {"id": item_id, "prediction": prediction, "reference": reference}
            ) + "\n")


def write_ratings(path):
    # similarity raw answers climb 1..4; completeness is stated on the
    # inverted scale, so raw 4..1 normalizes to the same 1..4 progression
    rows = [RATINGS_HEADER]
    similarity = {"p1": 1, "p2": 2, "p3": 3, "p4": 4}
    completeness = {"p1": 4, "p2": 3, "p3": 2, "p4": 1}
    for participant in ("a", "b"):
        for item_id in ("p1", "p2", "p3", "p4"):
            rows.append(f"{participant},{item_id},generated,similarity,{similarity[item_id]}")
            rows.append(f"{participant},{item_id},generated,completeness,{completeness[item_id]}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_embeddings(path, pairs=PAIRS, dim=8, seed=3, model="toy", kind="sentence"):
    """One record per (pair, side); a store holds one record per item and role,
    so sentence and token embeddings go in separate files under separate models."""
    with open(path, "w", encoding="utf-8") as fh:
        for item_id, prediction, reference in pairs:
            for role, text in (("prediction", prediction), ("reference", reference)):
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


def read_scores(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


class TestScoreCommand:
    def test_writes_scores_summary_and_empty_sidecar(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.jsonl"
        write_pairs(pairs)
        out = tmp_path / "out"
        rc = main(["score", "--pairs", str(pairs), "--out", str(out),
                   "--metrics", "jaccard,bleu,rouge-l"])
        assert rc == 0
        assert capsys.readouterr().out.startswith("wrote ")
        rows = read_scores(out / "scores.jsonl")
        assert len(rows) == 3 * len(PAIRS)
        assert (out / "score_summary.csv").read_text().splitlines()[0] == "metric,mean,n"
        assert (out / "score_errors.jsonl").read_text() == ""

    def test_identical_pair_scores_one_on_every_metric(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        write_pairs(pairs)
        out = tmp_path / "out"
        assert main(["score", "--pairs", str(pairs), "--out", str(out),
                     "--metrics", "jaccard,bleu,rouge-l,meteor"]) == 0
        p1 = {r["metric"]: r["value"] for r in read_scores(out / "scores.jsonl")
              if r["item_id"] == "p1"}
        for metric in ("jaccard", "bleu", "rouge-l"):
            assert p1[metric] == pytest.approx(1.0, abs=1e-12)
        # meteor keeps its fragmentation penalty even on an exact match:
        # four tokens in one chunk cost 0.5 * (1/4)^3
        assert p1["meteor"] == pytest.approx(1.0 - 0.5 * (1 / 4) ** 3, abs=1e-12)

    def test_reruns_are_byte_identical(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        write_pairs(pairs)
        first = tmp_path / "a"
        second = tmp_path / "b"
        for out in (first, second):
            assert main(["score", "--pairs", str(pairs), "--out", str(out),
                         "--metrics", "jaccard,meteor,tfidf-cosine"]) == 0
        for name in ("scores.jsonl", "score_summary.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_embedding_metrics_read_from_file(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        sent = tmp_path / "sent.jsonl"
        tok = tmp_path / "tok.jsonl"
        write_pairs(pairs)
        write_embeddings(sent, model="toy")
        write_embeddings(tok, model="toytok", kind="tokens")
        out = tmp_path / "out"
        rc = main(["score", "--pairs", str(pairs), "--out", str(out),
                   "--embeddings", str(sent), "--embeddings", str(tok),
                   "--metrics", "emb-cosine:toy,bertscore:toytok"])
        assert rc == 0
        rows = read_scores(out / "scores.jsonl")
        assert len(rows) == 2 * len(PAIRS)
        by_key = {(r["metric"], r["item_id"]): r["value"] for r in rows}
        pred = det_embed(normalize_tokenize("open the file"), 8, 3)
        ref = det_embed(normalize_tokenize("open the file handle"), 8, 3)
        assert by_key[("emb-cosine:toy", "p2")] == pytest.approx(
            cosine_similarity(pred, ref), abs=1e-12
        )
        assert by_key[("bertscore:toytok", "p1")] == pytest.approx(1.0, abs=1e-12)

    def test_missing_embedding_item_lands_in_sidecar(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        emb = tmp_path / "emb.jsonl"
        write_pairs(pairs)
        write_embeddings(emb, pairs=PAIRS[:3])  # p4 has no records
        out = tmp_path / "out"
        rc = main(["score", "--pairs", str(pairs), "--out", str(out),
                   "--embeddings", str(emb), "--metrics", "emb-cosine:toy"])
        assert rc == 0
        assert len(read_scores(out / "scores.jsonl")) == 3
        sidecar = read_scores(out / "score_errors.jsonl")
        assert len(sidecar) == 1
        assert sidecar[0]["item_id"] == "p4"
        assert sidecar[0]["metric"] == "emb-cosine:toy"
        assert sidecar[0]["warning"] is False

    def test_embedding_metric_without_file_is_config_error(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.jsonl"
        write_pairs(pairs)
        rc = main(["score", "--pairs", str(pairs), "--out", str(tmp_path / "out"),
                   "--metrics", "emb-cosine:toy"])
        assert rc == 1
        assert capsys.readouterr().err.startswith("config error:")

    def test_unknown_metric_is_config_error(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.jsonl"
        write_pairs(pairs)
        rc = main(["score", "--pairs", str(pairs), "--metrics", "bogus"])
        assert rc == 1
        assert "config error:" in capsys.readouterr().err

    def test_missing_pairs_flag_is_config_error(self, tmp_path, capsys):
        rc = main(["score", "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "config error:" in capsys.readouterr().err

    def test_malformed_pairs_file_is_data_error(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.jsonl"
        pairs.write_text('{"id": "p1"\n', encoding="utf-8")
        rc = main(["score", "--pairs", str(pairs), "--out", str(tmp_path / "out")])
        assert rc == 2
        assert capsys.readouterr().err.startswith("data error:")

    def test_unknown_flag_is_config_error(self, capsys):
        assert main(["score", "--nope"]) == 1
        assert "config error:" in capsys.readouterr().err


class TestRatingsCommand:
    def test_writes_aggregates_stats_and_histogram(self, tmp_path, capsys):
        ratings = tmp_path / "ratings.csv"
        write_ratings(ratings)
        out = tmp_path / "out"
        rc = main(["ratings", "--ratings", str(ratings), "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out.startswith("wrote ")
        agg_lines = (out / "aggregates.csv").read_text().splitlines()
        assert agg_lines[0] == "item_id,criterion,mean,count"
        assert len(agg_lines) == 1 + 4 * 2
        stats_header = (out / "rating_stats.csv").read_text().splitlines()[0]
        assert stats_header.startswith("criterion,mean,geometric_mean,harmonic_mean")
        assert "all" in (out / "agreement_histogram.csv").read_text()

    def test_default_polarity_flips_completeness(self, tmp_path):
        ratings = tmp_path / "ratings.csv"
        write_ratings(ratings)
        out = tmp_path / "out"
        assert main(["ratings", "--ratings", str(ratings), "--out", str(out)]) == 0
        by_key = {}
        for line in (out / "aggregates.csv").read_text().splitlines()[1:]:
            item_id, criterion, mean, _ = line.split(",")
            by_key[(item_id, criterion)] = float(mean)
        # raw completeness answers ran 4..1 but normalize to 1..4
        assert by_key[("p1", "completeness")] == pytest.approx(1.0)
        assert by_key[("p4", "completeness")] == pytest.approx(4.0)
        assert by_key[("p4", "similarity")] == pytest.approx(4.0)

    def test_invert_flag_replaces_default_set(self, tmp_path):
        ratings = tmp_path / "ratings.csv"
        ratings.write_text(
            RATINGS_HEADER + "\n"
            "a,p1,generated,similarity,1\n"
            "b,p1,generated,similarity,1\n",
            encoding="utf-8",
        )
        plain = tmp_path / "plain"
        flipped = tmp_path / "flipped"
        assert main(["ratings", "--ratings", str(ratings), "--out", str(plain)]) == 0
        assert main(["ratings", "--ratings", str(ratings), "--out", str(flipped),
                     "--invert", "similarity"]) == 0
        assert "p1,similarity,1.0,2" in (plain / "aggregates.csv").read_text()
        assert "p1,similarity,4.0,2" in (flipped / "aggregates.csv").read_text()

    def test_bad_ratings_header_is_data_error(self, tmp_path, capsys):
        ratings = tmp_path / "ratings.csv"
        ratings.write_text("who,what\n", encoding="utf-8")
        rc = main(["ratings", "--ratings", str(ratings), "--out", str(tmp_path / "out")])
        assert rc == 2
        assert capsys.readouterr().err.startswith("data error:")


class TestCorrelateCommand:
    def scored_and_aggregated(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        ratings = tmp_path / "ratings.csv"
        write_pairs(pairs)
        write_ratings(ratings)
        out = tmp_path / "out"
        assert main(["score", "--pairs", str(pairs), "--out", str(out),
                     "--metrics", "jaccard,rouge-l"]) == 0
        assert main(["ratings", "--ratings", str(ratings), "--out", str(out)]) == 0
        return out

    def test_correlate_writes_tables(self, tmp_path, capsys):
        out = self.scored_and_aggregated(tmp_path)
        rc = main(["correlate", "--scores", str(out / "scores.jsonl"),
                   "--aggregates", str(out / "aggregates.csv"), "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out.startswith("wrote ")
        lines = (out / "correlation_report.csv").read_text().splitlines()
        assert lines[0] == "metric,orientation,criterion,status,n,spearman_rho,kendall_tau"
        # jaccard falls exactly as the similarity means rise: perfect rank match
        assert "jaccard,higher_is_more_similar,similarity,ok,4,1.0,1.0" in lines
        utest_lines = (out / "utest_details.csv").read_text().splitlines()
        assert utest_lines[0].startswith("metric,criterion,n_agree,n_disagree")
        assert len(utest_lines) > 1
        text = (out / "correlation_report.txt").read_text()
        assert "# unusable cells: 0" in text
        assert "Spearman rho" in text

    def test_correlate_rerun_is_byte_identical(self, tmp_path):
        out = self.scored_and_aggregated(tmp_path)
        argv = ["correlate", "--scores", str(out / "scores.jsonl"),
                "--aggregates", str(out / "aggregates.csv"), "--out", str(out)]
        assert main(argv) == 0
        first = (out / "correlation_report.csv").read_bytes()
        assert main(argv) == 0
        assert (out / "correlation_report.csv").read_bytes() == first

    def test_missing_required_flag_is_config_error(self, capsys):
        assert main(["correlate", "--scores", "x.jsonl"]) == 1
        assert "config error:" in capsys.readouterr().err


class TestCrossCommand:
    def test_cross_writes_matrices(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        ratings = tmp_path / "ratings.csv"
        write_pairs(pairs)
        write_ratings(ratings)
        out = tmp_path / "out"
        assert main(["score", "--pairs", str(pairs), "--out", str(out),
                     "--metrics", "jaccard,rouge-l"]) == 0
        assert main(["ratings", "--ratings", str(ratings), "--out", str(out)]) == 0
        rc = main(["cross", "--scores", str(out / "scores.jsonl"),
                   "--aggregates", str(out / "aggregates.csv"), "--out", str(out)])
        assert rc == 0
        header = (out / "cross_spearman.csv").read_text().splitlines()[0]
        assert header.startswith("series,jaccard,rouge-l")
        assert "rating:similarity" in header
        first_row = (out / "cross_spearman.csv").read_text().splitlines()[1]
        assert first_row.startswith("jaccard,1.0,")
        assert (out / "cross_kendall.csv").exists()
        assert "Spearman" in (out / "cross_matrices.txt").read_text()


class TestReportCommand:
    def test_full_pipeline_from_config_file(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.jsonl"
        ratings = tmp_path / "ratings.csv"
        write_pairs(pairs)
        write_ratings(ratings)
        out = tmp_path / "out"
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# demo run\n"
            f"pairs = {pairs}\n"
            f"ratings = {ratings}\n"
            "metrics = jaccard,bleu,rouge-l\n"
            f"out = {out}\n",
            encoding="utf-8",
        )
        rc = main(["report", "--config", str(cfg)])
        assert rc == 0
        assert "wrote reports under" in capsys.readouterr().out
        for name in ("scores.jsonl", "aggregates.csv", "correlation_report.txt",
                     "cross_matrices.txt", "agreement_histogram.csv"):
            assert (out / name).exists()

    def test_command_line_overrides_config_file(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        write_pairs(pairs)
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"pairs = {pairs}\nmetrics = jaccard,bleu\n", encoding="utf-8")
        out = tmp_path / "out"
        rc = main(["score", "--config", str(cfg), "--out", str(out),
                   "--metrics", "jaccard"])
        assert rc == 0
        metrics = {r["metric"] for r in read_scores(out / "scores.jsonl")}
        assert metrics == {"jaccard"}

    def test_unknown_config_key_is_config_error(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 1\n", encoding="utf-8")
        assert main(["score", "--config", str(cfg)]) == 1
        assert "config error:" in capsys.readouterr().err
