"""Export jobs: read pairs, run an encoder, write embedding JSONL.

Records go out in input order, prediction before reference, one record per
(item, role), so reruns of the same job produce identical files.  Texts the
encoder cannot handle become rows in a ".errors" sidecar instead of aborting
the run; they never reach the main output, which therefore always satisfies
the embedding store contract of the scoring package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .adapters import POOLINGS, UnencodableText, resolve
from .errors import ExporterError, PairFormatError

KINDS = ("sentence", "tokens")
ROLES = ("prediction", "reference")

# Serialized float precision for model encoders.  Six significant digits keep
# files compact at roughly 1e-6 relative error, far below cosine-score noise;
# fixtures override this with full shortest-round-trip precision.
DEFAULT_SIG_DIGITS = 6


@dataclass(frozen=True)
class ExportJob:
    """One export run: which pairs, which model, what record shape."""

    pairs_path: str
    model: str
    out_path: str
    kind: str = "sentence"
    pooling: str = "model_default"
    batch_size: int = 32

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ExporterError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.pooling not in POOLINGS:
            raise ExporterError(f"pooling must be one of {POOLINGS}, got {self.pooling!r}")
        if self.batch_size < 1:
            raise ExporterError(f"batch size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class SkippedText:
    """One (item, role) the encoder could not embed."""

    item_id: str
    role: str
    reason: str


@dataclass(frozen=True)
class ExportResult:
    """What a run produced and where the files landed."""

    out_path: str
    errors_path: str
    records_written: int
    skipped: tuple[SkippedText, ...] = ()


def read_pairs(path) -> list[tuple[str, str, str]]:
    """Read {"id", "prediction", "reference"} JSONL rows in file order."""
    rows = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise PairFormatError(f"invalid JSON: {exc.msg}", path=path, line_no=line_no) from exc
            if not isinstance(obj, dict):
                raise PairFormatError("record must be a JSON object", path=path, line_no=line_no)
            item_id = obj.get("id")
            if not isinstance(item_id, str) or not item_id:
                raise PairFormatError("missing or empty 'id'", path=path, line_no=line_no)
            if item_id in seen:
                # duplicate ids would collide in the output store
                raise PairFormatError(f"duplicate item id {item_id!r}", path=path, line_no=line_no)
            prediction = obj.get("prediction")
            reference = obj.get("reference")
            if not isinstance(prediction, str) or not isinstance(reference, str):
                raise PairFormatError(
                    "'prediction' and 'reference' must be strings", path=path, line_no=line_no
                )
            seen.add(item_id)
            rows.append((item_id, prediction, reference))
    return rows


def _round_sig(value: float, digits: int | None) -> float:
    if digits is None:
        return float(value)
    return float(f"{value:.{digits}g}")


def _build_record(item_id, role, model, kind, encoded, digits):
    """Turn one encoding into a JSONL-ready dict, or a skip reason."""
    if isinstance(encoded, UnencodableText):
        return None, encoded.reason
    if kind == "sentence":
        vector = [_round_sig(float(v), digits) for v in encoded]
        if not all(math.isfinite(v) for v in vector):
            return None, "non-finite components in encoding"
        return {"id": item_id, "role": role, "model": model, "kind": kind, "vector": vector}, None
    tokens, rows = encoded
    matrix = [[_round_sig(float(v), digits) for v in row] for row in rows]
    if any(not math.isfinite(v) for row in matrix for v in row):
        return None, "non-finite components in encoding"
    if any(len(row) != len(matrix[0]) for row in matrix):
        return None, "ragged matrix rows in encoding"
    return {
        "id": item_id,
        "role": role,
        "model": model,
        "kind": kind,
        "tokens": list(tokens),
        "matrix": matrix,
    }, None


def _record_dimension(record):
    if record["kind"] == "sentence":
        return len(record["vector"])
    return len(record["matrix"][0]) if record["matrix"] else 0


def export_embeddings(job: ExportJob, digits: int | None = DEFAULT_SIG_DIGITS) -> ExportResult:
    """Run one job, returning counts after writing records plus the sidecar.

    `digits` bounds serialized float precision; pass None to keep the full
    shortest-round-trip representation.
    """
    if digits is not None and digits < 1:
        raise ExporterError(f"significant digits must be >= 1, got {digits}")
    encoder = resolve(job.model)
    if job.kind == "tokens" and not encoder.supports_tokens:
        raise ExporterError(f"model {encoder.model_name!r} does not expose per-token states")
    if job.pooling not in encoder.poolings:
        raise ExporterError(f"model {encoder.model_name!r} does not support pooling {job.pooling!r}")
    pairs = read_pairs(job.pairs_path)

    entries = []
    for item_id, prediction, reference in pairs:
        entries.append((item_id, "prediction", prediction))
        entries.append((item_id, "reference", reference))

    skipped = []
    written = 0
    expected_dim = None
    errors_path = str(job.out_path) + ".errors"
    with open(job.out_path, "w", encoding="utf-8") as out, \
            open(errors_path, "w", encoding="utf-8") as err:
        for start in range(0, len(entries), job.batch_size):
            batch = entries[start:start + job.batch_size]
            texts = [text for _, _, text in batch]
            if job.kind == "sentence":
                encoded = encoder.encode_sentence_batch(texts, pooling=job.pooling)
            else:
                encoded = encoder.encode_token_batch(texts)
            for (item_id, role, _), enc in zip(batch, encoded):
                record, problem = _build_record(item_id, role, encoder.model_name, job.kind, enc, digits)
                if problem is None:
                    dim = _record_dimension(record)
                    if expected_dim is None:
                        expected_dim = dim
                    elif dim != expected_dim:
                        problem = f"dimension mismatch: expected {expected_dim}, got {dim}"
                if problem is not None:
                    skipped.append(SkippedText(item_id, role, problem))
                    err.write(json.dumps({"id": item_id, "role": role, "error": problem},
                                         sort_keys=True) + "\n")
                    continue
                out.write(json.dumps(record, sort_keys=True) + "\n")
                written += 1
    return ExportResult(str(job.out_path), errors_path, written, tuple(skipped))


def export_fixture(pairs_path, out_path, dim: int, seed: int = 0) -> ExportResult:
    """Write full-precision hash sentence vectors for every pair side.

    The significant-digit rounding is deliberately skipped here: fixture
    files exist so independent implementations can be compared at 1e-9 or
    tighter, which only survives shortest-round-trip floats.
    """
    job = ExportJob(pairs_path=str(pairs_path), model=f"hash:{dim}:{seed}", out_path=str(out_path))
    return export_embeddings(job, digits=None)
