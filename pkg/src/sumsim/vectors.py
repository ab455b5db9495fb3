"""Embedding-based similarity: stores, tf-idf, cosine/Euclidean, token-match F1."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError
from .text import TokenSequence

TEXT_ROLES = ("prediction", "reference")
EMBEDDING_KINDS = ("sentence", "tokens")


@dataclass(frozen=True)
class EmbeddingRecord:
    """One stored embedding: a sentence vector or a per-token matrix."""

    item_id: str
    text_role: str
    model: str
    kind: str
    vector: np.ndarray | None = None
    tokens: tuple[str, ...] | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.text_role not in TEXT_ROLES:
            raise ValueError(f"text_role must be one of {TEXT_ROLES}, got {self.text_role!r}")
        if self.kind == "sentence":
            if self.vector is None or self.matrix is not None:
                raise ValueError("sentence records carry a vector and no matrix")
            if not np.all(np.isfinite(self.vector)):
                raise ValueError("vector components must be finite")
        elif self.kind == "tokens":
            if self.matrix is None or self.tokens is None or self.vector is not None:
                raise ValueError("token records carry tokens plus a matrix and no vector")
            if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.tokens):
                raise ValueError("matrix must have one row per token")
            if not np.all(np.isfinite(self.matrix)):
                raise ValueError("matrix components must be finite")
        else:
            raise ValueError(f"kind must be one of {EMBEDDING_KINDS}, got {self.kind!r}")

    @property
    def dimension(self) -> int:
        if self.kind == "sentence":
            return int(self.vector.shape[0])
        return int(self.matrix.shape[1])


class EmbeddingStore:
    """Embeddings for one model, keyed by (item_id, text_role).

    The dimension is pinned by the first record added; later records must
    agree with it and with the store's model name.
    """

    def __init__(self, model: str | None = None):
        self.model = model
        self.dimension: int | None = None
        self.records: dict[tuple[str, str], EmbeddingRecord] = {}

    def add(self, record: EmbeddingRecord, *, path=None, line_no=None) -> None:
        if self.model is None:
            self.model = record.model
        elif record.model != self.model:
            raise DataFormatError(
                f"mixed models in one store: {record.model!r} vs {self.model!r}",
                path=path, line_no=line_no,
            )
        if self.dimension is None:
            self.dimension = record.dimension
        elif record.dimension != self.dimension:
            raise DataFormatError(
                f"dimension mismatch: expected {self.dimension}, got {record.dimension}",
                path=path, line_no=line_no,
            )
        key = (record.item_id, record.text_role)
        if key in self.records:
            raise DataFormatError(
                f"duplicate embedding for item {record.item_id!r} role {record.text_role!r}",
                path=path, line_no=line_no,
            )
        self.records[key] = record

    def get(self, item_id: str, text_role: str) -> EmbeddingRecord | None:
        return self.records.get((item_id, text_role))

    def __len__(self) -> int:
        return len(self.records)


def _parse_number_list(raw, path, line_no, what):
    if not isinstance(raw, list) or not raw:
        raise DataFormatError(f"{what} must be a non-empty array", path=path, line_no=line_no)
    out = []
    for v in raw:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise DataFormatError(f"{what} holds a non-finite or non-numeric value", path=path, line_no=line_no)
        out.append(float(v))
    return out


def load_embeddings(path) -> EmbeddingStore:
    """Read one-JSON-object-per-line embeddings; errors name the bad line."""
    store = EmbeddingStore()
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
            role = obj.get("role")
            model = obj.get("model")
            kind = obj.get("kind")
            if not isinstance(item_id, str) or not item_id:
                raise DataFormatError("missing or empty 'id'", path=path, line_no=line_no)
            if role not in TEXT_ROLES:
                raise DataFormatError(f"'role' must be one of {TEXT_ROLES}", path=path, line_no=line_no)
            if not isinstance(model, str) or not model:
                raise DataFormatError("missing or empty 'model'", path=path, line_no=line_no)
            if kind not in EMBEDDING_KINDS:
                raise DataFormatError(f"'kind' must be one of {EMBEDDING_KINDS}", path=path, line_no=line_no)

            try:
                if kind == "sentence":
                    if "matrix" in obj or "tokens" in obj:
                        raise DataFormatError("sentence records must not carry tokens/matrix", path=path, line_no=line_no)
                    vec = _parse_number_list(obj.get("vector"), path, line_no, "'vector'")
                    record = EmbeddingRecord(item_id, role, model, kind, vector=np.asarray(vec))
                else:
                    if "vector" in obj:
                        raise DataFormatError("token records must not carry 'vector'", path=path, line_no=line_no)
                    tokens = obj.get("tokens")
                    if not isinstance(tokens, list) or not tokens or not all(isinstance(t, str) and t for t in tokens):
                        raise DataFormatError("'tokens' must be a non-empty array of strings", path=path, line_no=line_no)
                    rows_raw = obj.get("matrix")
                    if not isinstance(rows_raw, list) or len(rows_raw) != len(tokens):
                        raise DataFormatError("'matrix' must have one row per token", path=path, line_no=line_no)
                    rows = [_parse_number_list(r, path, line_no, "'matrix' row") for r in rows_raw]
                    width = len(rows[0])
                    if any(len(r) != width for r in rows):
                        raise DataFormatError("'matrix' rows differ in width", path=path, line_no=line_no)
                    record = EmbeddingRecord(
                        item_id, role, model, kind, tokens=tuple(tokens), matrix=np.asarray(rows)
                    )
            except ValueError as exc:
                raise DataFormatError(str(exc), path=path, line_no=line_no) from exc
            store.add(record, path=path, line_no=line_no)
    return store


def _as_vector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr


def cosine_similarity(x, y) -> float:
    """Inner product of the normalized vectors; 0.0 when either norm is zero."""
    xv, yv = _as_vector(x), _as_vector(y)
    if xv.shape != yv.shape:
        raise ValueError(f"dimension mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    nx = float(np.linalg.norm(xv))
    ny = float(np.linalg.norm(yv))
    if nx == 0.0 or ny == 0.0:
        return 0.0
    # norms of subnormal components round badly enough to push the ratio
    # past +-1, so pin the result to the mathematical range
    return max(-1.0, min(1.0, float(np.dot(xv, yv) / (nx * ny))))


def is_zero_vector(x) -> bool:
    """True when the vector has zero norm (cosine against it is degenerate)."""
    return float(np.linalg.norm(_as_vector(x))) == 0.0


def euclidean_distance(x, y) -> float:
    """Plain L2 distance; larger means less similar."""
    xv, yv = _as_vector(x), _as_vector(y)
    if xv.shape != yv.shape:
        raise ValueError(f"dimension mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    return float(np.linalg.norm(xv - yv))


@dataclass(frozen=True)
class BertScoreResult:
    recall: float
    precision: float
    f1: float


def bertscore_f1(pred_record: EmbeddingRecord, ref_record: EmbeddingRecord) -> BertScoreResult:
    """Greedy token matching on normalized contextual vectors.

    Each reference token is credited with its best-matching prediction token
    (recall) and vice versa (precision); both sides use plain cosine via
    row-normalized matrices.
    """
    for rec, label in ((pred_record, "prediction"), (ref_record, "reference")):
        if rec.kind != "tokens":
            raise ValueError(f"{label} record must be token-kind, got {rec.kind!r}")
        if rec.matrix.shape[0] < 1:
            raise ValueError(f"{label} record has no token rows")
    if pred_record.dimension != ref_record.dimension:
        raise ValueError(
            f"dimension mismatch: {pred_record.dimension} vs {ref_record.dimension}"
        )

    def normalize_rows(mat):
        norms = np.linalg.norm(mat, axis=1, keepdims=True)
        safe = np.where(norms == 0.0, 1.0, norms)
        return mat / safe

    pred = normalize_rows(np.asarray(pred_record.matrix, dtype=float))
    ref = normalize_rows(np.asarray(ref_record.matrix, dtype=float))
    sim = ref @ pred.T  # sim[i, j]: ref token i vs pred token j
    recall = float(np.mean(np.max(sim, axis=1)))
    precision = float(np.mean(np.max(sim, axis=0)))
    denom = precision + recall
    f1 = 2.0 * precision * recall / denom if denom > 0 else 0.0
    return BertScoreResult(recall, precision, f1)


@dataclass(frozen=True)
class TfIdfModel:
    """Vocabulary with smoothed idf weights fit on a tokenized corpus."""

    vocabulary: tuple[str, ...]
    document_count: int
    document_frequency: dict
    idf: dict


def tfidf_fit(corpus) -> TfIdfModel:
    """Fit idf = ln((1 + N) / (1 + df)) + 1 over the corpus documents."""
    docs = list(corpus)
    if not docs:
        raise ValueError("tf-idf requires a non-empty corpus")
    df: Counter = Counter()
    for doc in docs:
        df.update(set(doc.tokens))
    n_docs = len(docs)
    vocab = tuple(sorted(df))
    idf = {t: math.log((1.0 + n_docs) / (1.0 + df[t])) + 1.0 for t in vocab}
    return TfIdfModel(vocab, n_docs, dict(df), idf)


def tfidf_vector(model: TfIdfModel, seq: TokenSequence) -> np.ndarray:
    """Dense raw-count-times-idf vector over the model vocabulary (no norm)."""
    counts = Counter(seq.tokens)
    return np.asarray(
        [counts.get(term, 0) * model.idf[term] for term in model.vocabulary], dtype=float
    )


# ---------------------------------------------------------------------------
# Deterministic test embedder.
#
# Each token maps to a pseudo-random unit vector derived from a 32-bit FNV-1a
# hash of (4-byte little-endian seed || UTF-8 token), expanded with the
# mulberry32 mixer into dim uniforms in [0, 1), shifted to [-1, 1), and
# L2-normalized.  A sequence embeds as the sum of its token vectors taken in
# sorted token order, which makes the result a pure function of the token
# bag: permutations produce bit-identical output.
# ---------------------------------------------------------------------------

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193
_U32 = 0xFFFFFFFF


def _fnv1a32(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _U32
    return h


def _mulberry32_step(state: int) -> tuple[int, float]:
    state = (state + 0x6D2B79F5) & _U32
    t = state
    t = ((t ^ (t >> 15)) * (t | 1)) & _U32
    t ^= (t + (((t ^ (t >> 7)) * (t | 61)) & _U32)) & _U32
    out = (t ^ (t >> 14)) & _U32
    return state, out / 4294967296.0


def _token_unit_vector(token: str, dim: int, seed: int) -> list[float]:
    state = _fnv1a32((seed & _U32).to_bytes(4, "little") + token.encode("utf-8"))
    comps = []
    for _ in range(dim):
        state, u = _mulberry32_step(state)
        comps.append(2.0 * u - 1.0)
    norm_sq = 0.0
    for c in comps:
        norm_sq += c * c
    if norm_sq == 0.0:
        comps[0] = 1.0
        norm_sq = 1.0
    norm = math.sqrt(norm_sq)
    return [c / norm for c in comps]


def det_embed(seq: TokenSequence, dim: int, seed: int = 0) -> np.ndarray:
    """Seeded hash-based sentence embedding; empty input gives the zero vector."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    total = [0.0] * dim
    for token in sorted(seq.tokens):
        unit = _token_unit_vector(token, dim, seed)
        for k in range(dim):
            total[k] += unit[k]
    return np.asarray(total)


def det_token_vectors(seq: TokenSequence, dim: int, seed: int = 0) -> np.ndarray:
    """Per-token unit vectors (original order); companion to det_embed for
    exercising token-kind records without a real encoder."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    return np.asarray([_token_unit_vector(t, dim, seed) for t in seq.tokens])
