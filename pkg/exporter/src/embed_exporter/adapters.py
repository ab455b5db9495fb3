"""Encoder adapters, looked up by model id string.

Three families ship by default.  "hash:<dim>:<seed>" needs no third-party
model and exists for fixtures and tests.  "st:<checkpoint>" wraps a
sentence-transformers checkpoint and yields sentence vectors only.
"hf:<checkpoint>" wraps a plain transformers checkpoint and exposes
per-token hidden states.  The heavyweight imports stay inside the classes
that need them, so resolving a hash model never touches torch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ModelResolutionError
from .hashed import sentence_vector, token_matrix, token_unit_vector, tokenize

POOLINGS = ("model_default", "mean")


@dataclass(frozen=True)
class UnencodableText:
    """Per-text failure marker returned in place of an encoding."""

    reason: str


class HashEncoder:
    """Deterministic seeded-hash encoder; supports both record kinds."""

    supports_tokens = True
    poolings = ("model_default", "mean")

    def __init__(self, dim: int, seed: int):
        if dim < 1:
            raise ModelResolutionError(f"hash dimension must be >= 1, got {dim}")
        self.dim = dim
        self.seed = seed
        self.model_name = f"hash:{dim}:{seed}"

    def encode_sentence_batch(self, texts: Sequence[str], pooling: str = "model_default"):
        out = []
        for text in texts:
            if pooling == "mean":
                tokens = tokenize(text)
                if not tokens:
                    out.append([0.0] * self.dim)
                    continue
                acc = [0.0] * self.dim
                for tok in tokens:
                    unit = token_unit_vector(tok, self.dim, self.seed)
                    for k in range(self.dim):
                        acc[k] += unit[k]
                out.append([v / len(tokens) for v in acc])
            else:
                out.append(sentence_vector(text, self.dim, self.seed))
        return out

    def encode_token_batch(self, texts: Sequence[str]):
        out = []
        for text in texts:
            tokens, rows = token_matrix(text, self.dim, self.seed)
            if not tokens:
                # a token record with an empty token list would be rejected
                # downstream, so report the text instead of writing it
                out.append(UnencodableText("no tokens after normalization"))
            else:
                out.append((tokens, rows))
        return out


class SentenceTransformerEncoder:
    """sentence-transformers checkpoint; sentence vectors via built-in pooling."""

    supports_tokens = False
    poolings = ("model_default",)

    def __init__(self, checkpoint: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ModelResolutionError(
                "sentence-transformers is not installed; install the 'models' extra"
            ) from exc
        try:
            self._model = SentenceTransformer(checkpoint)
        except Exception as exc:
            raise ModelResolutionError(f"cannot load checkpoint {checkpoint!r}: {exc}") from exc
        self.model_name = f"st:{checkpoint}"

    def encode_sentence_batch(self, texts: Sequence[str], pooling: str = "model_default"):
        vectors = self._model.encode(list(texts), convert_to_numpy=True, show_progress_bar=False)
        return [[float(v) for v in row] for row in vectors]


class TransformerTokenEncoder:
    """Plain transformers checkpoint with per-token hidden states."""

    supports_tokens = True
    poolings = ("model_default", "mean")

    def __init__(self, checkpoint: str):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise ModelResolutionError(
                "transformers and torch are not installed; install the 'models' extra"
            ) from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(checkpoint)
            self._model = AutoModel.from_pretrained(checkpoint)
        except Exception as exc:
            raise ModelResolutionError(f"cannot load checkpoint {checkpoint!r}: {exc}") from exc
        self._model.eval()
        self._torch = torch
        self.model_name = f"hf:{checkpoint}"

    def _hidden_states(self, texts: Sequence[str]):
        enc = self._tokenizer(list(texts), return_tensors="pt", padding=True, truncation=True)
        with self._torch.no_grad():
            hidden = self._model(**enc).last_hidden_state
        return enc, hidden

    def encode_sentence_batch(self, texts: Sequence[str], pooling: str = "model_default"):
        # AutoModel exposes no uniform sentence head, so both poolings
        # mean-pool the hidden states over non-padding positions
        enc, hidden = self._hidden_states(texts)
        mask = enc["attention_mask"].unsqueeze(-1)
        summed = (hidden * mask).sum(dim=1)
        counts = mask.sum(dim=1).clamp(min=1)
        return [[float(v) for v in row] for row in summed / counts]

    def encode_token_batch(self, texts: Sequence[str]):
        enc, hidden = self._hidden_states(texts)
        out = []
        for i in range(len(texts)):
            ids = enc["input_ids"][i]
            mask = enc["attention_mask"][i]
            special = self._tokenizer.get_special_tokens_mask(
                ids.tolist(), already_has_special_tokens=True
            )
            tokens, rows = [], []
            for pos in range(len(ids)):
                if int(mask[pos]) == 0 or special[pos] == 1:
                    continue
                tokens.append(self._tokenizer.convert_ids_to_tokens(int(ids[pos])))
                rows.append([float(v) for v in hidden[i, pos]])
            if not tokens:
                out.append(UnencodableText("no model tokens for this text"))
            else:
                out.append((tokens, rows))
        return out


def resolve(model_id: str):
    """Turn a model id string into an encoder instance."""
    if model_id.startswith("hash:"):
        parts = model_id.split(":")
        try:
            if len(parts) != 3:
                raise ValueError
            dim, seed = int(parts[1]), int(parts[2])
        except ValueError:
            raise ModelResolutionError(
                f"bad hash model id {model_id!r}; expected hash:<dim>:<seed>"
            ) from None
        return HashEncoder(dim, seed)
    if model_id.startswith("st:"):
        return SentenceTransformerEncoder(model_id[3:])
    if model_id.startswith("hf:"):
        return TransformerTokenEncoder(model_id[3:])
    raise ModelResolutionError(
        f"unknown model id {model_id!r}; expected hash:<dim>:<seed>, st:<checkpoint>, or hf:<checkpoint>"
    )
