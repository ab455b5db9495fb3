"""Seeded hash embeddings, bit-compatible with the scoring package's fixtures.

The recipe is dependency-free on purpose: FNV-1a over the seed bytes plus the
UTF-8 token picks a mulberry32 stream, the first `dim` draws (mapped to
[-1, 1)) are normalized into a unit vector for the token, and a sentence
vector is the plain sum of its token vectors taken in sorted token order.
Any implementation of the same recipe reproduces the numbers exactly, which
is what makes these files usable as cross-implementation fixtures.
"""

from __future__ import annotations

import math
import re

# Maximal runs of unicode alphanumerics; underscore counts as a separator.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193
_U32 = 0xFFFFFFFF


def tokenize(text: str) -> list[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return _WORD_RE.findall(text.lower())


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


def token_unit_vector(token: str, dim: int, seed: int) -> list[float]:
    """Deterministic unit vector for one token."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    state = _fnv1a32((seed & _U32).to_bytes(4, "little") + token.encode("utf-8"))
    comps = []
    for _ in range(dim):
        state, u = _mulberry32_step(state)
        comps.append(2.0 * u - 1.0)
    norm_sq = 0.0
    for c in comps:
        norm_sq += c * c
    if norm_sq == 0.0:
        # every draw landing on exactly 0.5 is astronomically unlikely, but
        # the contract still promises a unit vector
        comps[0] = 1.0
        norm_sq = 1.0
    norm = math.sqrt(norm_sq)
    return [c / norm for c in comps]


def sentence_vector(text: str, dim: int, seed: int) -> list[float]:
    """Sum of token unit vectors in sorted token order; empty text gives zeros.

    Duplicated tokens contribute once per occurrence, and the sorted
    accumulation order pins the floating-point result.
    """
    total = [0.0] * dim
    for token in sorted(tokenize(text)):
        unit = token_unit_vector(token, dim, seed)
        for k in range(dim):
            total[k] += unit[k]
    return total


def token_matrix(text: str, dim: int, seed: int) -> tuple[list[str], list[list[float]]]:
    """Per-token unit vectors in original token order."""
    tokens = tokenize(text)
    return tokens, [token_unit_vector(tok, dim, seed) for tok in tokens]
