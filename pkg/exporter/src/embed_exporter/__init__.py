"""Embedding exporters for source-code summary pairs.

Output is one JSON object per line in the layout the scoring package's
embedding loader expects: one record per (item, role), a constant dimension
per file, and either a sentence vector or per-token matrix depending on the
requested kind.
"""

from .adapters import (
    HashEncoder,
    POOLINGS,
    SentenceTransformerEncoder,
    TransformerTokenEncoder,
    UnencodableText,
    resolve,
)
from .errors import ExporterError, ModelResolutionError, PairFormatError
from .hashed import sentence_vector, token_matrix, token_unit_vector, tokenize
from .jobs import (
    DEFAULT_SIG_DIGITS,
    KINDS,
    ExportJob,
    ExportResult,
    SkippedText,
    export_embeddings,
    export_fixture,
    read_pairs,
)

__all__ = [
    "DEFAULT_SIG_DIGITS",
    "ExportJob",
    "ExportResult",
    "ExporterError",
    "HashEncoder",
    "KINDS",
    "ModelResolutionError",
    "POOLINGS",
    "PairFormatError",
    "SentenceTransformerEncoder",
    "SkippedText",
    "TransformerTokenEncoder",
    "UnencodableText",
    "export_embeddings",
    "export_fixture",
    "read_pairs",
    "resolve",
    "sentence_vector",
    "token_matrix",
    "token_unit_vector",
    "tokenize",
]
