"""Similarity metrics and human-rating correlation analysis for code summaries."""

from .errors import ConfigError, DataFormatError, DegenerateInputError, SumsimError
from .overlap import (
    MeteorParams,
    MeteorResult,
    MetricScore,
    Orientation,
    RougeResult,
    SummaryPair,
    SynonymLexicon,
    bleu_composite,
    bleu_n,
    jaccard,
    meteor,
    rouge_l,
    rouge_w,
)
from .ratings import (
    AggregateRating,
    DescriptiveStats,
    GroupSplit,
    RatingRecord,
    aggregate,
    agreement_histogram,
    descriptive_stats,
    load_ratings,
    normalize_all,
    normalize_polarity,
    split_groups,
)
from .stats import (
    CorrelationResult,
    UTestResult,
    kendall_tau_b,
    mann_whitney_u,
    oriented_series,
    rank_average,
    spearman_rho,
)
from .text import (
    NGramMultiset,
    TokenSequence,
    lcs_length,
    ngram_profile,
    normalize_tokenize,
    stem,
    wlcs_score,
)
from .vectors import (
    BertScoreResult,
    EmbeddingRecord,
    EmbeddingStore,
    TfIdfModel,
    bertscore_f1,
    cosine_similarity,
    det_embed,
    det_token_vectors,
    euclidean_distance,
    load_embeddings,
    tfidf_fit,
    tfidf_vector,
)

__version__ = "0.1.0"
