"""Run configuration: a dataclass, metric-name parsing, and flat config files."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .ratings import CRITERIA, DEFAULT_INVERTED_CRITERIA
from .text import TOKENIZER_MODES

# Metric families that need no model argument, in default reporting order.
PLAIN_METRICS = (
    "jaccard", "bleu1", "bleu", "rouge-l", "rouge-w", "meteor",
    "tfidf-cosine", "tfidf-euclid",
)
# Families taking ":<model>" and served from embedding files.
MODEL_METRIC_PREFIXES = ("emb-cosine", "emb-euclid", "bertscore")

DEFAULT_METRICS = PLAIN_METRICS


def parse_metric_name(name: str) -> tuple[str, str | None]:
    """Split a metric name into (family, model); model is None for plain ones."""
    if name in PLAIN_METRICS:
        return name, None
    if ":" in name:
        family, model = name.split(":", 1)
        if family in MODEL_METRIC_PREFIXES:
            if not model:
                raise ConfigError(f"metric {name!r} is missing a model name after ':'")
            return family, model
    raise ConfigError(
        f"unknown metric {name!r}; expected one of {', '.join(PLAIN_METRICS)} "
        f"or <family>:<model> with family in {', '.join(MODEL_METRIC_PREFIXES)}"
    )


@dataclass
class RunConfig:
    pairs_path: Path | None = None
    ratings_path: Path | None = None
    embeddings_paths: tuple[Path, ...] = ()
    metrics: tuple[str, ...] = DEFAULT_METRICS
    tokenizer: str = "standard"
    inverted_criteria: frozenset = DEFAULT_INVERTED_CRITERIA
    group_low: float = 2.0
    group_high: float = 3.0
    out_dir: Path = Path("sumsim_out")
    synonyms_path: Path | None = None
    tfidf_corpus_path: Path | None = None
    bleu_weights: tuple[float, ...] = (0.25, 0.25, 0.25, 0.25)
    bleu_smoothing: str = "none"
    brevity_penalty: bool = True
    rouge_beta: float = 1.0
    rouge_w_alpha: float = 1.2
    meteor_alpha: float = 0.9
    meteor_gamma: float = 0.5
    meteor_beta: float = 3.0

    def validate(self) -> None:
        if self.tokenizer not in TOKENIZER_MODES:
            raise ConfigError(
                f"tokenizer must be one of {TOKENIZER_MODES}, got {self.tokenizer!r}"
            )
        if not self.metrics:
            raise ConfigError("at least one metric must be enabled")
        for name in self.metrics:
            parse_metric_name(name)
        if len(set(self.metrics)) != len(self.metrics):
            raise ConfigError("metric list contains duplicates")
        unknown = set(self.inverted_criteria) - set(CRITERIA)
        if unknown:
            raise ConfigError(f"unknown criteria in invert list: {sorted(unknown)}")
        if not self.group_low < self.group_high:
            raise ConfigError(
                f"group-low must be < group-high, got {self.group_low} and {self.group_high}"
            )
        if not self.bleu_weights:
            raise ConfigError("bleu weights must be non-empty")
        if any(w < 0 for w in self.bleu_weights):
            raise ConfigError("bleu weights must be non-negative")
        if abs(sum(self.bleu_weights) - 1.0) > 1e-9:
            raise ConfigError(f"bleu weights must sum to 1, got {sum(self.bleu_weights)}")
        if self.bleu_smoothing not in ("none", "add_epsilon"):
            raise ConfigError(f"unknown bleu smoothing {self.bleu_smoothing!r}")
        if self.rouge_beta <= 0:
            raise ConfigError("rouge beta must be > 0")
        if self.rouge_w_alpha < 1:
            raise ConfigError("rouge-w alpha must be >= 1")
        if not (0 < self.meteor_alpha <= 1):
            raise ConfigError("meteor alpha must be in (0, 1]")
        if not (0 < self.meteor_gamma <= 1):
            raise ConfigError("meteor gamma must be in (0, 1]")
        if self.meteor_beta <= 0:
            raise ConfigError("meteor beta must be > 0")

    def label(self) -> str:
        """One-line summary of the knobs that affect scores, for report headers."""
        parts = [
            f"tokenizer={self.tokenizer}",
            f"bleu_weights={','.join(repr(w) for w in self.bleu_weights)}",
            f"bleu_smoothing={self.bleu_smoothing}",
            f"brevity_penalty={'on' if self.brevity_penalty else 'off'}",
            f"rouge_beta={self.rouge_beta!r}",
            f"rouge_w_alpha={self.rouge_w_alpha!r}",
            f"meteor={self.meteor_alpha!r}/{self.meteor_gamma!r}/{self.meteor_beta!r}",
            f"invert={','.join(sorted(self.inverted_criteria)) or 'none'}",
            f"groups={self.group_low!r}/{self.group_high!r}",
        ]
        return " ".join(parts)


# Keys accepted in a config file, mapping to RunConfig fields.  Values are
# parsed exactly like their command-line counterparts.
_CONFIG_KEYS = {
    "pairs": "pairs_path",
    "ratings": "ratings_path",
    "embeddings": "embeddings_paths",
    "metrics": "metrics",
    "tokenizer": "tokenizer",
    "invert": "inverted_criteria",
    "group_low": "group_low",
    "group_high": "group_high",
    "out": "out_dir",
    "synonyms": "synonyms_path",
    "tfidf_corpus": "tfidf_corpus_path",
    "bleu_weights": "bleu_weights",
    "bleu_smoothing": "bleu_smoothing",
    "brevity_penalty": "brevity_penalty",
    "rouge_beta": "rouge_beta",
    "rouge_w_alpha": "rouge_w_alpha",
    "meteor_alpha": "meteor_alpha",
    "meteor_gamma": "meteor_gamma",
    "meteor_beta": "meteor_beta",
}


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"config key {key!r}: expected a boolean, got {raw!r}")


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected a number, got {raw!r}") from None


def parse_config_value(key: str, raw: str):
    """Convert one raw config-file string into the RunConfig field value."""
    if key in ("pairs", "ratings", "out", "synonyms", "tfidf_corpus"):
        return Path(raw)
    if key == "embeddings":
        return tuple(Path(p.strip()) for p in raw.split(",") if p.strip())
    if key == "metrics":
        return tuple(m.strip() for m in raw.split(",") if m.strip())
    if key == "invert":
        return frozenset(c.strip() for c in raw.split(",") if c.strip())
    if key in ("group_low", "group_high", "rouge_beta", "rouge_w_alpha",
               "meteor_alpha", "meteor_gamma", "meteor_beta"):
        return _parse_float(raw, key)
    if key == "bleu_weights":
        return tuple(_parse_float(w, key) for w in raw.split(",") if w.strip())
    if key == "brevity_penalty":
        return _parse_bool(raw, key)
    if key in ("tokenizer", "bleu_smoothing"):
        return raw.strip()
    raise ConfigError(f"unknown config key {key!r}")


def load_config_file(path) -> dict[str, object]:
    """Parse a flat "key = value" file into RunConfig field values.

    '#' starts a comment; blank lines are skipped; keys must be known.
    Environment variables are deliberately not consulted.
    """
    values: dict[str, object] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{line_no}: unknown config key {key!r}")
        values[_CONFIG_KEYS[key]] = parse_config_value(key, raw)
    return values


def build_config(file_values: dict[str, object] | None = None, **overrides) -> RunConfig:
    """Start from defaults, apply config-file values, then CLI overrides."""
    config = RunConfig()
    valid = {f.name for f in fields(RunConfig)}
    for source in (file_values or {}, {k: v for k, v in overrides.items() if v is not None}):
        unknown = set(source) - valid
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        config = replace(config, **source)
    return config
