"""Tokenization, n-gram profiles, (weighted) LCS, and a Porter-style stemmer.

Everything in this module is a pure function over immutable values, so
results can be cached or computed concurrently without coordination.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

TOKENIZER_MODES = ("standard", "pretokenized")

# Maximal runs of unicode alphanumerics; underscore counts as a separator.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class TokenSequence:
    """Ordered tokens plus the text they came from."""

    tokens: tuple[str, ...]
    source_text: str = ""

    def __post_init__(self):
        for tok in self.tokens:
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"invalid token {tok!r}: empty or contains whitespace")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass(frozen=True)
class NGramMultiset:
    """Multiset of the n-grams of a token sequence."""

    n: int
    counts: Counter = field(default_factory=Counter)

    def total(self) -> int:
        return sum(self.counts.values())


def normalize_tokenize(text: str, mode: str = "standard") -> TokenSequence:
    """Turn raw text into a TokenSequence.

    "standard" lowercases and splits on runs of non-alphanumeric characters;
    "pretokenized" splits on whitespace only and leaves case alone, for input
    that a upstream tool already segmented.
    """
    if mode == "standard":
        tokens = tuple(_WORD_RE.findall(text.lower()))
    elif mode == "pretokenized":
        tokens = tuple(text.split())
    else:
        raise ValueError(f"unknown tokenizer mode {mode!r}; expected one of {TOKENIZER_MODES}")
    return TokenSequence(tokens=tokens, source_text=text)


def ngram_profile(seq: TokenSequence, n: int) -> NGramMultiset:
    """Sliding-window n-gram multiset; empty when the sequence is shorter than n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    toks = seq.tokens
    counts = Counter(tuple(toks[i : i + n]) for i in range(len(toks) - n + 1))
    return NGramMultiset(n=n, counts=counts)


def lcs_length(a: TokenSequence, b: TokenSequence) -> int:
    """Length of the longest common subsequence (not necessarily contiguous)."""
    xs, ys = a.tokens, b.tokens
    if not xs or not ys:
        return 0
    prev = [0] * (len(ys) + 1)
    for x in xs:
        cur = [0]
        for j, y in enumerate(ys, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(cur[j - 1], prev[j]))
        prev = cur
    return prev[-1]


def wlcs_score(a: TokenSequence, b: TokenSequence, alpha: float = 1.2) -> float:
    """Weighted LCS favoring contiguous matches.

    A run of k consecutive matches contributes f(k) = k**alpha, so for
    alpha > 1 one long run outweighs the same matches split into pieces.
    With alpha = 1 this reduces to plain LCS length.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    xs, ys = a.tokens, b.tokens
    if not xs or not ys:
        return 0.0

    def f(k: int) -> float:
        return float(k) ** alpha

    m, n = len(xs), len(ys)
    c = [[0.0] * (n + 1) for _ in range(m + 1)]
    w = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if xs[i - 1] == ys[j - 1]:
                k = w[i - 1][j - 1]
                c[i][j] = c[i - 1][j - 1] + f(k + 1) - f(k)
                w[i][j] = k + 1
            else:
                # dropping either tail ends the current run
                c[i][j] = max(c[i - 1][j], c[i][j - 1])
                w[i][j] = 0
    return c[m][n]


# ---------------------------------------------------------------------------
# Porter-style stemmer.
#
# Rule tables follow the classic five-step suffix stripper.  The public
# stem() iterates to a fixed point because a single pass is not idempotent
# (e.g. "agreed" -> "agre" -> "agr"), and downstream matching relies on
# stem(stem(w)) == stem(w).
# ---------------------------------------------------------------------------

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y is a vowel when it follows a consonant ("syzygy"), else a consonant
        return True if i == 0 else not _is_consonant(word, i - 1)
    return True


def _measure(stem_part: str) -> int:
    """Number of vowel->consonant transitions ([C](VC)^m[V])."""
    m = 0
    prev_vowel = False
    for i in range(len(stem_part)):
        cons = _is_consonant(stem_part, i)
        if prev_vowel and cons:
            m += 1
        prev_vowel = not cons
    return m


def _contains_vowel(stem_part: str) -> bool:
    return any(not _is_consonant(stem_part, i) for i in range(len(stem_part)))


def _ends_double_consonant(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _is_consonant(word, len(word) - 1)


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    if not (_is_consonant(word, len(word) - 3) and not _is_consonant(word, len(word) - 2) and _is_consonant(word, len(word) - 1)):
        return False
    return word[-1] not in "wxy"


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    fired = None
    if word.endswith("ed") and _contains_vowel(word[:-2]):
        fired = word[:-2]
    elif word.endswith("ing") and _contains_vowel(word[:-3]):
        fired = word[:-3]
    if fired is None:
        return word
    stem_part = fired
    if stem_part.endswith(("at", "bl", "iz")):
        return stem_part + "e"
    if _ends_double_consonant(stem_part) and stem_part[-1] not in "lsz":
        return stem_part[:-1]
    if _measure(stem_part) == 1 and _ends_cvc(stem_part):
        return stem_part + "e"
    return stem_part


def _step1c(word: str) -> str:
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_STEP2 = (
    ("ational", "ate"), ("ization", "ize"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("tional", "tion"), ("biliti", "ble"), ("ation", "ate"),
    ("alism", "al"), ("aliti", "al"), ("iviti", "ive"), ("ousli", "ous"),
    ("entli", "ent"), ("enci", "ence"), ("anci", "ance"), ("izer", "ize"),
    ("abli", "able"), ("alli", "al"), ("ator", "ate"), ("eli", "e"),
)

_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)

_STEP4 = (
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism",
    "ate", "iti", "ous", "ive", "ize", "ion", "al", "er", "ic", "ou",
)


def _longest_suffix(word: str, suffixes) -> str | None:
    best = None
    for suf in suffixes:
        if word.endswith(suf) and (best is None or len(suf) > len(best)):
            best = suf
    return best


def _step2(word: str) -> str:
    match = _longest_suffix(word, [s for s, _ in _STEP2])
    if match is None:
        return word
    repl = dict(_STEP2)[match]
    stem_part = word[: -len(match)]
    if _measure(stem_part) > 0:
        return stem_part + repl
    return word


def _step3(word: str) -> str:
    match = _longest_suffix(word, [s for s, _ in _STEP3])
    if match is None:
        return word
    repl = dict(_STEP3)[match]
    stem_part = word[: -len(match)]
    if _measure(stem_part) > 0:
        return stem_part + repl
    return word


def _step4(word: str) -> str:
    match = _longest_suffix(word, _STEP4)
    if match is None:
        return word
    stem_part = word[: -len(match)]
    if _measure(stem_part) <= 1:
        return word
    if match == "ion" and stem_part[-1:] not in ("s", "t"):
        return word
    return stem_part


def _step5(word: str) -> str:
    if word.endswith("e"):
        stem_part = word[:-1]
        m = _measure(stem_part)
        if m > 1 or (m == 1 and not _ends_cvc(stem_part)):
            word = stem_part
    if word.endswith("l") and _ends_double_consonant(word) and _measure(word) > 1:
        word = word[:-1]
    return word


def _porter_pass(word: str) -> str:
    if len(word) <= 2:
        return word
    for step in (_step1a, _step1b, _step1c, _step2, _step3, _step4, _step5):
        word = step(word)
    return word


def stem(word: str) -> str:
    """Stem a lowercase token; repeated application is a no-op."""
    if not word:
        raise ValueError("cannot stem an empty word")
    current = word
    for _ in range(20):
        nxt = _porter_pass(current)
        if nxt == current:
            break
        current = nxt
    return current
