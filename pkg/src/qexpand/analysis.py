"""Text analysis: tokenize, stopword-filter, stem.

One analyzer configuration is used for both documents and queries so that
term statistics and query terms live in the same token universe.  The
pipeline is deterministic: lowercase (optional), split on maximal runs of
letters/digits, drop stopwords, then stem.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable

from . import porter

# Maximal runs of Unicode letters/digits; underscore and everything else
# act as separators.
DEFAULT_TOKEN_PATTERN = r"[^\W_]+"

STEMMERS = ("porter", "none")


@lru_cache(maxsize=16)
def _compiled(pattern: str) -> re.Pattern:
    return re.compile(pattern, re.UNICODE)


def load_stopwords(path) -> frozenset[str]:
    """Read a stopword file: UTF-8, one term per line, '#' comments."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line)
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The bundled English stopword list."""
    text = resources.files(__package__).joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


@dataclass(frozen=True)
class AnalyzerConfig:
    """Deterministic analysis settings shared by indexing and querying."""

    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    stemmer: str = "porter"
    lowercase: bool = True
    token_pattern: str = DEFAULT_TOKEN_PATTERN

    def __post_init__(self):
        if self.stemmer not in STEMMERS:
            raise ValueError(f"unknown stemmer {self.stemmer!r}; expected one of {STEMMERS}")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))

    def to_dict(self) -> dict:
        return {
            "stopwords": sorted(self.stopwords),
            "stemmer": self.stemmer,
            "lowercase": self.lowercase,
            "token_pattern": self.token_pattern,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalyzerConfig":
        return cls(
            stopwords=frozenset(d["stopwords"]),
            stemmer=d["stemmer"],
            lowercase=d["lowercase"],
            token_pattern=d["token_pattern"],
        )


def analyze(text: str, config: AnalyzerConfig) -> list[str]:
    """Turn raw text into the term stream used for indexing and querying.

    Order preserved; duplicate terms kept (query term frequency matters for
    the merge formulas downstream).
    """
    if config.lowercase:
        text = text.lower()
    tokens: Iterable[str] = _compiled(config.token_pattern).findall(text)
    tokens = (t for t in tokens if t not in config.stopwords)
    if config.stemmer == "porter":
        return [porter.stem(t) for t in tokens]
    return list(tokens)
