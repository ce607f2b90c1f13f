import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qexpand.analysis import AnalyzerConfig
from qexpand.index import build_index
from qexpand.trec import RawDocument

# Analyzer that indexes exactly the literal tokens: no stopwords, no stemming.
PLAIN = AnalyzerConfig(stopwords=frozenset(), stemmer="none")

# Three-document corpus used across the index/retrieval/expansion examples:
# tf, df, cf are small enough to count by hand.
TOY3 = {
    "d1": "a a b",
    "d2": "a c",
    "d3": "b c c",
}

# Five documents, 27 tokens, 6 distinct terms: the fixed corpus for the
# scorer-vs-oracle equivalence checks.
ACC5 = {
    "d1": "apple banana apple cherry grape",
    "d2": "apple cherry cherry durian banana",
    "d3": "banana banana grape apple fig",
    "d4": "durian fig grape cherry cherry apple",
    "d5": "fig fig grape durian banana banana",
}


def corpus_tokens(raw: dict[str, str]) -> dict[str, list[str]]:
    return {doc_id: text.split() for doc_id, text in raw.items()}


def random_text_corpus(rng, n_docs=12, vocab=("ant", "bee", "cat", "dog", "eel", "fox")):
    """Random small corpus guaranteeing at least one non-empty document."""
    corpus = {
        f"d{i:02d}": " ".join(rng.choices(vocab, k=rng.randint(0, 15)))
        for i in range(n_docs)
    }
    corpus["d00"] = " ".join(rng.choices(vocab, k=rng.randint(5, 15)))
    return corpus


def pathology_corpus():
    """Corpus with a planted off-topic term for the query "alpha beta".

    Document "stuffed" ranks high on alpha alone and repeats "papuc" 21
    times, but papuc never co-occurs with beta anywhere: a distribution
    scorer loves it (rare term concentrated in the feedback set), an
    association scorer puts it on the floor.
    """
    import random as _random

    rng = _random.Random(4242)
    good = [f"good{i:02d}" for i in range(50)]
    corpus = {}
    for i in range(6):  # strong on-topic documents: both query terms
        words = ["alpha"] * 2 + ["beta"] * 2
        for g in rng.sample(good, k=12):
            words += [g] * rng.randint(1, 2)
        rng.shuffle(words)
        corpus[f"both{i}"] = " ".join(words)
    corpus["stuffed"] = " ".join(["alpha"] * 4 + ["papuc"] * 21)
    for i in range(40):  # weaker on-topic documents: one query term each
        words = ["alpha" if i % 2 == 0 else "beta"]
        for g in rng.sample(good, k=10):
            words += [g] * rng.randint(1, 2)
        rng.shuffle(words)
        corpus[f"lite{i:02d}"] = " ".join(words)
    filler = [f"noise{i}" for i in range(20)]
    for i in range(20):  # off-topic background
        corpus[f"bg{i:02d}"] = " ".join(rng.choices(filler, k=15))
    return corpus


def make_index(raw: dict[str, str]):
    docs = [RawDocument(doc_id, text) for doc_id, text in raw.items()]
    return build_index(docs, PLAIN)


@pytest.fixture
def plain_config():
    return PLAIN


@pytest.fixture
def toy3_index():
    return make_index(TOY3)


@pytest.fixture
def acc5_index():
    return make_index(ACC5)


@pytest.fixture
def acc5_tokens():
    return corpus_tokens(ACC5)


@pytest.fixture
def toy3_tokens():
    return corpus_tokens(TOY3)
