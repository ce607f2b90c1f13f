"""Document scoring and ranked retrieval.

The default term-weighting model is IFB2 from the Divergence From Randomness
family; BM25 is available behind the same interface as a cross-check.  A
weighted query scores documents as

    Sim(d,Q) = sum over query terms t of  weight(t) * w(t,d)

i.e. query weights combine linearly with the document model.  Rankings are
deterministic: score descending, ties broken by doc_id ascending, documents
with non-positive scores dropped.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

from .index import CorpusIndex


@dataclass(frozen=True)
class ScoredDoc:
    doc_id: str
    score: float


@dataclass
class WeightedQuery:
    """A query as term weights, plus the original query's term frequencies.

    `terms` drives retrieval; `original_tf` is preserved across expansion so
    the merge formulas can renormalize the original-query side.
    """

    query_id: str
    terms: dict[str, float]
    original_tf: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.terms:
            raise ValueError(f"query {self.query_id!r} has no terms")
        for term, w in self.terms.items():
            if not math.isfinite(w) or w <= 0:
                raise ValueError(
                    f"query {self.query_id!r}: non-positive weight {w!r} for {term!r}"
                )
        if not self.original_tf:
            self.original_tf = {t: 1 for t in self.terms}

    @classmethod
    def from_terms(cls, query_id: str, terms: Sequence[str]) -> "WeightedQuery":
        """Build the unexpanded query: weight = term frequency in the query."""
        tf: dict[str, int] = {}
        for t in terms:
            tf[t] = tf.get(t, 0) + 1
        return cls(query_id, {t: float(n) for t, n in tf.items()}, dict(tf))


class Ifb2Weighting:
    """IFB2 DFR weighting with tf normalization constant c (default 1.0):

        tfn = tf * log2(1 + c * avg_doc_len / doc_len)
        w   = (cf+1) / (df * (tfn+1)) * tfn * log2((N+1) / (cf+0.5))
    """

    def __init__(self, c: float = 1.0):
        if c <= 0:
            raise ValueError("c must be positive")
        self.c = c

    def weighter(self, index: CorpusIndex, term: str):
        rec = index.terms.get(term)
        if rec is None:
            return None
        scale = (rec.cf + 1.0) / rec.df * math.log2((index.n_docs + 1.0) / (rec.cf + 0.5))
        c_avg = self.c * index.avg_doc_len

        def weight(tf: int, doc_len: int) -> float:
            tfn = tf * math.log2(1.0 + c_avg / doc_len)
            return scale * tfn / (tfn + 1.0)

        return weight


class Bm25Weighting:
    """Okapi BM25 with the always-positive idf variant log(1 + (N-df+0.5)/(df+0.5))."""

    def __init__(self, k1: float = 1.2, b: float = 0.75):
        self.k1 = k1
        self.b = b

    def weighter(self, index: CorpusIndex, term: str):
        rec = index.terms.get(term)
        if rec is None:
            return None
        n, df = index.n_docs, rec.df
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        k1, b = self.k1, self.b
        avg = index.avg_doc_len

        def weight(tf: int, doc_len: int) -> float:
            return idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * doc_len / avg))

        return weight


DEFAULT_WEIGHTING = Ifb2Weighting()


def ifb2_weight(index: CorpusIndex, term: str, doc: int, c: float = 1.0) -> float:
    """IFB2 weight of `term` in document ordinal `doc`; 0 when absent."""
    tf = index.tf(term, doc)
    if tf == 0:
        return 0.0
    return Ifb2Weighting(c).weighter(index, term)(tf, index.doc_len[doc])


def bm25_weight(
    index: CorpusIndex, term: str, doc: int, k1: float = 1.2, b: float = 0.75
) -> float:
    tf = index.tf(term, doc)
    if tf == 0:
        return 0.0
    return Bm25Weighting(k1, b).weighter(index, term)(tf, index.doc_len[doc])


def retrieve(
    query: WeightedQuery,
    index: CorpusIndex,
    k: int,
    weighting=None,
) -> list[ScoredDoc]:
    """Exhaustively score and return the top-k documents for a weighted query.

    Documents scoring <= 0 are excluded; a query with no indexed terms yields
    an empty result.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    weighting = weighting or DEFAULT_WEIGHTING
    acc: dict[int, float] = defaultdict(float)
    for term, qweight in query.terms.items():
        weight = weighting.weighter(index, term)
        if weight is None:
            continue
        doc_len = index.doc_len
        for p in index.postings(term):
            acc[p.doc] += qweight * weight(p.tf, doc_len[p.doc])
    scored = [
        ScoredDoc(index.doc_ids[doc], s) for doc, s in acc.items() if s > 0.0
    ]
    scored.sort(key=lambda sd: (-sd.score, sd.doc_id))
    return scored[:k]


@dataclass(frozen=True)
class FeedbackDoc:
    doc_id: str
    ordinal: int
    sim: float
    tf: Mapping[str, int]


class PseudoRelevantSet:
    """The top-ranked documents assumed relevant, with materialized term vectors."""

    def __init__(self, docs: Sequence[FeedbackDoc]):
        self.docs = list(docs)

    @property
    def n(self) -> int:
        return len(self.docs)

    @property
    def max_sim(self) -> float:
        return max(d.sim for d in self.docs)

    @property
    def total_tokens(self) -> int:
        return sum(sum(d.tf.values()) for d in self.docs)

    def term_tf(self) -> dict[str, int]:
        """Total term frequency of every term across the set."""
        totals: dict[str, int] = {}
        for d in self.docs:
            for term, tf in d.tf.items():
                totals[term] = totals.get(term, 0) + tf
        return totals

    def vocabulary(self) -> list[str]:
        return sorted(self.term_tf())


def feedback_set(index: CorpusIndex, ranking: Sequence[ScoredDoc]) -> PseudoRelevantSet:
    docs = []
    for sd in ranking:
        ordinal = index.ordinal(sd.doc_id)
        docs.append(FeedbackDoc(sd.doc_id, ordinal, sd.score, index.doc_vector(ordinal)))
    return PseudoRelevantSet(docs)


def pseudo_relevant_set(
    query: WeightedQuery,
    index: CorpusIndex,
    d: int,
    weighting=None,
) -> PseudoRelevantSet:
    """Retrieve and materialize the top-d pseudo-relevant documents."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return feedback_set(index, retrieve(query, index, d, weighting))


# --- TREC run output ------------------------------------------------------


def format_run_line(query_id: str, rank: int, sd: ScoredDoc, tag: str) -> str:
    return f"{query_id} Q0 {sd.doc_id} {rank} {sd.score:.6f} {tag}"


def write_run(
    fh: IO[str],
    results: Iterable[tuple[str, Sequence[ScoredDoc]]],
    tag: str,
) -> None:
    """Write `query_id Q0 doc_id rank score tag` lines, ranks starting at 1."""
    for query_id, ranking in results:
        for rank, sd in enumerate(ranking, start=1):
            fh.write(format_run_line(query_id, rank, sd, tag) + "\n")
