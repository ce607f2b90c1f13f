"""Candidate expansion-term scoring and query merging.

Six scorers over the pseudo-relevant document set (PRD):

  distribution based   kld, bo1, bo1new
  association based    lca, lcanew, rm3

Every scorer assigns a raw score S(t) to each distinct PRD term; the top-T
terms are then merged into the original query.  kld/bo1/bo1new/lcanew use the
additive max-normalized merge, lca uses its own rank-linear expansion weights,
rm3 interpolates a normalized feedback model with the query's maximum
likelihood model.

Scorers are pure functions of (PRD, index, parameters); scores are finite,
and every candidate occurs in at least one PRD document.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .index import CorpusIndex
from .retrieval import PseudoRelevantSet, WeightedQuery, pseudo_relevant_set

log = logging.getLogger(__name__)

METHODS = ("kld", "bo1", "bo1new", "lca", "lcanew", "rm3")
DISTRIBUTION_METHODS = ("kld", "bo1", "bo1new")
ASSOCIATION_METHODS = ("lca", "lcanew", "rm3")


@dataclass(frozen=True)
class CandidateTerm:
    term: str
    raw_score: float
    method: str


@dataclass(frozen=True)
class ExpansionParams:
    """Feedback depth D, expansion width T, and per-method constants."""

    D: int = 10
    T: int = 40
    delta: float = 0.1    # LCA co-degree offset
    mu: float = 2500.0    # RM3 Dirichlet smoothing
    alpha: float = 0.5    # RM3 interpolation weight

    def __post_init__(self):
        if self.D < 1 or self.T < 1:
            raise ValueError("D and T must be >= 1")
        if self.delta <= 0 or self.mu <= 0:
            raise ValueError("delta and mu must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")

    @classmethod
    def for_method(cls, method: str) -> "ExpansionParams":
        """Customary defaults: D=10/T=40, except RM3 which uses D=50/T=50."""
        if method == "rm3":
            return cls(D=50, T=50)
        return cls()


def _candidate_universe(
    prd: PseudoRelevantSet, restrict_to: Optional[Iterable[str]]
) -> list[str]:
    vocab = prd.term_tf()
    if restrict_to is None:
        return sorted(vocab)
    return sorted(t for t in restrict_to if t in vocab)


# --- distribution based scorers -------------------------------------------


def score_kld(
    prd: PseudoRelevantSet,
    index: CorpusIndex,
    terms: Optional[Iterable[str]] = None,
) -> list[CandidateTerm]:
    """Per-term contribution to the KL divergence between PRD and collection:

        S(t) = p_r(t) * ln(p_r(t) / p_c(t))

    p_r is the term's frequency mass within the PRD, p_c its collection
    probability.  Scores may be negative (terms rarer in the PRD than in the
    collection); those simply rank low.
    """
    prd_tf = prd.term_tf()
    prd_total = sum(prd_tf.values())
    out = []
    for term in _candidate_universe(prd, terms):
        p_r = prd_tf[term] / prd_total
        p_c = index.p_c(term)
        out.append(CandidateTerm(term, p_r * math.log(p_r / p_c), "kld"))
    return out


def score_bo1(
    prd: PseudoRelevantSet,
    index: CorpusIndex,
    terms: Optional[Iterable[str]] = None,
) -> list[CandidateTerm]:
    """Bose-Einstein informativeness:

        S(t) = sum_PRD tf(t,d) * log2((1+f_avg)/f_avg) + log2(1+f_avg)

    with f_avg = cf(t)/N, the term's average frequency over the collection.
    """
    prd_tf = prd.term_tf()
    n_docs = index.n_docs
    out = []
    for term in _candidate_universe(prd, terms):
        f_avg = index.cf(term) / n_docs
        s = prd_tf[term] * math.log2((1.0 + f_avg) / f_avg) + math.log2(1.0 + f_avg)
        out.append(CandidateTerm(term, s, "bo1"))
    return out


def score_bo1new(
    prd: PseudoRelevantSet,
    index: CorpusIndex,
    terms: Optional[Iterable[str]] = None,
) -> list[CandidateTerm]:
    """Similarity-scaled Bo1 variant with an inverse-collection-frequency cap:

        S(t) = sum_PRD [tf(t,d) * Sim(d,Q)/max Sim] * ictf(t)/(1+ictf(t))

    where ictf(t) = log10(1/p_c(t)).  An occurrence in a higher-ranked
    feedback document counts for more; collection-wide common terms are
    damped toward zero.
    """
    max_sim = prd.max_sim
    universe = set(_candidate_universe(prd, terms))
    scaled: dict[str, float] = {t: 0.0 for t in universe}
    for doc in prd.docs:
        ratio = doc.sim / max_sim
        for term, tf in doc.tf.items():
            if term in universe:
                scaled[term] += tf * ratio
    out = []
    for term in sorted(universe):
        ictf = math.log10(1.0 / index.p_c(term))
        out.append(CandidateTerm(term, scaled[term] * ictf / (1.0 + ictf), "bo1new"))
    return out


# --- association based scorers --------------------------------------------


def idf_capped(n_docs: int, df: int) -> float:
    """min(log10(N/N_t)/5, 1); caps at 1 for unseen terms (N_t = 0)."""
    if df == 0:
        return 1.0
    return min(math.log10(n_docs / df) / 5.0, 1.0)


def idf_robertson(n_docs: int, df: int) -> float:
    """log10((N - N_t + 0.5) / (N_t + 0.5)); negative for very common terms."""
    return math.log10((n_docs - df + 0.5) / (df + 0.5))


def _log_prd_size(prd: PseudoRelevantSet) -> float:
    if prd.n == 1:
        log.warning(
            "co-degree undefined for a single feedback document; treating it as 0"
        )
        return 0.0
    return math.log10(prd.n)


def score_lca(
    prd: PseudoRelevantSet,
    query_terms: Sequence[str],
    index: CorpusIndex,
    delta: float = 0.1,
    terms: Optional[Iterable[str]] = None,
) -> list[CandidateTerm]:
    """Original local context analysis co-degree score:

        co(t,q)       = sum_PRD tf(t,d) * tf(q,d)
        codegree(t,q) = log10(co+1) * idf_t / log10(n)
        S(t)          = sum over query terms q of idf_q * log10(delta + codegree)

    idf here is the capped form min(log10(N/N_t)/5, 1).
    """
    n_docs = index.n_docs
    log_n = _log_prd_size(prd)
    q_idf = [(q, idf_capped(n_docs, index.df(q))) for q in query_terms]
    out = []
    for term in _candidate_universe(prd, terms):
        idf_t = idf_capped(n_docs, index.df(term))
        s = 0.0
        for q, idf_q in q_idf:
            co = 0.0
            for doc in prd.docs:
                co += doc.tf.get(term, 0) * doc.tf.get(q, 0)
            codegree = math.log10(co + 1.0) * idf_t / log_n if log_n else 0.0
            s += idf_q * math.log10(delta + codegree)
        out.append(CandidateTerm(term, s, "lca"))
    return out


def score_lcanew(
    prd: PseudoRelevantSet,
    query_terms: Sequence[str],
    index: CorpusIndex,
    delta: float = 0.1,
    terms: Optional[Iterable[str]] = None,
) -> list[CandidateTerm]:
    """Modified LCA.

    Three changes against the original: co-occurrence in a document is
    bounded by the *minimum* of the two term frequencies (scaled by the idf
    of the rarer-in-document term, clamped at 0, and by the document's
    normalized similarity); idf moves out of the co-degree; Robertson's idf
    replaces the capped form:

        co(t,q)       = sum_PRD min(tf(t,d), tf(q,d)) * max(idf_min_tf, 0)
                                 * Sim(d,Q)/max Sim
        codegree(t,q) = log10(co+1) / log10(n)
        S(t)          = sum over query terms q of idf_q * log10(delta + codegree)
    """
    n_docs = index.n_docs
    log_n = _log_prd_size(prd)
    max_sim = prd.max_sim
    q_idf = [(q, idf_robertson(n_docs, index.df(q))) for q in query_terms]
    out = []
    for term in _candidate_universe(prd, terms):
        idf_t = idf_robertson(n_docs, index.df(term))
        s = 0.0
        for q, idf_q in q_idf:
            co = 0.0
            for doc in prd.docs:
                tf_t = doc.tf.get(term, 0)
                tf_q = doc.tf.get(q, 0)
                m = min(tf_t, tf_q)
                if m == 0:
                    continue
                if tf_t < tf_q:
                    idf_min = idf_t
                elif tf_q < tf_t:
                    idf_min = idf_q
                else:
                    # equal term frequencies: take the smaller idf
                    idf_min = min(idf_t, idf_q)
                co += m * max(idf_min, 0.0) * doc.sim / max_sim
            codegree = math.log10(co + 1.0) / log_n if log_n else 0.0
            s += idf_q * math.log10(delta + codegree)
        out.append(CandidateTerm(term, s, "lcanew"))
    return out


def score_rm3(
    prd: PseudoRelevantSet,
    query_terms: Sequence[str],
    index: CorpusIndex,
    mu: float = 2500.0,
    terms: Optional[Iterable[str]] = None,
) -> list[CandidateTerm]:
    """Relevance-model association score under i.i.d. sampling:

        S(t) = (1/n) * sum_PRD (tf(t,d)/|d|)
                       * prod over q of (tf(q,d) + mu*p_c(q)) / (|d| + mu)

    Each feedback document is a unigram model with a uniform prior 1/n;
    query likelihoods are Dirichlet-smoothed with parameter mu.  Scores are
    non-negative.
    """
    q_pc = [(q, index.p_c(q)) for q in query_terms]
    inv_n = 1.0 / prd.n
    doc_like = []
    for doc in prd.docs:
        dl = index.doc_len[doc.ordinal]
        likelihood = inv_n
        for q, pc in q_pc:
            likelihood *= (doc.tf.get(q, 0) + mu * pc) / (dl + mu)
        doc_like.append((doc, dl, likelihood))
    out = []
    for term in _candidate_universe(prd, terms):
        s = 0.0
        for doc, dl, likelihood in doc_like:
            tf = doc.tf.get(term, 0)
            if tf:
                s += tf / dl * likelihood
        out.append(CandidateTerm(term, s, "rm3"))
    return out


SCORER_KIND = {
    "kld": "distribution",
    "bo1": "distribution",
    "bo1new": "distribution",
    "lca": "association",
    "lcanew": "association",
    "rm3": "association",
}


def score_candidates(
    method: str,
    prd: PseudoRelevantSet,
    query: WeightedQuery,
    index: CorpusIndex,
    params: ExpansionParams,
    terms: Optional[Iterable[str]] = None,
) -> list[CandidateTerm]:
    """Dispatch to the scorer for `method`."""
    if method == "kld":
        return score_kld(prd, index, terms)
    if method == "bo1":
        return score_bo1(prd, index, terms)
    if method == "bo1new":
        return score_bo1new(prd, index, terms)
    qterms = query_term_occurrences(query)
    if method == "lca":
        return score_lca(prd, qterms, index, params.delta, terms)
    if method == "lcanew":
        return score_lcanew(prd, qterms, index, params.delta, terms)
    if method == "rm3":
        return score_rm3(prd, qterms, index, params.mu, terms)
    raise ValueError(f"unknown expansion method {method!r}")


def query_term_occurrences(query: WeightedQuery) -> list[str]:
    """Original query terms with duplicates, as q_1..q_k occurrences."""
    out = []
    for term in sorted(query.original_tf):
        out.extend([term] * query.original_tf[term])
    return out


def top_candidates(candidates: Sequence[CandidateTerm], t: int) -> list[CandidateTerm]:
    """The t highest-scored candidates; score ties break lexicographically."""
    return sorted(candidates, key=lambda c: (-c.raw_score, c.term))[:t]


# --- merge schemes ---------------------------------------------------------


def _original_scores(query: WeightedQuery) -> dict[str, float]:
    """score_orig(t) = (1 + ln tf(t,Q)) / (1 + max ln tf(t',Q))."""
    max_log = max(math.log(tf) for tf in query.original_tf.values())
    return {
        t: (1.0 + math.log(tf)) / (1.0 + max_log)
        for t, tf in query.original_tf.items()
    }


def merge_additive(
    query: WeightedQuery,
    candidates: Sequence[CandidateTerm],
    score_max: Optional[float] = None,
) -> WeightedQuery:
    """Additive merge: max-normalized sides, summed where a term is on both.

        weight(t) = score_orig(t) + S(t)/max S

    Candidates whose merged weight is non-positive (possible for negative
    expansion scores) are dropped.  If no candidate has a positive score the
    merge degenerates to the original-query side alone.
    """
    orig = _original_scores(query)
    if score_max is None:
        score_max = max((c.raw_score for c in candidates), default=0.0)
    if not candidates or score_max <= 0:
        log.warning(
            "query %s: no positively scored expansion candidates; "
            "keeping the original query",
            query.query_id,
        )
        return WeightedQuery(query.query_id, dict(orig), dict(query.original_tf))
    weights = dict(orig)
    for c in candidates:
        weights[c.term] = weights.get(c.term, 0.0) + c.raw_score / score_max
    positive = {t: w for t, w in weights.items() if w > 0}
    return WeightedQuery(query.query_id, positive, dict(query.original_tf))


def merge_lca_rank(
    query: WeightedQuery,
    candidates: Sequence[CandidateTerm],
    t: int,
) -> WeightedQuery:
    """Rank-linear merge used by original LCA.

    The j-th best candidate (j = 0 for the best) gets expansion weight
    1.0 - 0.9*j/T, added to score_orig as in the additive merge.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    ranked = sorted(candidates, key=lambda c: (-c.raw_score, c.term))[:t]
    weights = dict(_original_scores(query))
    for j, c in enumerate(ranked):
        w = 1.0 - 0.9 * j / t
        weights[c.term] = weights.get(c.term, 0.0) + w
    return WeightedQuery(query.query_id, weights, dict(query.original_tf))


def merge_rm3(
    query: WeightedQuery,
    candidates: Sequence[CandidateTerm],
    alpha: float = 0.5,
) -> WeightedQuery:
    """Interpolated merge:

        weight(t) = alpha * S(t)/sum S  +  (1-alpha) * tf(t,Q)/|Q|

    The expansion side is the feedback distribution normalized over the
    candidate vocabulary; the original side is the query's maximum
    likelihood model.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    q_len = sum(query.original_tf.values())
    ml_model = {t: tf / q_len for t, tf in query.original_tf.items()}
    total = sum(c.raw_score for c in candidates)
    if total <= 0:
        log.warning(
            "query %s: relevance model has zero mass; keeping the original query",
            query.query_id,
        )
        return WeightedQuery(query.query_id, dict(ml_model), dict(query.original_tf))
    weights = {t: (1.0 - alpha) * w for t, w in ml_model.items()}
    for c in candidates:
        weights[c.term] = weights.get(c.term, 0.0) + alpha * c.raw_score / total
    positive = {t: w for t, w in weights.items() if w > 0}
    return WeightedQuery(query.query_id, positive, dict(query.original_tf))


MERGE_SCHEME = {
    "kld": "additive",
    "bo1": "additive",
    "bo1new": "additive",
    "lcanew": "additive",
    "lca": "rank",
    "rm3": "interpolated",
}


def expand(
    query: WeightedQuery,
    index: CorpusIndex,
    method: str,
    params: Optional[ExpansionParams] = None,
    weighting=None,
) -> WeightedQuery:
    """Full expansion pipeline for one query.

    Retrieve, take the top-D pseudo-relevant documents, score candidates
    with `method`, keep the top-T, and merge them into the query with the
    method's merge scheme.  With an empty feedback set the query is returned
    unchanged.
    """
    if method not in METHODS:
        raise ValueError(f"unknown expansion method {method!r}")
    params = params or ExpansionParams.for_method(method)
    prd = pseudo_relevant_set(query, index, params.D, weighting)
    if prd.n == 0:
        log.warning("query %s: no feedback documents; query left unexpanded", query.query_id)
        return query
    candidates = score_candidates(method, prd, query, index, params)
    top = top_candidates(candidates, params.T)
    if MERGE_SCHEME[method] == "rank":
        return merge_lca_rank(query, top, params.T)
    if MERGE_SCHEME[method] == "interpolated":
        return merge_rm3(query, top, params.alpha)
    return merge_additive(query, top)
