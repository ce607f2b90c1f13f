"""Combined query expansion: distribution selects and weights, association refines.

A distribution-based scorer picks a large candidate pool (top T terms from
the top D feedback documents) and fixes their weights.  An association-based
scorer, looking at a deeper pool of D' documents, then re-ranks exactly those
candidates; only the T' terms with the strongest query association survive.
The surviving terms keep their distribution weights, so the association step
influences *selection only*.

`run_matrix` executes a batch of method configurations over a query set and
writes one TREC run file per configuration, plus a JSON-lines audit trail for
the combination steps (candidates, association scores, final selection).
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from typing import Optional, Sequence

from .expansion import (
    ExpansionParams,
    expand,
    merge_additive,
    score_candidates,
    top_candidates,
)
from .index import CorpusIndex
from .retrieval import WeightedQuery, feedback_set, retrieve, write_run

log = logging.getLogger(__name__)

DIST_CHOICES = ("kld", "bo1new")
ASSOC_CHOICES = ("lcanew", "rm3")


@dataclass(frozen=True)
class CombinationParams:
    """Pool sizes for the two stages: T candidates from D docs, refined to
    T' using association evidence from D' docs."""

    dist_method: str = "kld"
    assoc_method: Optional[str] = "lcanew"  # None disables refinement
    D: int = 10
    T: int = 100
    D_prime: int = 50
    T_prime: int = 40
    delta: float = 0.1
    mu: float = 2500.0

    def __post_init__(self):
        if self.dist_method not in DIST_CHOICES:
            raise ValueError(f"dist_method must be one of {DIST_CHOICES}")
        if self.assoc_method is not None and self.assoc_method not in ASSOC_CHOICES:
            raise ValueError(f"assoc_method must be one of {ASSOC_CHOICES} or None")
        if self.T_prime > self.T:
            raise ValueError("T_prime must not exceed T")
        if self.D > self.D_prime:
            raise ValueError("D must not exceed D_prime")
        if min(self.D, self.T, self.D_prime, self.T_prime) < 1:
            raise ValueError("pool sizes must be >= 1")


def combine_expand(
    query: WeightedQuery,
    index: CorpusIndex,
    params: CombinationParams,
    weighting=None,
    audit: Optional[list] = None,
) -> WeightedQuery:
    """Expand one query with the two-stage combination.

    The initial retrieval is done once; the distribution stage sees its top D
    documents and the association stage the top D'.  Kept terms are merged
    with the original query using the distribution scores (max-normalized
    over the full candidate pool, so kept-term weights match what the
    distribution method alone would assign).
    """
    dist_params = ExpansionParams(D=params.D, T=params.T, delta=params.delta, mu=params.mu)
    ranking = retrieve(query, index, max(params.D_prime, params.D), weighting)
    prd_d = feedback_set(index, ranking[: params.D])
    if prd_d.n == 0:
        log.warning("query %s: no feedback documents; query left unexpanded", query.query_id)
        if audit is not None:
            audit.append({"query_id": query.query_id, "note": "empty feedback set"})
        return query
    dist_scores = score_candidates(
        params.dist_method, prd_d, query, index, dist_params
    )
    pool = top_candidates(dist_scores, params.T)
    score_max = max(c.raw_score for c in pool) if pool else 0.0
    dist_rank = {c.term: j for j, c in enumerate(pool)}

    if params.assoc_method is None:
        kept = pool[: params.T_prime]
        assoc_pairs = []
    else:
        prd_dp = feedback_set(index, ranking[: params.D_prime])
        assoc_scores = score_candidates(
            params.assoc_method,
            prd_dp,
            query,
            index,
            dist_params,
            terms=[c.term for c in pool],
        )
        # ties on association score keep the distribution ordering
        reranked = sorted(
            assoc_scores, key=lambda c: (-c.raw_score, dist_rank[c.term])
        )
        keep = {c.term for c in reranked[: params.T_prime]}
        kept = [c for c in pool if c.term in keep]
        assoc_pairs = [(c.term, c.raw_score) for c in reranked]

    if audit is not None:
        audit.append(
            {
                "query_id": query.query_id,
                "distribution": [(c.term, c.raw_score) for c in pool],
                "association": assoc_pairs,
                "selected": [c.term for c in kept],
            }
        )
    return merge_additive(query, kept, score_max=score_max)


# --- batch experiment runs --------------------------------------------------


@dataclass(frozen=True)
class MethodSpec:
    """One run configuration: the unexpanded baseline, a single expansion
    method, or a distribution+association combination."""

    name: str
    kind: str  # "baseline" | "expansion" | "combination"
    method: Optional[str] = None
    expansion: Optional[ExpansionParams] = None
    combination: Optional[CombinationParams] = None

    def __post_init__(self):
        if self.kind not in ("baseline", "expansion", "combination"):
            raise ValueError(f"unknown spec kind {self.kind!r}")
        if self.kind == "expansion" and self.method is None:
            raise ValueError(f"spec {self.name!r}: expansion needs a method")
        if self.kind == "combination" and self.combination is None:
            raise ValueError(f"spec {self.name!r}: combination needs parameters")


def default_method_matrix() -> list[MethodSpec]:
    """The full experiment matrix: baseline, six single methods, and the
    2x2 distribution/association combinations."""
    specs = [MethodSpec("baseline", "baseline")]
    for m in ("kld", "bo1", "bo1new", "lca", "lcanew", "rm3"):
        specs.append(
            MethodSpec(m, "expansion", method=m, expansion=ExpansionParams.for_method(m))
        )
    for name, dist, assoc in (
        ("kldlca", "kld", "lcanew"),
        ("kldrm3", "kld", "rm3"),
        ("bo1lca", "bo1new", "lcanew"),
        ("bo1rm3", "bo1new", "rm3"),
    ):
        specs.append(
            MethodSpec(
                name,
                "combination",
                combination=CombinationParams(dist_method=dist, assoc_method=assoc),
            )
        )
    return specs


def expanded_query(
    query: WeightedQuery,
    index: CorpusIndex,
    spec: MethodSpec,
    weighting=None,
    audit: Optional[list] = None,
) -> WeightedQuery:
    if spec.kind == "baseline":
        return query
    if spec.kind == "expansion":
        return expand(query, index, spec.method, spec.expansion, weighting)
    return combine_expand(query, index, spec.combination, weighting, audit)


def _atomic_write(path: str, write) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        write(fh)
    os.replace(tmp, path)


def run_matrix(
    queries: Sequence[WeightedQuery],
    index: CorpusIndex,
    specs: Sequence[MethodSpec],
    output_dir: str,
    k: int = 1000,
    weighting=None,
) -> dict[str, str]:
    """Run every configuration over every query; one TREC run file each.

    Per-query failures are logged and skip that query in that run only.
    Combination runs also write `<name>.audit.jsonl` with the stage-by-stage
    term lists.  Returns spec name -> run file path.
    """
    if not specs:
        raise ValueError("no method specs given")
    os.makedirs(output_dir, exist_ok=True)
    paths: dict[str, str] = {}
    for spec in specs:
        results = []
        audit: list = []
        for query in queries:
            try:
                wq = expanded_query(query, index, spec, weighting, audit)
                results.append((query.query_id, retrieve(wq, index, k, weighting)))
            except Exception:
                log.exception(
                    "query %s failed under %s; skipped in this run",
                    query.query_id,
                    spec.name,
                )
        path = os.path.join(output_dir, f"{spec.name}.run")
        _atomic_write(path, lambda fh, r=results, n=spec.name: write_run(fh, r, n))
        paths[spec.name] = path
        if spec.kind == "combination":
            audit_path = os.path.join(output_dir, f"{spec.name}.audit.jsonl")
            _atomic_write(
                audit_path,
                lambda fh, a=audit: fh.writelines(
                    json.dumps(entry) + "\n" for entry in a
                ),
            )
    return paths
