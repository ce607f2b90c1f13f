"""Run-file scoring against relevance judgments, plus method comparison.

Metrics follow trec_eval conventions: rankings are truncated to an
evaluation depth (default 1000), queries without any relevant document are
excluded from MAP, and precision@10 pads short rankings with non-relevant
documents.  Method comparisons report MAP / P@10 / #rel_ret / the share of
queries improved by more than a threshold over a baseline, and mark
statistical significance with a two-tailed paired t-test at 95%.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Mapping, Optional, Sequence

from scipy.special import betainc

Qrels = dict[str, dict[str, int]]
Run = dict[str, list[str]]


def load_qrels(source) -> Qrels:
    """Parse whitespace-separated `query_id 0 doc_id grade` lines.

    `source` is a path or an open text file.
    """
    qrels: Qrels = {}
    close = False
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        source = open(source, encoding="utf-8")
        close = True
    try:
        for line in source:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ValueError(f"malformed qrels line: {line.rstrip()!r}")
            qid, _, doc_id, grade = parts
            qrels.setdefault(qid, {})[doc_id] = int(grade)
    finally:
        if close:
            source.close()
    return qrels


def load_run(source) -> Run:
    """Parse a TREC run file (path or open text file) into
    query_id -> doc_ids in rank order."""
    rows: dict[str, list[tuple[int, str]]] = {}
    close = False
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        source = open(source, encoding="utf-8")
        close = True
    try:
        for line in source:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise ValueError(f"malformed run line: {line.rstrip()!r}")
            qid, _, doc_id, rank, _score, _tag = parts
            rows.setdefault(qid, []).append((int(rank), doc_id))
    finally:
        if close:
            source.close()
    return {qid: [d for _, d in sorted(pairs)] for qid, pairs in rows.items()}


def _relevant(qrels: Qrels, query_id: str) -> set[str]:
    return {d for d, g in qrels.get(query_id, {}).items() if g >= 1}


def average_precision(
    ranking: Sequence[str], qrels: Qrels, query_id: str
) -> Optional[float]:
    """Mean of precision at each relevant retrieved rank, over all relevant
    documents; None when the query has no relevant documents."""
    relevant = _relevant(qrels, query_id)
    if not relevant:
        return None
    hits = 0
    total = 0.0
    for rank, doc_id in enumerate(ranking, start=1):
        if doc_id in relevant:
            hits += 1
            total += hits / rank
    return total / len(relevant)


def precision_at(
    ranking: Sequence[str], qrels: Qrels, query_id: str, k: int = 10
) -> float:
    """Fraction of the first k ranks that are relevant (short rankings are
    padded with non-relevant documents)."""
    relevant = _relevant(qrels, query_id)
    return sum(1 for d in ranking[:k] if d in relevant) / k


@dataclass(frozen=True)
class QueryEval:
    ap: float
    p10: float
    rel_ret: int
    rel_total: int


@dataclass
class EvalReport:
    per_query: dict[str, QueryEval]
    map_score: float
    p10_mean: float
    rel_ret_total: int
    # judged queries without any relevant document: excluded from MAP
    excluded_queries: list[str] = field(default_factory=list)

    @property
    def query_ids(self) -> list[str]:
        return sorted(self.per_query)

    def ap_vector(self, query_ids: Sequence[str]) -> list[float]:
        return [self.per_query[q].ap for q in query_ids]


def evaluate_run(run: Run, qrels: Qrels, depth: int = 1000) -> EvalReport:
    """Score one run; only judged queries with at least one relevant
    document participate.  Queries without relevant documents are listed in
    `excluded_queries` rather than averaged."""
    per_query: dict[str, QueryEval] = {}
    excluded: list[str] = []
    for qid in sorted(qrels):
        relevant = _relevant(qrels, qid)
        if not relevant:
            excluded.append(qid)
            continue
        ranking = run.get(qid, [])[:depth]
        ap = average_precision(ranking, qrels, qid)
        p10 = precision_at(ranking, qrels, qid)
        rel_ret = sum(1 for d in ranking if d in relevant)
        per_query[qid] = QueryEval(ap, p10, rel_ret, len(relevant))
    if not per_query:
        raise ValueError("no judged queries with relevant documents")
    n = len(per_query)
    return EvalReport(
        per_query,
        map_score=sum(q.ap for q in per_query.values()) / n,
        p10_mean=sum(q.p10 for q in per_query.values()) / n,
        rel_ret_total=sum(q.rel_ret for q in per_query.values()),
        excluded_queries=excluded,
    )


def _common_queries(a: EvalReport, b: EvalReport) -> list[str]:
    qa, qb = set(a.per_query), set(b.per_query)
    if qa != qb:
        raise ValueError(
            "query sets differ: only in first run "
            f"{sorted(qa - qb)}, only in second {sorted(qb - qa)}"
        )
    return sorted(qa)


def improved_queries(
    report: EvalReport, baseline: EvalReport, threshold: float = 0.05
) -> list[str]:
    """Queries whose AP beats the baseline by strictly more than `threshold`."""
    return [
        q
        for q in _common_queries(report, baseline)
        if report.per_query[q].ap > baseline.per_query[q].ap * (1.0 + threshold)
    ]


def pct_improved(
    report: EvalReport, baseline: EvalReport, threshold: float = 0.05
) -> float:
    """Percentage of queries improved by more than `threshold` over baseline."""
    queries = _common_queries(report, baseline)
    return 100.0 * len(improved_queries(report, baseline, threshold)) / len(queries)


@dataclass(frozen=True)
class TTestResult:
    t_stat: float
    p_value: float
    significant_95: bool
    degenerate: bool = False


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-tailed paired t-test on the differences a - b.

    The p-value comes from the Student-t CDF via the regularized incomplete
    beta function.  Degenerate inputs are flagged: all-zero differences give
    p=1, zero variance with nonzero mean gives p=0.
    """
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    n = len(a)
    if n < 2:
        raise ValueError("need at least two pairs")
    diffs = [x - y for x, y in zip(a, b)]
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        if mean == 0.0:
            return TTestResult(0.0, 1.0, False, degenerate=True)
        t = math.inf if mean > 0 else -math.inf
        return TTestResult(t, 0.0, True, degenerate=True)
    t = mean / math.sqrt(var / n)
    dof = n - 1
    p = float(betainc(dof / 2.0, 0.5, dof / (dof + t * t)))
    return TTestResult(t, p, p < 0.05)


# --- comparison tables ------------------------------------------------------

# reference-run superscripts in the customary order
DEFAULT_MARKERS = {
    "baseline": "B",
    "kld": "k",
    "bo1new": "b",
    "lcanew": "l",
    "rm3": "r",
}


@dataclass
class ComparisonRow:
    name: str
    map_score: float
    map_delta_pct: float
    p10: float
    rel_ret: int
    improved_pct: float
    improved_count: int
    markers: str


@dataclass
class ComparisonTable:
    rows: list[ComparisonRow]
    baseline: str
    reports: dict[str, EvalReport]

    def render_text(self) -> str:
        header = (
            f"{'method':<12} {'MAP':>8} {'%ch':>7} {'P@10':>8} "
            f"{'rel_ret':>8} {'%>base':>7} {'n>base':>6}  sig"
        )
        lines = [header, "-" * len(header)]
        for r in self.rows:
            lines.append(
                f"{r.name:<12} {r.map_score:>8.4f} {r.map_delta_pct:>7.1f} "
                f"{r.p10:>8.4f} {r.rel_ret:>8d} {r.improved_pct:>7.1f} "
                f"{r.improved_count:>6d}  {r.markers}"
            )
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "baseline": self.baseline,
            "rows": [
                {
                    "name": r.name,
                    "map": r.map_score,
                    "map_delta_pct": r.map_delta_pct,
                    "p10": r.p10,
                    "rel_ret": r.rel_ret,
                    "improved_pct": r.improved_pct,
                    "improved_count": r.improved_count,
                    "significant_vs": sorted(r.markers),
                }
                for r in self.rows
            ],
            "per_query_ap": {
                name: {q: e.ap for q, e in rep.per_query.items()}
                for name, rep in self.reports.items()
            },
        }


def compare_table(
    runs: Mapping[str, Run],
    baseline: str,
    qrels: Qrels,
    depth: int = 1000,
    markers: Optional[Mapping[str, str]] = None,
    threshold: float = 0.05,
) -> ComparisonTable:
    """Evaluate every run and assemble the comparison table.

    `markers` maps reference run names to superscript letters; a letter is
    attached to a row iff the two-tailed paired t-test against that reference
    is significant at 95%.
    """
    if baseline not in runs:
        raise ValueError(f"baseline run {baseline!r} not among runs")
    markers = markers if markers is not None else {
        name: mark for name, mark in DEFAULT_MARKERS.items() if name in runs
    }
    reports = {name: evaluate_run(run, qrels, depth) for name, run in runs.items()}
    base = reports[baseline]
    rows = []
    for name, report in reports.items():
        queries = _common_queries(report, base)
        improved = improved_queries(report, base, threshold)
        marks = []
        for ref_name, letter in markers.items():
            if ref_name == name or ref_name not in reports:
                continue
            ref = reports[ref_name]
            test = paired_t_test(
                report.ap_vector(queries), ref.ap_vector(queries)
            )
            if test.significant_95:
                marks.append(letter)
        delta = (
            0.0
            if name == baseline
            else 100.0 * (report.map_score - base.map_score) / base.map_score
        )
        rows.append(
            ComparisonRow(
                name=name,
                map_score=report.map_score,
                map_delta_pct=delta,
                p10=report.p10_mean,
                rel_ret=report.rel_ret_total,
                improved_pct=100.0 * len(improved) / len(queries),
                improved_count=len(improved),
                markers="".join(sorted(marks)),
            )
        )
    return ComparisonTable(rows, baseline, reports)


def write_json_report(table: ComparisonTable, fh: IO[str]) -> None:
    json.dump(table.to_json(), fh, indent=2, sort_keys=True)
    fh.write("\n")
