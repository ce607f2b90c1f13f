"""Command-line interface for batch retrieval experiments.

Verbs: index, search, expand, run, eval, sweep.  All commands are
deterministic given fixed inputs; outputs are written atomically.
"""

from __future__ import annotations

import argparse
import configparser
import contextlib
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .analysis import AnalyzerConfig, analyze, load_stopwords
from .combine import (
    CombinationParams,
    MethodSpec,
    default_method_matrix,
    run_matrix,
)
from .evaluation import (
    compare_table,
    evaluate_run,
    load_qrels,
    load_run,
    write_json_report,
)
from .expansion import ExpansionParams, METHODS, expand
from .index import CorpusIndexError, build_index, load_index, save_index
from .retrieval import Bm25Weighting, Ifb2Weighting, WeightedQuery, retrieve, write_run
from .trec import parse_topics, parse_trec_documents, read_plain_directory

log = logging.getLogger("qexpand")


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _require_path(path: str) -> str:
    if not os.path.exists(path):
        raise CliError(f"path does not exist: {path}", code=2)
    return path


def _analyzer_from_args(args) -> AnalyzerConfig:
    if args.no_stopwords:
        stopwords = frozenset()
    elif args.stopwords:
        stopwords = load_stopwords(_require_path(args.stopwords))
    else:
        return AnalyzerConfig(
            stemmer="none" if args.no_stem else "porter",
            lowercase=not args.no_lowercase,
        )
    return AnalyzerConfig(
        stopwords=stopwords,
        stemmer="none" if args.no_stem else "porter",
        lowercase=not args.no_lowercase,
    )


def _weighting_from_args(args):
    if getattr(args, "weighting", "ifb2") == "bm25":
        return Bm25Weighting(k1=args.k1, b=args.b)
    return Ifb2Weighting(c=args.c)


def _load_documents(path: str, fmt: str, include_headline: bool):
    if fmt == "dir":
        if not os.path.isdir(path):
            raise CliError(f"not a directory: {path}", code=2)
        return read_plain_directory(path)
    docs = []
    files = [path]
    if os.path.isdir(path):
        files = sorted(
            os.path.join(path, name)
            for name in os.listdir(path)
            if os.path.isfile(os.path.join(path, name))
        )
    for f in files:
        with open(f, "rb") as fh:
            parsed, errors = parse_trec_documents(fh, include_headline)
        for err in errors:
            log.warning("%s: offset %d: %s", f, err.offset, err.message)
        docs.extend(parsed)
    return docs


def _load_topics(path: str):
    with open(_require_path(path), "rb") as fh:
        topics, errors = parse_topics(fh)
    for err in errors:
        log.warning("%s: offset %d: %s", path, err.offset, err.message)
    return topics


def _queries_from_topics(topics, field: str, config: AnalyzerConfig):
    queries = []
    for topic in topics:
        text = topic.title if field == "title" else topic.description
        terms = analyze(text, config)
        if not terms:
            log.warning("topic %s: empty %s field after analysis; skipped", topic.query_id, field)
            continue
        queries.append(WeightedQuery.from_terms(topic.query_id, terms))
    return queries


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
        return
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        yield fh
    os.replace(tmp, path)


# --- commands ---------------------------------------------------------------


def cmd_index(args) -> int:
    _require_path(args.corpus)
    if os.path.exists(args.out) and not args.force:
        raise CliError(f"index already exists: {args.out} (use --force to rebuild)")
    config = _analyzer_from_args(args)
    docs = _load_documents(args.corpus, args.format, not args.no_headline)
    try:
        index = build_index(docs, config)
    except CorpusIndexError as exc:
        raise CliError(f"index build failed: {exc}") from exc
    save_index(index, args.out)
    print(f"N={index.n_docs} vocab={index.vocab_size} tokens={index.total_tokens}")
    return 0


def cmd_search(args) -> int:
    index = load_index(_require_path(args.index))
    topics = _load_topics(args.topics)
    queries = _queries_from_topics(topics, args.field, index.config)
    weighting = _weighting_from_args(args)
    results = [(q.query_id, retrieve(q, index, args.k, weighting)) for q in queries]
    with _output(args.out) as fh:
        write_run(fh, results, args.tag)
    return 0


def cmd_expand(args) -> int:
    index = load_index(_require_path(args.index))
    topics = _load_topics(args.topics)
    queries = _queries_from_topics(topics, args.field, index.config)
    params = ExpansionParams.for_method(args.method)
    overrides = {
        name: getattr(args, name)
        for name in ("D", "T", "delta", "mu", "alpha")
        if getattr(args, name) is not None
    }
    if overrides:
        params = ExpansionParams(
            D=overrides.get("D", params.D),
            T=overrides.get("T", params.T),
            delta=overrides.get("delta", params.delta),
            mu=overrides.get("mu", params.mu),
            alpha=overrides.get("alpha", params.alpha),
        )
    weighting = _weighting_from_args(args)
    with _output(args.out) as fh:
        for query in queries:
            expanded = expand(query, index, args.method, params, weighting)
            for term, weight in sorted(expanded.terms.items(), key=lambda kv: (-kv[1], kv[0])):
                fh.write(f"{expanded.query_id}\t{term}\t{weight:.6f}\n")
    return 0


@dataclass
class ExperimentConfig:
    index_path: str
    topics_path: str
    qrels_path: Optional[str]
    query_field: str
    output_dir: str
    k: int
    depth: int
    specs: list[MethodSpec]


def _spec_from_section(name: str, section) -> MethodSpec:
    kind = section.get("type", "expansion")
    if kind == "baseline":
        return MethodSpec(name, "baseline")
    if kind == "expansion":
        method = section.get("method", name)
        if method not in METHODS:
            raise CliError(f"method section {name!r}: unknown method {method!r}", code=2)
        defaults = ExpansionParams.for_method(method)
        params = ExpansionParams(
            D=section.getint("D", defaults.D),
            T=section.getint("T", defaults.T),
            delta=section.getfloat("delta", defaults.delta),
            mu=section.getfloat("mu", defaults.mu),
            alpha=section.getfloat("alpha", defaults.alpha),
        )
        return MethodSpec(name, "expansion", method=method, expansion=params)
    if kind == "combination":
        params = CombinationParams(
            dist_method=section.get("dist", "kld"),
            assoc_method=section.get("assoc", "lcanew") or None,
            D=section.getint("D", 10),
            T=section.getint("T", 100),
            D_prime=section.getint("D_prime", 50),
            T_prime=section.getint("T_prime", 40),
            delta=section.getfloat("delta", 0.1),
            mu=section.getfloat("mu", 2500.0),
        )
        return MethodSpec(name, "combination", combination=params)
    raise CliError(f"method section {name!r}: unknown type {kind!r}", code=2)


def load_experiment_config(path: str) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise CliError(f"cannot read config: {path}", code=2)
    if "experiment" not in parser:
        raise CliError(f"{path}: missing [experiment] section", code=2)
    exp = parser["experiment"]
    for key in ("index", "topics"):
        if key not in exp:
            raise CliError(f"{path}: [experiment] needs '{key}'", code=2)
    field = exp.get("query_field", "title")
    if field not in ("title", "desc"):
        raise CliError(f"{path}: query_field must be 'title' or 'desc'", code=2)
    specs = []
    for section_name in parser.sections():
        if section_name.startswith("method:"):
            try:
                specs.append(
                    _spec_from_section(section_name.split(":", 1)[1], parser[section_name])
                )
            except ValueError as exc:
                raise CliError(f"{path}: [{section_name}]: {exc}", code=2) from exc
    if not specs:
        specs = default_method_matrix()
    return ExperimentConfig(
        index_path=_require_path(exp["index"]),
        topics_path=_require_path(exp["topics"]),
        qrels_path=_require_path(exp["qrels"]) if exp.get("qrels") else None,
        query_field=field,
        output_dir=exp.get("output_dir", "runs"),
        k=exp.getint("k", 1000),
        depth=exp.getint("depth", 1000),
        specs=specs,
    )


def cmd_run(args) -> int:
    config = load_experiment_config(_require_path(args.config))
    index = load_index(config.index_path)
    topics = _load_topics(config.topics_path)
    queries = _queries_from_topics(topics, config.query_field, index.config)
    if not queries:
        raise CliError("no usable queries in topics file")
    paths = run_matrix(queries, index, config.specs, config.output_dir, config.k)
    for name, path in paths.items():
        print(f"{name}: {path}")
    if config.qrels_path:
        qrels = load_qrels(config.qrels_path)
        runs = {name: load_run(path) for name, path in paths.items()}
        baseline = "baseline" if "baseline" in runs else next(iter(runs))
        table = compare_table(runs, baseline, qrels, depth=config.depth)
        print(table.render_text())
        report_path = os.path.join(config.output_dir, "report.json")
        with _output(report_path) as fh:
            write_json_report(table, fh)
        print(f"report: {report_path}")
    return 0


def cmd_eval(args) -> int:
    qrels = load_qrels(_require_path(args.qrels))
    runs = {}
    baseline_name = os.path.splitext(os.path.basename(args.baseline))[0]
    runs[baseline_name] = load_run(_require_path(args.baseline))
    for path in args.runs:
        name = os.path.splitext(os.path.basename(path))[0]
        if name in runs:
            raise CliError(f"duplicate run name {name!r}", code=2)
        runs[name] = load_run(_require_path(path))
    try:
        table = compare_table(runs, baseline_name, qrels, depth=args.depth)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(table.render_text())
    if args.json:
        with _output(args.json) as fh:
            write_json_report(table, fh)
    return 0


def _parse_range(text: str) -> list[int]:
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) == 2:
            start, stop, step = parts[0], parts[1], 1
        elif len(parts) == 3:
            start, stop, step = parts
        else:
            raise CliError(f"bad range: {text!r}", code=2)
        if step < 1 or stop < start:
            raise CliError(f"bad range: {text!r}", code=2)
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",") if p]


def cmd_sweep(args) -> int:
    index = load_index(_require_path(args.index))
    topics = _load_topics(args.topics)
    qrels = load_qrels(_require_path(args.qrels))
    queries = _queries_from_topics(topics, args.field, index.config)
    if not queries:
        raise CliError("no usable queries in topics file")
    d_values = _parse_range(args.D)
    t_values = _parse_range(args.T)
    if not d_values or not t_values:
        raise CliError("empty sweep range", code=2)
    weighting = _weighting_from_args(args)
    base = ExpansionParams.for_method(args.method)
    with _output(args.out) as fh:
        fh.write("D,T,map\n")
        for d in d_values:
            for t in t_values:
                params = ExpansionParams(
                    D=d, T=t, delta=base.delta, mu=base.mu, alpha=base.alpha
                )
                run = {}
                for query in queries:
                    expanded = expand(query, index, args.method, params, weighting)
                    ranking = retrieve(expanded, index, args.k, weighting)
                    run[query.query_id] = [sd.doc_id for sd in ranking]
                report = evaluate_run(run, qrels, depth=args.depth)
                fh.write(f"{d},{t},{report.map_score:.6f}\n")
    return 0


# --- argument parsing --------------------------------------------------------


def _add_analyzer_flags(p):
    p.add_argument("--stopwords", help="stopword file (one term per line, # comments)")
    p.add_argument("--no-stopwords", action="store_true", help="disable stopword removal")
    p.add_argument("--no-stem", action="store_true", help="disable Porter stemming")
    p.add_argument("--no-lowercase", action="store_true", help="keep original case")


def _add_weighting_flags(p):
    p.add_argument("--weighting", choices=("ifb2", "bm25"), default="ifb2")
    p.add_argument("--c", type=float, default=1.0, help="IFB2 tf normalization constant")
    p.add_argument("--k1", type=float, default=1.2, help="BM25 k1")
    p.add_argument("--b", type=float, default=0.75, help="BM25 b")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qexpand",
        description="Retrieval with automatic query expansion and TREC-style evaluation",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build and persist an index")
    p.add_argument("corpus", help="TREC file/directory, or a plain directory with --format dir")
    p.add_argument("--format", choices=("trec", "dir"), default="trec")
    p.add_argument("--out", required=True, help="index file to write")
    p.add_argument("--force", action="store_true", help="overwrite an existing index")
    p.add_argument("--no-headline", action="store_true", help="skip HEADLINE/TITLE sections")
    _add_analyzer_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="rank documents for each topic")
    p.add_argument("--index", required=True)
    p.add_argument("--topics", required=True)
    p.add_argument("--field", choices=("title", "desc"), default="title")
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--tag", default="qexpand")
    p.add_argument("--out", help="run file (default: stdout)")
    _add_weighting_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("expand", help="print expanded queries as qid<TAB>term<TAB>weight")
    p.add_argument("--index", required=True)
    p.add_argument("--topics", required=True)
    p.add_argument("--field", choices=("title", "desc"), default="title")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--D", type=int)
    p.add_argument("--T", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--out", help="output file (default: stdout)")
    _add_weighting_flags(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("run", help="run a configured experiment matrix")
    p.add_argument("--config", required=True, help="experiment config (INI)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="compare runs against a baseline")
    p.add_argument("--qrels", required=True)
    p.add_argument("--baseline", required=True, help="baseline run file")
    p.add_argument("runs", nargs="*", help="run files to compare")
    p.add_argument("--depth", type=int, default=1000)
    p.add_argument("--json", help="write the machine-readable report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="MAP over a (D, T) parameter grid, as CSV")
    p.add_argument("--index", required=True)
    p.add_argument("--topics", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--D", required=True, help="range start:stop:step or comma list")
    p.add_argument("--T", required=True, help="range start:stop:step or comma list")
    p.add_argument("--field", choices=("title", "desc"), default="title")
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--depth", type=int, default=1000)
    p.add_argument("--out", help="CSV file (default: stdout)")
    _add_weighting_flags(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CliError as exc:
        print(f"qexpand: {exc}", file=sys.stderr)
        return exc.code
    except CorpusIndexError as exc:
        print(f"qexpand: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
