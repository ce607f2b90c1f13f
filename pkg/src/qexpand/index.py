"""Inverted index and collection statistics.

Stores per-document term frequencies only (no positions): every scoring
formula downstream consumes tf, df, cf, document length and N exclusively.
Document length counts post-analysis tokens, so collection statistics and
term frequencies share one token universe.

On-disk format (version 1), little-endian:

    magic b"QXIX" | u16 version | u64 payload length | payload | u32 CRC32

The payload is a length-prefixed JSON header (document table and analyzer
settings) followed by the term dictionary with delta-encoded, varint-packed
postings.  The CRC covers everything before it.  load(save(x)) is lossless.
"""

from __future__ import annotations

import json
import os
import struct
import zlib
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .analysis import AnalyzerConfig, analyze
from .trec import RawDocument

MAGIC = b"QXIX"
FORMAT_VERSION = 1


class CorpusIndexError(Exception):
    """Base for index build and I/O failures."""


class IndexBuildError(CorpusIndexError):
    pass


class IndexFormatError(CorpusIndexError):
    """Not an index file (bad magic) or structurally invalid."""


class IndexVersionError(CorpusIndexError):
    pass


class IndexTruncatedError(CorpusIndexError):
    pass


class IndexChecksumError(CorpusIndexError):
    pass


@dataclass(frozen=True)
class Posting:
    doc: int  # document ordinal
    tf: int


class TermRecord:
    """Dictionary entry: document frequency, collection frequency, postings."""

    __slots__ = ("term", "df", "cf", "postings")

    def __init__(self, term: str, postings: Sequence[Posting]):
        self.term = term
        self.postings = tuple(postings)
        self.df = len(self.postings)
        self.cf = sum(p.tf for p in self.postings)

    def __eq__(self, other):
        return (
            isinstance(other, TermRecord)
            and self.term == other.term
            and self.postings == other.postings
        )

    def __repr__(self):
        return f"TermRecord({self.term!r}, df={self.df}, cf={self.cf})"


class CorpusIndex:
    """Immutable index: term dictionary, postings, and collection stats."""

    def __init__(
        self,
        doc_ids: Sequence[str],
        doc_len: Sequence[int],
        terms: Mapping[str, TermRecord],
        config: AnalyzerConfig,
    ):
        self.doc_ids = list(doc_ids)
        self.doc_len = list(doc_len)
        self.terms = dict(terms)
        self.config = config
        self.total_tokens = sum(self.doc_len)
        self._ordinal = {doc_id: i for i, doc_id in enumerate(self.doc_ids)}
        vectors: list[dict[str, int]] = [{} for _ in self.doc_ids]
        for term, rec in self.terms.items():
            for p in rec.postings:
                vectors[p.doc][term] = p.tf
        self._doc_vectors = vectors

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def vocab_size(self) -> int:
        return len(self.terms)

    @property
    def avg_doc_len(self) -> float:
        return self.total_tokens / self.n_docs

    def df(self, term: str) -> int:
        rec = self.terms.get(term)
        return rec.df if rec else 0

    def cf(self, term: str) -> int:
        rec = self.terms.get(term)
        return rec.cf if rec else 0

    def postings(self, term: str) -> tuple[Posting, ...]:
        rec = self.terms.get(term)
        return rec.postings if rec else ()

    def p_c(self, term: str) -> float:
        """Collection unigram probability cf(t) / total tokens; 0 if unseen."""
        if self.total_tokens <= 0:
            raise ValueError("p_c undefined for an empty collection")
        return self.cf(term) / self.total_tokens

    def tf(self, term: str, doc: int) -> int:
        return self._doc_vectors[doc].get(term, 0)

    def doc_vector(self, doc: int) -> Mapping[str, int]:
        return self._doc_vectors[doc]

    def ordinal(self, doc_id: str) -> int:
        return self._ordinal[doc_id]


def build_index(documents: Iterable[RawDocument], config: AnalyzerConfig) -> CorpusIndex:
    """Analyze and index a document collection.

    Deterministic for a fixed input order; permuting documents changes only
    ordinals, never any statistic keyed by doc_id.
    """
    doc_ids: list[str] = []
    doc_len: list[int] = []
    by_term: dict[str, list[Posting]] = {}
    seen = set()
    for doc in documents:
        if doc.doc_id in seen:
            raise IndexBuildError(f"duplicate doc_id: {doc.doc_id!r}")
        seen.add(doc.doc_id)
        ordinal = len(doc_ids)
        doc_ids.append(doc.doc_id)
        counts = Counter(analyze(doc.text, config))
        doc_len.append(sum(counts.values()))
        for term in sorted(counts):
            by_term.setdefault(term, []).append(Posting(ordinal, counts[term]))
    if not doc_ids:
        raise IndexBuildError("empty collection")
    terms = {term: TermRecord(term, postings) for term, postings in by_term.items()}
    return CorpusIndex(doc_ids, doc_len, terms, config)


# --- persistence ---------------------------------------------------------


def _write_varint(out: bytearray, value: int) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


class _Reader:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise IndexTruncatedError("index file truncated")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def varint(self) -> int:
        shift = 0
        value = 0
        while True:
            byte = self.take(1)[0]
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7


def save_index(index: CorpusIndex, path) -> None:
    header = {
        "n_docs": index.n_docs,
        "total_tokens": index.total_tokens,
        "doc_ids": index.doc_ids,
        "doc_len": index.doc_len,
        "analyzer": index.config.to_dict(),
    }
    header_bytes = json.dumps(header, ensure_ascii=False).encode("utf-8")
    payload = bytearray()
    payload += struct.pack("<I", len(header_bytes))
    payload += header_bytes
    _write_varint(payload, len(index.terms))
    for term in sorted(index.terms):
        rec = index.terms[term]
        tb = term.encode("utf-8")
        payload += struct.pack("<H", len(tb))
        payload += tb
        _write_varint(payload, rec.df)
        prev = -1
        for p in rec.postings:
            _write_varint(payload, p.doc - prev - 1)
            _write_varint(payload, p.tf)
            prev = p.doc
    body = MAGIC + struct.pack("<HQ", FORMAT_VERSION, len(payload)) + bytes(payload)
    blob = body + struct.pack("<I", zlib.crc32(body))
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)


def load_index(path) -> CorpusIndex:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < len(MAGIC) or data[: len(MAGIC)] != MAGIC:
        raise IndexFormatError(f"{path}: not an index file (bad magic)")
    if len(data) < len(MAGIC) + 10:
        raise IndexTruncatedError(f"{path}: index file truncated")
    version, payload_len = struct.unpack_from("<HQ", data, len(MAGIC))
    if version != FORMAT_VERSION:
        raise IndexVersionError(
            f"{path}: index format version {version}, expected {FORMAT_VERSION}"
        )
    expected = len(MAGIC) + 10 + payload_len + 4
    if len(data) < expected:
        raise IndexTruncatedError(f"{path}: index file truncated")
    if len(data) > expected:
        raise IndexFormatError(f"{path}: trailing data after index payload")
    (crc,) = struct.unpack_from("<I", data, expected - 4)
    if zlib.crc32(data[: expected - 4]) != crc:
        raise IndexChecksumError(f"{path}: checksum mismatch")
    r = _Reader(data, len(MAGIC) + 10)
    (header_len,) = struct.unpack("<I", r.take(4))
    header = json.loads(r.take(header_len).decode("utf-8"))
    config = AnalyzerConfig.from_dict(header["analyzer"])
    n_terms = r.varint()
    terms: dict[str, TermRecord] = {}
    for _ in range(n_terms):
        (tlen,) = struct.unpack("<H", r.take(2))
        term = r.take(tlen).decode("utf-8")
        df = r.varint()
        postings = []
        prev = -1
        for _ in range(df):
            doc = prev + 1 + r.varint()
            tf = r.varint()
            postings.append(Posting(doc, tf))
            prev = doc
        terms[term] = TermRecord(term, postings)
    index = CorpusIndex(header["doc_ids"], header["doc_len"], terms, config)
    if index.total_tokens != header["total_tokens"] or index.n_docs != header["n_docs"]:
        raise IndexFormatError(f"{path}: header statistics disagree with document table")
    return index
