"""Readers and writers for TREC-style collection files.

Documents arrive as concatenated ``<DOC>`` SGML blocks; topics as ``<top>``
blocks with ``<num>/<title>/<desc>/<narr>`` sections.  Malformed records are
reported (with their byte offset) and skipped, so one bad block never aborts
a multi-gigabyte parse.  A plain mode reads one document per file from a
directory.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import IO, Iterable, Union

Source = Union[bytes, str, IO[bytes]]


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    text: str


@dataclass(frozen=True)
class Topic:
    query_id: str
    title: str
    description: str = ""
    narrative: str = ""


@dataclass(frozen=True)
class RecordError:
    """A record-level parse failure; `offset` is a byte offset into the input."""

    offset: int
    message: str


_DOC_RE = re.compile(rb"<DOC>(.*?)</DOC>", re.S)
_DOCNO_RE = re.compile(rb"<DOCNO>(.*?)</DOCNO>", re.S)
_BODY_RES = {
    "text": re.compile(rb"<TEXT>(.*?)</TEXT>", re.S),
    "headline": re.compile(rb"<(?:HEADLINE|TITLE)>(.*?)</(?:HEADLINE|TITLE)>", re.S),
}
_TAG_RE = re.compile(rb"<[^>]*>")

_TOP_RE = re.compile(rb"<top>(.*?)</top>", re.S | re.I)
_FIELD_SPLIT_RE = re.compile(r"<(/?[A-Za-z]+)>")
_FIELD_LABEL_RE = re.compile(r"^\s*(?:Number|Topic|Description|Narrative)\s*:\s*", re.I)


def _as_bytes(source: Source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, str):
        return source.encode("utf-8")
    data = source.read()
    return data.encode("utf-8") if isinstance(data, str) else data


def _decode(raw: bytes) -> str:
    return raw.decode("utf-8", errors="replace")


def parse_trec_documents(
    source: Source, include_headline: bool = True
) -> tuple[list[RawDocument], list[RecordError]]:
    """Parse concatenated ``<DOC>`` blocks.

    Returns the documents plus a list of record-level errors for blocks that
    were skipped (e.g. missing ``<DOCNO>``).
    """
    data = _as_bytes(source)
    docs: list[RawDocument] = []
    errors: list[RecordError] = []
    for m in _DOC_RE.finditer(data):
        block = m.group(1)
        offset = m.start()
        docno = _DOCNO_RE.search(block)
        doc_id = _decode(docno.group(1)).strip() if docno else ""
        if not doc_id:
            errors.append(RecordError(offset, "document block without <DOCNO>"))
            continue
        parts = []
        if include_headline:
            for hm in _BODY_RES["headline"].finditer(block):
                parts.append(hm.group(1))
        for tm in _BODY_RES["text"].finditer(block):
            parts.append(tm.group(1))
        text = "\n".join(
            _decode(_TAG_RE.sub(b" ", part)).strip() for part in parts
        ).strip()
        docs.append(RawDocument(doc_id, text))
    return docs, errors


def format_trec_document(doc: RawDocument) -> str:
    return f"<DOC>\n<DOCNO> {doc.doc_id} </DOCNO>\n<TEXT>\n{doc.text}\n</TEXT>\n</DOC>\n"


def write_trec_documents(docs: Iterable[RawDocument], fh: IO[str]) -> None:
    for doc in docs:
        fh.write(format_trec_document(doc))


def parse_topics(source: Source) -> tuple[list[Topic], list[RecordError]]:
    """Parse TREC ``<top>`` blocks into Topics.

    Field content runs from its tag to the next tag; the conventional
    ``Number:``/``Topic:``/``Description:``/``Narrative:`` labels are
    stripped.  Topics without a ``<num>`` (or with no usable title or
    description) are reported as record errors.
    """
    data = _as_bytes(source)
    topics: list[Topic] = []
    errors: list[RecordError] = []
    for m in _TOP_RE.finditer(data):
        offset = m.start()
        fields: dict[str, str] = {}
        pieces = _FIELD_SPLIT_RE.split(_decode(m.group(1)))
        # pieces alternate: text, tag, text, tag, ...
        tag = None
        for i, piece in enumerate(pieces):
            if i % 2 == 1:
                tag = None if piece.startswith("/") else piece.lower()
                continue
            if tag is None:
                continue
            content = _FIELD_LABEL_RE.sub("", piece).strip()
            if content:
                fields[tag] = (fields[tag] + " " + content) if tag in fields else content
        query_id = " ".join(fields.get("num", "").split())
        if not query_id:
            errors.append(RecordError(offset, "topic block without <num>"))
            continue
        title = " ".join(fields.get("title", "").split())
        desc = " ".join(fields.get("desc", "").split())
        narr = " ".join(fields.get("narr", "").split())
        if not title and not desc:
            errors.append(
                RecordError(offset, f"topic {query_id} has neither title nor description")
            )
            continue
        topics.append(Topic(query_id, title, desc, narr))
    return topics, errors


def read_plain_directory(path) -> list[RawDocument]:
    """Plain mode: one document per file, doc_id = file name."""
    docs = []
    for name in sorted(os.listdir(path)):
        full = os.path.join(path, name)
        if not os.path.isfile(full):
            continue
        with open(full, encoding="utf-8", errors="replace") as fh:
            docs.append(RawDocument(name, fh.read()))
    return docs
