"""Reader and writer for the line-delimited corpus format.

Each record looks like::

    #doc <doc_id> <patient_id> <YYYY-MM-DD>
    #text <byte-length>
    <exactly byte-length bytes of UTF-8 text>
    S <begin> <end>
    T <id> <begin> <end> <TYPE> <value or ->
    E <id> <begin> <end> <type> <polarity> <degree> <modality> <docTimeRel>
    R <source_id> CONTAINS <target_id>
    <blank line>

Offsets are character offsets into the decoded text.
"""

from __future__ import annotations

import datetime
import io
import os

from .model import (
    CONTAINS,
    ContainerRelation,
    Corpus,
    Degree,
    DocTimeRel,
    Document,
    EventEntity,
    EventType,
    Modality,
    Polarity,
    Span,
    TimexEntity,
    TimexType,
    Violation,
    validate_corpus,
)


class CorpusParseError(ValueError):
    def __init__(self, message, line=None, doc_id=None):
        where = []
        if doc_id is not None:
            where.append(f"document {doc_id}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.doc_id = doc_id


class CorpusValidationError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        shown = "; ".join(str(v) for v in violations[:10])
        more = f" (+{len(violations) - 10} more)" if len(violations) > 10 else ""
        super().__init__(f"{len(violations)} validation error(s): {shown}{more}")


def _enum(cls, token, line, doc_id):
    try:
        return cls(token)
    except ValueError:
        raise CorpusParseError(f"{token!r} is not a valid {cls.__name__}", line, doc_id) from None


def _int(token, line, doc_id):
    try:
        return int(token)
    except ValueError:
        raise CorpusParseError(f"expected an integer offset, got {token!r}", line, doc_id) from None


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.line = 0

    def at_end(self):
        return self.pos >= len(self.data)

    def readline(self, doc_id=None) -> str:
        """Next line without its newline; a missing newline means truncation."""
        nl = self.data.find(b"\n", self.pos)
        if nl < 0:
            raise CorpusParseError("unexpected end of file", self.line + 1, doc_id)
        raw = self.data[self.pos:nl]
        self.pos = nl + 1
        self.line += 1
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusParseError(f"invalid UTF-8: {exc}", self.line, doc_id) from None

    def readbytes(self, n, doc_id) -> str:
        if self.pos + n + 1 > len(self.data):
            raise CorpusParseError("text block truncated", self.line + 1, doc_id)
        raw = self.data[self.pos:self.pos + n]
        if self.data[self.pos + n:self.pos + n + 1] != b"\n":
            raise CorpusParseError("text block not followed by a newline", self.line + 1, doc_id)
        self.pos += n + 1
        self.line += raw.count(b"\n") + 1
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusParseError(f"invalid UTF-8 in text: {exc}", self.line, doc_id) from None


def _parse_record(r: _Reader) -> Document:
    header = r.readline()
    parts = header.split(" ")
    if len(parts) != 4 or parts[0] != "#doc":
        raise CorpusParseError(f"expected '#doc <id> <patient> <dct>', got {header!r}", r.line)
    _, doc_id, patient_id, dct_token = parts
    try:
        dct = datetime.date.fromisoformat(dct_token)
    except ValueError:
        raise CorpusParseError(f"bad DCT {dct_token!r}", r.line, doc_id) from None

    text_line = r.readline(doc_id)
    parts = text_line.split(" ")
    if len(parts) != 2 or parts[0] != "#text":
        raise CorpusParseError(f"expected '#text <byte-length>', got {text_line!r}", r.line, doc_id)
    nbytes = _int(parts[1], r.line, doc_id)
    if nbytes < 0:
        raise CorpusParseError("negative text length", r.line, doc_id)
    text = r.readbytes(nbytes, doc_id)

    sentences, timexes, events, relations = [], [], [], []
    while True:
        line = r.readline(doc_id)
        if line == "":
            break
        f = line.split(" ")
        tag = f[0]
        if tag == "S" and len(f) == 3:
            sentences.append(Span(_int(f[1], r.line, doc_id), _int(f[2], r.line, doc_id)))
        elif tag == "T" and len(f) == 6:
            timexes.append(
                TimexEntity(
                    id=f[1],
                    span=Span(_int(f[2], r.line, doc_id), _int(f[3], r.line, doc_id)),
                    timex_type=_enum(TimexType, f[4], r.line, doc_id),
                    value=None if f[5] == "-" else f[5],
                )
            )
        elif tag == "E" and len(f) == 9:
            events.append(
                EventEntity(
                    id=f[1],
                    span=Span(_int(f[2], r.line, doc_id), _int(f[3], r.line, doc_id)),
                    event_type=_enum(EventType, f[4], r.line, doc_id),
                    polarity=_enum(Polarity, f[5], r.line, doc_id),
                    degree=_enum(Degree, f[6], r.line, doc_id),
                    modality=_enum(Modality, f[7], r.line, doc_id),
                    doc_time_rel=_enum(DocTimeRel, f[8], r.line, doc_id),
                )
            )
        elif tag == "R" and len(f) == 4:
            if f[2] != CONTAINS:
                raise CorpusParseError(f"unsupported relation {f[2]!r}", r.line, doc_id)
            relations.append(ContainerRelation(f[1], f[3]))
        else:
            raise CorpusParseError(f"malformed annotation line {line!r}", r.line, doc_id)

    return Document(
        doc_id=doc_id,
        patient_id=patient_id,
        text=text,
        dct=dct,
        sentences=tuple(sentences),
        timexes=tuple(timexes),
        events=tuple(events),
        relations=tuple(relations),
    )


def loads_corpus(data: bytes, validate: bool = True) -> Corpus:
    r = _Reader(data)
    docs = []
    while not r.at_end():
        docs.append(_parse_record(r))
    seen = set()
    for d in docs:
        if d.doc_id in seen:
            raise CorpusParseError(f"duplicate document id {d.doc_id!r}", doc_id=d.doc_id)
        seen.add(d.doc_id)
    corpus = Corpus(tuple(docs))
    if validate:
        violations = validate_corpus(corpus)
        if violations:
            raise CorpusValidationError(violations)
    return corpus


def read_corpus(path, validate: bool = True) -> Corpus:
    with open(path, "rb") as fh:
        return loads_corpus(fh.read(), validate=validate)


def _entity_lines(doc: Document):
    rows = []
    for t in doc.timexes:
        if t.value is not None and (not t.value or t.value == "-" or any(c.isspace() for c in t.value)):
            raise ValueError(f"{doc.doc_id}/{t.id}: value {t.value!r} cannot be serialized")
        value = "-" if t.value is None else t.value
        line = f"T {t.id} {t.span.begin} {t.span.end} {t.timex_type.value} {value}"
        rows.append((t.span.begin, t.span.end, "timex", t.id, line))
    for e in doc.events:
        line = (
            f"E {e.id} {e.span.begin} {e.span.end} {e.event_type.value} {e.polarity.value} "
            f"{e.degree.value} {e.modality.value} {e.doc_time_rel.value}"
        )
        rows.append((e.span.begin, e.span.end, "event", e.id, line))
    rows.sort()
    return [row[-1] for row in rows]


def dumps_corpus(corpus: Corpus) -> bytes:
    out = io.BytesIO()
    for doc in sorted(corpus.documents, key=lambda d: d.doc_id):
        text = doc.text.encode("utf-8")
        out.write(f"#doc {doc.doc_id} {doc.patient_id} {doc.dct.isoformat()}\n".encode())
        out.write(f"#text {len(text)}\n".encode())
        out.write(text)
        out.write(b"\n")
        lines = [f"S {s.begin} {s.end}" for s in doc.sentences]
        lines += _entity_lines(doc)
        lines += [f"R {r.source} {CONTAINS} {r.target}" for r in sorted(doc.relations)]
        for line in lines:
            out.write(line.encode("utf-8"))
            out.write(b"\n")
        out.write(b"\n")
    return out.getvalue()


def write_corpus(corpus: Corpus, path) -> None:
    data = dumps_corpus(corpus)
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
