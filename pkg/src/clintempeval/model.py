"""Annotation data model: spans, time expressions, events, CONTAINS links."""

from __future__ import annotations

import datetime
import enum
from dataclasses import dataclass, field
from typing import Union


class TimexType(str, enum.Enum):
    DATE = "DATE"
    TIME = "TIME"
    DURATION = "DURATION"
    QUANTIFIER = "QUANTIFIER"
    PREPOSTEXP = "PREPOSTEXP"
    SET = "SET"


class EventType(str, enum.Enum):
    NA = "NA"
    ASPECTUAL = "ASPECTUAL"
    EVIDENTIAL = "EVIDENTIAL"


class Polarity(str, enum.Enum):
    POS = "POS"
    NEG = "NEG"


class Degree(str, enum.Enum):
    NA = "NA"
    MOST = "MOST"
    LITTLE = "LITTLE"


class Modality(str, enum.Enum):
    ACTUAL = "ACTUAL"
    HEDGED = "HEDGED"
    HYPOTHETICAL = "HYPOTHETICAL"
    GENERIC = "GENERIC"


class DocTimeRel(str, enum.Enum):
    # declaration order doubles as the majority-class tie order
    BEFORE = "BEFORE"
    OVERLAP = "OVERLAP"
    AFTER = "AFTER"
    BEFORE_OR_OVERLAP = "BEFORE-OR-OVERLAP"


CONTAINS = "CONTAINS"

TIMEX = "timex"
EVENT = "event"
KINDS = (TIMEX, EVENT)

TIMEX_ATTRIBUTES = ("type", "value")
EVENT_ATTRIBUTES = ("type", "polarity", "degree", "modality")


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character interval ``[begin, end)``."""

    begin: int
    end: int

    def __len__(self) -> int:
        return max(0, self.end - self.begin)

    def overlap(self, other: Span) -> int:
        return max(0, min(self.end, other.end) - max(self.begin, other.begin))

    def contains(self, other: Span) -> bool:
        return self.begin <= other.begin and other.end <= self.end


@dataclass(frozen=True)
class TimexEntity:
    id: str
    span: Span
    timex_type: TimexType
    value: str | None = None

    kind = TIMEX

    def attribute(self, name: str):
        if name == "type":
            return self.timex_type
        if name == "value":
            return self.value
        raise UnknownAttributeError(f"time expressions have no attribute {name!r}")


@dataclass(frozen=True)
class EventEntity:
    id: str
    span: Span
    event_type: EventType = EventType.NA
    polarity: Polarity = Polarity.POS
    degree: Degree = Degree.NA
    modality: Modality = Modality.ACTUAL
    doc_time_rel: DocTimeRel = DocTimeRel.OVERLAP

    kind = EVENT

    def attribute(self, name: str):
        try:
            attr = {
                "type": "event_type",
                "polarity": "polarity",
                "degree": "degree",
                "modality": "modality",
                "docTimeRel": "doc_time_rel",
            }[name]
        except KeyError:
            raise UnknownAttributeError(f"events have no attribute {name!r}") from None
        return getattr(self, attr)


Entity = Union[TimexEntity, EventEntity]


@dataclass(frozen=True, order=True)
class ContainerRelation:
    source: str
    target: str
    relation: str = CONTAINS


def _entity_key(e: Entity):
    return (e.span.begin, e.span.end, e.id)


@dataclass(frozen=True)
class Document:
    """One clinical note with its standoff annotations.

    Sequences are stored as tuples in canonical order (entities by span,
    relations by endpoint ids) so that two documents holding the same
    annotations compare equal regardless of construction order.
    """

    doc_id: str
    patient_id: str
    text: str
    dct: datetime.date
    sentences: tuple[Span, ...] = ()
    timexes: tuple[TimexEntity, ...] = ()
    events: tuple[EventEntity, ...] = ()
    relations: tuple[ContainerRelation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(sorted(self.sentences)))
        object.__setattr__(self, "timexes", tuple(sorted(self.timexes, key=_entity_key)))
        object.__setattr__(self, "events", tuple(sorted(self.events, key=_entity_key)))
        object.__setattr__(self, "relations", tuple(sorted(set(self.relations))))

    def entities(self, kind: str | None = None) -> tuple[Entity, ...]:
        if kind == TIMEX:
            return self.timexes
        if kind == EVENT:
            return self.events
        if kind is None:
            return self.timexes + self.events
        raise ValueError(f"unknown entity kind {kind!r}")

    def surface(self, entity: Entity) -> str:
        return self.text[entity.span.begin:entity.span.end]

    def replace(self, **changes) -> Document:
        fields = {
            "doc_id": self.doc_id,
            "patient_id": self.patient_id,
            "text": self.text,
            "dct": self.dct,
            "sentences": self.sentences,
            "timexes": self.timexes,
            "events": self.events,
            "relations": self.relations,
        }
        fields.update(changes)
        return Document(**fields)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(
            self, "documents", tuple(sorted(self.documents, key=lambda d: d.doc_id))
        )

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def by_id(self) -> dict[str, Document]:
        return {d.doc_id: d for d in self.documents}

    @property
    def patient_ids(self) -> list[str]:
        return sorted({d.patient_id for d in self.documents})


class UnknownIdError(KeyError):
    pass


class UnknownAttributeError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    subject: str
    rule: str
    detail: str = ""

    def __str__(self):
        msg = f"{self.subject}: {self.rule}"
        return f"{msg} ({self.detail})" if self.detail else msg


def entity_by_id(doc: Document, id: str) -> Entity:
    for e in doc.timexes:
        if e.id == id:
            return e
    for e in doc.events:
        if e.id == id:
            return e
    raise UnknownIdError(f"{doc.doc_id}: no entity with id {id!r}")


_EVENT_VOCAB = (
    ("event_type", EventType),
    ("polarity", Polarity),
    ("degree", Degree),
    ("modality", Modality),
    ("doc_time_rel", DocTimeRel),
)


def _span_violations(subject, span, text_len):
    out = []
    if not isinstance(span, Span):
        return [Violation(subject, "span-type", f"{span!r} is not a Span")]
    if not (isinstance(span.begin, int) and isinstance(span.end, int)):
        return [Violation(subject, "span-offsets", "offsets must be integers")]
    if span.begin < 0:
        out.append(Violation(subject, "span-begin-negative", f"begin={span.begin}"))
    if span.begin >= span.end:
        out.append(Violation(subject, "span-empty", f"[{span.begin},{span.end})"))
    if span.end > text_len:
        out.append(
            Violation(subject, "span-out-of-bounds", f"end={span.end} > text length {text_len}")
        )
    return out


def _bad_id(id) -> bool:
    return not isinstance(id, str) or not id or any(c.isspace() for c in id)


def validate_document(doc: Document) -> list[Violation]:
    """Return every structural problem in ``doc``; an empty list means well-formed."""
    out: list[Violation] = []
    n = len(doc.text)
    where = doc.doc_id

    for label, value in (("doc_id", doc.doc_id), ("patient_id", doc.patient_id)):
        if _bad_id(value):
            out.append(Violation(where, f"bad-{label}", repr(value)))
    if not isinstance(doc.dct, datetime.date) or isinstance(doc.dct, datetime.datetime):
        out.append(Violation(where, "dct-not-date", repr(doc.dct)))

    prev = None
    for i, s in enumerate(doc.sentences):
        subject = f"{where}/sentence[{i}]"
        out.extend(_span_violations(subject, s, n))
        if prev is not None and isinstance(s, Span) and s.begin < prev.end:
            out.append(Violation(subject, "sentence-overlap", f"{prev} and {s}"))
        prev = s

    seen_ids: set[str] = set()
    for kind, entities in ((TIMEX, doc.timexes), (EVENT, doc.events)):
        seen_spans: set[Span] = set()
        for e in entities:
            subject = f"{where}/{e.id}"
            if _bad_id(e.id):
                out.append(Violation(subject, "bad-entity-id", repr(e.id)))
            if e.id in seen_ids:
                out.append(Violation(subject, "duplicate-id"))
            seen_ids.add(e.id)
            out.extend(_span_violations(subject, e.span, n))
            if e.span in seen_spans:
                out.append(Violation(subject, f"duplicate-{kind}-span", str(e.span)))
            seen_spans.add(e.span)
            if kind == TIMEX:
                if not isinstance(e.timex_type, TimexType):
                    out.append(Violation(subject, "bad-timex-type", repr(e.timex_type)))
                if e.value is not None and (
                    not isinstance(e.value, str)
                    or not e.value
                    or any(c.isspace() for c in e.value)
                    or e.value == "-"
                ):
                    out.append(Violation(subject, "bad-timex-value", repr(e.value)))
            else:
                for attr, vocab in _EVENT_VOCAB:
                    if not isinstance(getattr(e, attr), vocab):
                        out.append(Violation(subject, f"bad-{attr}", repr(getattr(e, attr))))

    for r in doc.relations:
        subject = f"{where}/{r.source}->{r.target}"
        if r.relation != CONTAINS:
            out.append(Violation(subject, "bad-relation-type", repr(r.relation)))
        if r.source == r.target:
            out.append(Violation(subject, "self-relation"))
        for end in (r.source, r.target):
            if end not in seen_ids:
                out.append(Violation(subject, "undefined-entity", end))
    return out


def validate_corpus(corpus: Corpus) -> list[Violation]:
    out = []
    seen = set()
    for doc in corpus.documents:
        if doc.doc_id in seen:
            out.append(Violation(doc.doc_id, "duplicate-doc-id"))
        seen.add(doc.doc_id)
        out.extend(validate_document(doc))
    return out
