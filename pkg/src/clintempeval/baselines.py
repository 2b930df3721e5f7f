"""Baseline systems: dictionary memorization, majority docTimeRel, closest-time linking."""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .model import (
    EVENT,
    TIMEX,
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
)


class EmptyTrainingError(ValueError):
    pass


def fold_case(text: str) -> str:
    """Lower-case character by character, keeping offsets stable."""
    out = []
    for c in text:
        low = c.lower()
        out.append(low if len(low) == 1 else c)
    return "".join(out)


def bundle_of(entity) -> tuple:
    if entity.kind == TIMEX:
        return (entity.timex_type.value, entity.value or "-")
    return (
        entity.event_type.value,
        entity.polarity.value,
        entity.degree.value,
        entity.modality.value,
        entity.doc_time_rel.value,
    )


def serialize_bundle(bundle: tuple) -> str:
    return "|".join(bundle)


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    kind: str
    bundle: tuple
    frequency: int


@dataclass
class MemorizationLexicon:
    """Surface string -> memorized annotation, kept per kind.

    ``conflicts`` records surfaces seen as both a time and an event.
    """

    entries: dict = field(default_factory=dict)  # (surface, kind) -> LexiconEntry
    case_sensitive: bool = False
    conflicts: list = field(default_factory=list)

    def key(self, surface: str) -> str:
        return surface if self.case_sensitive else fold_case(surface)

    def lookup(self, surface: str, kind: str):
        return self.entries.get((self.key(surface), kind))

    def __len__(self):
        return len(self.entries)

    def dump(self) -> str:
        lines = []
        for (surface, kind), e in sorted(self.entries.items()):
            lines.append(f"{surface}\t{kind}\t{serialize_bundle(e.bundle)}\t{e.frequency}")
        return "".join(line + "\n" for line in lines)


def train_memorizer(train: Corpus, case_sensitive: bool = False) -> MemorizationLexicon:
    lex = MemorizationLexicon(case_sensitive=case_sensitive)
    counts = defaultdict(Counter)
    for doc in train.documents:
        for ent in doc.entities():
            surface = lex.key(doc.surface(ent))
            if surface:
                counts[surface, ent.kind][bundle_of(ent)] += 1
    for (surface, kind), bundles in counts.items():
        best = min(bundles.items(), key=lambda kv: (-kv[1], serialize_bundle(kv[0])))
        lex.entries[surface, kind] = LexiconEntry(surface, kind, best[0], best[1])
    lex.conflicts = sorted(
        s for (s, k) in lex.entries if k == TIMEX and (s, EVENT) in lex.entries
    )
    return lex


def _make_entity(kind, bundle, eid, span):
    if kind == TIMEX:
        ttype, value = bundle
        return TimexEntity(eid, span, TimexType(ttype), None if value == "-" else value)
    etype, pol, deg, mod, dtr = bundle
    return EventEntity(
        eid, span, EventType(etype), Polarity(pol), Degree(deg), Modality(mod), DocTimeRel(dtr)
    )


def apply_memorizer(lex: MemorizationLexicon, doc: Document):
    """Tag every lexicon surface in ``doc.text``; returns (timexes, events).

    Left-to-right longest match, anchored at word boundaries on both ends,
    with no overlapping output. An event wins a same-length tie with a time.
    """
    text = doc.text if lex.case_sensitive else fold_case(doc.text)
    by_length = defaultdict(dict)
    for (surface, kind), entry in lex.entries.items():
        slot = by_length[len(surface)]
        if kind == EVENT or surface not in slot:
            slot[surface] = entry
    lengths = sorted(by_length, reverse=True)

    timexes, events = [], []
    i, n = 0, len(text)
    while i < n:
        if i > 0 and text[i - 1].isalnum():
            i += 1
            continue
        hit = None
        for length in lengths:
            end = i + length
            if end > n:
                continue
            entry = by_length[length].get(text[i:end])
            if entry is not None and (end == n or not text[end].isalnum()):
                hit = entry
                break
        if hit is None:
            i += 1
            continue
        span = Span(i, i + len(hit.surface))
        if hit.kind == TIMEX:
            timexes.append(_make_entity(TIMEX, hit.bundle, f"t{len(timexes)}", span))
        else:
            events.append(_make_entity(EVENT, hit.bundle, f"e{len(events)}", span))
        i = span.end
    return timexes, events


@dataclass(frozen=True)
class MajorityDr:
    label: DocTimeRel
    training_counts: dict


def train_dr_majority(train: Corpus) -> MajorityDr:
    counts = Counter(e.doc_time_rel for doc in train.documents for e in doc.events)
    if not counts:
        raise EmptyTrainingError("training corpus has no events")
    order = list(DocTimeRel)
    label = min(counts, key=lambda lab: (-counts[lab], order.index(lab)))
    return MajorityDr(label, {lab: counts[lab] for lab in order if counts[lab]})


def apply_dr(majority: MajorityDr, lex: MemorizationLexicon | None, events, surfaces):
    """Assign docTimeRel to ``events`` (paired with their ``surfaces``).

    A memorized label is used when the lexicon knows the surface as an
    event; everything else gets the majority label.
    """
    out = []
    for ev, surface in zip(events, surfaces, strict=True):
        label = majority.label
        if lex is not None:
            entry = lex.lookup(surface, EVENT)
            if entry is not None:
                label = DocTimeRel(entry.bundle[4])
        out.append(EventEntity(
            ev.id, ev.span, ev.event_type, ev.polarity, ev.degree, ev.modality, label
        ))
    return out


_SENTENCE_BREAK = re.compile(r"[.?!](?=\s+[A-Z])")


def segment_sentences(text: str) -> list[Span]:
    """Fallback segmenter: break after . ? ! when whitespace and a capital follow."""
    spans = []
    start = 0
    for m in _SENTENCE_BREAK.finditer(text):
        spans.append(Span(start, m.end()))
        start = m.end()
        while start < len(text) and text[start].isspace():
            start += 1
    if start < len(text):
        spans.append(Span(start, len(text)))
    return [s for s in spans if s.end > s.begin]


def _gap(a: Span, b: Span) -> int:
    if a.overlap(b) > 0:
        return 0
    return b.begin - a.end if a.end <= b.begin else a.begin - b.end


def link_closest_time(doc: Document) -> list[ContainerRelation]:
    """Link each event to its nearest time expression in the same sentence."""
    sentences = list(doc.sentences) or segment_sentences(doc.text)
    out = []
    for ev in doc.events:
        sent = next((s for s in sentences if s.begin <= ev.span.begin < s.end), None)
        if sent is None:
            continue
        best = None
        for t in doc.timexes:
            if not sent.contains(t.span):
                continue
            key = (_gap(ev.span, t.span), t.span.begin, t.span.end)
            if best is None or key < best[0]:
                best = (key, t)
        if best is not None:
            out.append(ContainerRelation(best[1].id, ev.id))
    return out


COMPONENTS = ("memorize", "dr-majority", "dr-memorize", "cr-closest")
DEFAULT_COMPONENTS = ("memorize", "dr-memorize", "cr-closest")


def run_baseline(train: Corpus, inputs: Corpus, components=DEFAULT_COMPONENTS,
                 case_sensitive: bool = False) -> Corpus:
    """Annotate ``inputs`` with the chosen baseline components.

    Without ``memorize`` the input's own entities are kept (the setting where
    spans are given) and only docTimeRel and links are predicted.
    """
    components = set(components)
    unknown = components - set(COMPONENTS)
    if unknown:
        raise ValueError(f"unknown baseline components: {', '.join(sorted(unknown))}")
    lex = train_memorizer(train, case_sensitive=case_sensitive)
    majority = None
    if components & {"dr-majority", "dr-memorize"}:
        majority = train_dr_majority(train)

    out = []
    for doc in inputs.documents:
        if "memorize" in components:
            timexes, events = apply_memorizer(lex, doc)
        else:
            timexes, events = list(doc.timexes), list(doc.events)
        if majority is not None:
            dr_lex = lex if "dr-memorize" in components else None
            events = apply_dr(majority, dr_lex, events, [doc.surface(e) for e in events])
        result = doc.replace(timexes=tuple(timexes), events=tuple(events), relations=())
        if "cr-closest" in components:
            result = result.replace(relations=tuple(link_closest_time(result)))
        out.append(result)
    return Corpus(tuple(out))
