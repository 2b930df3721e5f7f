"""Deterministic synthetic clinical-note corpora.

Notes are built sentence by sentence from filler words and annotated
surfaces. The vocabularies are arranged so that an annotated surface is
never a word-prefix of another surface and filler words never occur inside
a surface; every occurrence of a surface in the text is therefore annotated,
which is what lets a dictionary tagger reproduce the gold annotations.
"""

from __future__ import annotations

import datetime
import random
from dataclasses import dataclass

from .model import (
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

EVENT_WORDS = """
colonoscopy biopsy resection polypectomy chemotherapy radiation surgery
pain nausea vomiting bleeding anemia fatigue fever diarrhea constipation
adenocarcinoma tumor metastasis lesion polyp mass obstruction perforation
scan ultrasound mri ct xray endoscopy sigmoidoscopy colectomy anastomosis
ileostomy colostomy infusion oxaliplatin fluorouracil leucovorin capecitabine
bevacizumab cetuximab irinotecan folfox folfiri staging recurrence remission
admission discharge consultation followup visit examination evaluation
weightloss jaundice ascites edema dyspnea cough hypertension diabetes
infection sepsis abscess fistula stricture hemorrhage transfusion
""".split()

# (surface, type, value)
TIMEX_PHRASES = [
    ("today", TimexType.DATE, "PRESENT_REF"),
    ("yesterday", TimexType.DATE, "YESTERDAY"),
    ("tonight", TimexType.TIME, "TNI"),
    ("this morning", TimexType.TIME, "TMO"),
    ("last week", TimexType.DATE, "PAST_WEEK"),
    ("next month", TimexType.DATE, "FUTURE_MONTH"),
    ("three days", TimexType.DURATION, "P3D"),
    ("two weeks", TimexType.DURATION, "P2W"),
    ("six months", TimexType.DURATION, "P6M"),
    ("twice daily", TimexType.SET, "R2/P1D"),
    ("weekly", TimexType.SET, "P1W"),
    ("every cycle", TimexType.SET, "RCYCLE"),
    ("postoperatively", TimexType.PREPOSTEXP, "POSTOP"),
    ("preoperatively", TimexType.PREPOSTEXP, "PREOP"),
    ("once", TimexType.QUANTIFIER, "1X"),
    ("thrice", TimexType.QUANTIFIER, "3X"),
]

FILLER_WORDS = """
the patient was noted with and had a of in for on as is reports denies
underwent shows presented history some mild moderate severe left right
significant findings consistent return plan continue recommended given
status post prior known who her his no evidence further management
""".split()

# share of contained events anchored to the nearest same-sentence time
ANCHOR_RATE = 0.6

_EVENT_BUNDLE_WEIGHTS = {
    EventType: [0.85, 0.08, 0.07],
    Polarity: [0.9, 0.1],
    Degree: [0.9, 0.05, 0.05],
    Modality: [0.8, 0.1, 0.07, 0.03],
    DocTimeRel: [0.45, 0.35, 0.1, 0.1],
}


@dataclass(frozen=True)
class GeneratorConfig:
    """Ranges are inclusive ``(low, high)`` pairs."""

    n_patients: int = 87
    notes_per_patient: tuple[int, int] = (2, 3)
    events_per_note: tuple[int, int] = (115, 160)
    timexes_per_note: tuple[int, int] = (9, 14)
    relation_density: float = 0.3
    unambiguous_surfaces: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.n_patients <= 0:
            raise ValueError("n_patients must be positive")
        for name in ("notes_per_patient", "events_per_note", "timexes_per_note"):
            lo, hi = getattr(self, name)
            if lo <= 0 or hi < lo:
                raise ValueError(f"{name} must be a positive range, got {(lo, hi)}")
        if not 0.0 <= self.relation_density <= 1.0:
            raise ValueError("relation_density must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def _check_vocabulary():
    surfaces = EVENT_WORDS + [p for p, _, _ in TIMEX_PHRASES]
    surface_words = {w for s in surfaces for w in s.split()}
    assert not surface_words & set(FILLER_WORDS)
    assert len(set(surfaces)) == len(surfaces)
    for a in surfaces:
        for b in surfaces:
            assert a == b or not b.startswith(a + " ")


_check_vocabulary()


def _draw(rng, enum_cls):
    return rng.choices(list(enum_cls), weights=_EVENT_BUNDLE_WEIGHTS[enum_cls])[0]


def _event_bundle(rng):
    return (
        _draw(rng, EventType),
        _draw(rng, Polarity),
        _draw(rng, Degree),
        _draw(rng, Modality),
        _draw(rng, DocTimeRel),
    )


class _Vocabulary:
    def __init__(self, rng: random.Random, unambiguous: bool):
        self.rng = rng
        self.unambiguous = unambiguous
        # fixed per-surface bundles; only consulted in unambiguous mode
        self.event_bundles = {w: _event_bundle(rng) for w in EVENT_WORDS}

    def event(self):
        word = self.rng.choice(EVENT_WORDS)
        if self.unambiguous:
            return word, self.event_bundles[word]
        return word, _event_bundle(self.rng)

    def timex(self, dct: datetime.date):
        rng = self.rng
        if self.unambiguous or rng.random() < 0.5:
            surface, ttype, value = rng.choice(TIMEX_PHRASES)
            if not self.unambiguous and rng.random() < 0.3:
                # same surface, different reading
                ttype = rng.choice(list(TimexType))
            return surface, ttype, value
        day = dct - datetime.timedelta(days=rng.randrange(1, 2000))
        return day.strftime("%m/%d/%Y"), TimexType.DATE, day.isoformat()


def _nearest_timex(span, timexes, sentences):
    sent = next((s for s in sentences if s.begin <= span.begin < s.end), None)
    best = None
    for t in timexes:
        if sent is None or not sent.contains(t.span):
            continue
        gap = max(t.span.begin - span.end, span.begin - t.span.end, 0)
        if best is None or (gap, t.span.begin) < best[0]:
            best = ((gap, t.span.begin), t)
    return None if best is None else best[1]


def _generate_note(rng, vocab, doc_id, patient_id, dct, n_events, n_timexes, density):
    tokens = ["E"] * n_events + ["T"] * n_timexes
    rng.shuffle(tokens)
    pieces = []
    sentences, timexes, events = [], [], []
    pos = 0
    i = 0
    while i < len(tokens):
        n_ent = rng.randint(2, 6)
        chunk = tokens[i:i + n_ent]
        i += n_ent
        words = []
        for tag in chunk:
            words.extend(rng.choice(FILLER_WORDS) for _ in range(rng.randint(0, 2)))
            words.append(tag)
        words.extend(rng.choice(FILLER_WORDS) for _ in range(rng.randint(1, 2)))

        sent_begin = pos
        first = True
        for w in words:
            if not first:
                pieces.append(" ")
                pos += 1
            if w == "E":
                surface, bundle = vocab.event()
                text = surface
                events.append((Span(pos, pos + len(text)), bundle))
            elif w == "T":
                surface, ttype, value = vocab.timex(dct)
                text = surface
                timexes.append((Span(pos, pos + len(text)), ttype, value))
            else:
                text = w
            if first:
                text = text[0].upper() + text[1:]
            pieces.append(text)
            pos += len(text)
            first = False
        pieces.append(".")
        pos += 1
        sentences.append(Span(sent_begin, pos))
        pieces.append(" ")
        pos += 1

    text = "".join(pieces).rstrip(" ")
    timex_ents = [
        TimexEntity(f"t{k}", span, ttype, value) for k, (span, ttype, value) in enumerate(timexes)
    ]
    event_ents = [
        EventEntity(f"e{k}", span, *bundle) for k, (span, bundle) in enumerate(events)
    ]

    # Only events receive a container, and each at most one. Event-to-event
    # links follow a random ranking, so the graph is a forest: a cycle would
    # need an edge into a time expression or against the ranking.
    all_ids = [e.id for e in timex_ents] + [e.id for e in event_ents]
    rng.shuffle(all_ids)
    rank = {eid: r for r, eid in enumerate(all_ids)}
    relations = []
    for ev in event_ents:
        if rng.random() >= density:
            continue
        anchor = _nearest_timex(ev.span, timex_ents, sentences)
        if anchor is not None and rng.random() < ANCHOR_RATE:
            relations.append(ContainerRelation(anchor.id, ev.id))
        elif rank[ev.id] > 0:
            parent = all_ids[rng.randrange(rank[ev.id])]
            relations.append(ContainerRelation(parent, ev.id))

    return Document(
        doc_id=doc_id,
        patient_id=patient_id,
        text=text,
        dct=dct,
        sentences=tuple(sentences),
        timexes=tuple(timex_ents),
        events=tuple(event_ents),
        relations=tuple(relations),
    )


def generate_synthetic(config: GeneratorConfig) -> Corpus:
    rng = random.Random(config.seed)
    vocab = _Vocabulary(rng, config.unambiguous_surfaces)
    docs = []
    width = len(str(config.n_patients))
    for p in range(config.n_patients):
        patient_id = f"P{p:0{width}d}"
        n_notes = rng.randint(*config.notes_per_patient)
        day = datetime.date(2010, 1, 1) + datetime.timedelta(days=rng.randrange(1500))
        for k in range(n_notes):
            day += datetime.timedelta(days=rng.randint(1, 120))
            docs.append(
                _generate_note(
                    rng,
                    vocab,
                    f"{patient_id}_N{k:02d}",
                    patient_id,
                    day,
                    rng.randint(*config.events_per_note),
                    rng.randint(*config.timexes_per_note),
                    config.relation_density,
                )
            )
    return Corpus(tuple(docs))
