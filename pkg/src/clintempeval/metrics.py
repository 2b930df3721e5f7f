"""Precision/recall/F1 and accuracy scoring for spans, attributes and relations."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .closure import close_document
from .model import (
    EVENT,
    EVENT_ATTRIBUTES,
    KINDS,
    TIMEX,
    TIMEX_ATTRIBUTES,
    Corpus,
    Document,
    UnknownAttributeError,
)


class MatchMode(str, enum.Enum):
    EXACT = "exact"
    OVERLAP = "overlap"


class Form(str, enum.Enum):
    PRF = "prf"
    ACCURACY = "accuracy"


class ClosureMode(str, enum.Enum):
    OFF = "off"
    BOTH_CLOSED = "both-closed"
    ASYMMETRIC = "asymmetric"


class ScoringError(ValueError):
    pass


class DocumentMismatchError(ScoringError):
    pass


class AlignmentError(ScoringError):
    pass


def _ratio(num, den, empty):
    return num / den if den else empty


@dataclass(frozen=True)
class PRFScore:
    """Counts behind a precision/recall/F1 triple.

    ``recall_tp`` differs from ``tp`` only for asymmetric closure scoring,
    where precision and recall are checked against different closed sets.
    """

    tp: int
    system_count: int
    gold_count: int
    recall_tp: int | None = None

    def __post_init__(self):
        rtp = self.tp if self.recall_tp is None else self.recall_tp
        if min(self.tp, self.system_count, self.gold_count, rtp) < 0:
            raise ValueError(f"negative count in {self}")
        if self.tp > self.system_count or rtp > self.gold_count:
            raise ValueError(f"true positives exceed a denominator in {self}")
        if self.recall_tp is None and self.tp > self.gold_count:
            raise ValueError(f"true positives exceed gold count in {self}")

    @property
    def both_empty(self):
        return self.system_count == 0 and self.gold_count == 0

    @property
    def precision(self) -> float:
        return 1.0 if self.both_empty else _ratio(self.tp, self.system_count, 0.0)

    @property
    def recall(self) -> float:
        rtp = self.tp if self.recall_tp is None else self.recall_tp
        return 1.0 if self.both_empty else _ratio(rtp, self.gold_count, 0.0)

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def __add__(self, other: PRFScore) -> PRFScore:
        rtp = None
        if self.recall_tp is not None or other.recall_tp is not None:
            rtp = (self.tp if self.recall_tp is None else self.recall_tp) + (
                other.tp if other.recall_tp is None else other.recall_tp
            )
        return PRFScore(
            self.tp + other.tp,
            self.system_count + other.system_count,
            self.gold_count + other.gold_count,
            rtp,
        )


@dataclass(frozen=True)
class AccuracyScore:
    correct: int
    total: int

    def __post_init__(self):
        if not 0 <= self.correct <= self.total:
            raise ValueError(f"bad accuracy counts {self}")

    @property
    def accuracy(self) -> float:
        # nothing to label counts as fully correct, like an empty PRF pair
        return self.correct / self.total if self.total else 1.0

    def __add__(self, other: AccuracyScore) -> AccuracyScore:
        return AccuracyScore(self.correct + other.correct, self.total + other.total)


def prf(tp: int, sys_n: int, gold_n: int) -> PRFScore:
    return PRFScore(tp, sys_n, gold_n)


def attributes_for(kind: str) -> tuple[str, ...]:
    if kind == TIMEX:
        return TIMEX_ATTRIBUTES
    if kind == EVENT:
        return EVENT_ATTRIBUTES
    raise ValueError(f"unknown entity kind {kind!r}")


def _check_attribute(kind, name):
    allowed = attributes_for(kind) + (("docTimeRel",) if kind == EVENT else ())
    if name not in allowed:
        raise UnknownAttributeError(f"{kind} has no scored attribute {name!r}")


def match_entities(sys: Document, gold: Document, kind: str, mode: MatchMode = MatchMode.EXACT):
    """Pair system and gold entities of one kind, each used at most once.

    EXACT pairs identical spans. OVERLAP takes overlapping pairs greedily by
    overlap length (longest first), preferring identical spans on ties and
    then earlier system and gold begins.
    """
    if sys.doc_id != gold.doc_id or sys.text != gold.text:
        raise DocumentMismatchError(
            f"cannot match {sys.doc_id!r} against {gold.doc_id!r}: documents differ"
        )
    mode = MatchMode(mode)
    sys_ents, gold_ents = sys.entities(kind), gold.entities(kind)
    if mode is MatchMode.EXACT:
        by_span = {g.span: g for g in gold_ents}
        return [(s, by_span[s.span]) for s in sys_ents if s.span in by_span]

    candidates = []
    for s in sys_ents:
        for g in gold_ents:
            ov = s.span.overlap(g.span)
            if ov > 0:
                candidates.append(
                    (-ov, s.span != g.span, s.span.begin, g.span.begin,
                     s.span.end, g.span.end, s, g)
                )
    candidates.sort(key=lambda c: c[:6])
    used_s, used_g = set(), set()
    pairs = []
    for *_, s, g in candidates:
        if s.id in used_s or g.id in used_g:
            continue
        used_s.add(s.id)
        used_g.add(g.id)
        pairs.append((s, g))
    pairs.sort(key=lambda p: (p[0].span, p[1].span))
    return pairs


def _aligned_docs(sys: Corpus, gold: Corpus):
    """Yield (system_doc, gold_doc) for every gold document.

    Gold documents with no system counterpart are paired with an empty copy.
    """
    sys_by_id = sys.by_id()
    gold_by_id = gold.by_id()
    unknown = sorted(set(sys_by_id) - set(gold_by_id))
    if unknown:
        raise DocumentMismatchError(f"system documents not in gold: {', '.join(unknown)}")
    for doc_id in sorted(gold_by_id):
        g = gold_by_id[doc_id]
        s = sys_by_id.get(doc_id)
        if s is None:
            s = g.replace(timexes=(), events=(), relations=())
        yield s, g


def _pair_score(sys, gold, kind, mode, agree) -> PRFScore:
    total = PRFScore(0, 0, 0)
    for s, g in _aligned_docs(sys, gold):
        pairs = match_entities(s, g, kind, mode)
        tp = sum(1 for a, b in pairs if agree(a, b))
        total = total + PRFScore(tp, len(s.entities(kind)), len(g.entities(kind)))
    return total


def check_entity_alignment(sys: Corpus, gold: Corpus, kind: str, with_attributes=False):
    """Raise AlignmentError unless system entities mirror gold ids and spans."""
    sys_by_id = sys.by_id()
    extra = sorted(set(sys_by_id) - set(gold.by_id()))
    if extra:
        raise AlignmentError(f"system documents not in gold: {', '.join(extra)}")
    attrs = attributes_for(kind) if with_attributes else ()
    for g in gold.documents:
        s = sys_by_id.get(g.doc_id)
        if s is None:
            raise AlignmentError(f"{g.doc_id}: missing from system output")
        if s.text != g.text:
            raise AlignmentError(f"{g.doc_id}: system text differs from gold")

        def sig(doc):
            return {
                (e.id, e.span, tuple(e.attribute(a) for a in attrs)) for e in doc.entities(kind)
            }

        if sig(s) != sig(g):
            what = "spans and attributes" if with_attributes else "spans"
            raise AlignmentError(f"{g.doc_id}: system {kind} {what} are not aligned with gold")


def _accuracy(sys, gold, kind, agree) -> AccuracyScore:
    check_entity_alignment(sys, gold, kind)
    sys_by_id = sys.by_id()
    total = AccuracyScore(0, 0)
    for g in gold.documents:
        s_ents = {e.id: e for e in sys_by_id[g.doc_id].entities(kind)}
        g_ents = g.entities(kind)
        correct = sum(1 for e in g_ents if agree(s_ents[e.id], e))
        total = total + AccuracyScore(correct, len(g_ents))
    return total


def score_spans(sys: Corpus, gold: Corpus, kind: str, mode=MatchMode.EXACT) -> PRFScore:
    if kind not in KINDS:
        raise ValueError(f"unknown entity kind {kind!r}")
    return _pair_score(sys, gold, kind, mode, lambda a, b: True)


def score_attribute(sys, gold, kind, attribute_name, mode=MatchMode.EXACT, form=Form.PRF):
    _check_attribute(kind, attribute_name)

    def agree(a, b):
        return a.attribute(attribute_name) == b.attribute(attribute_name)

    if Form(form) is Form.ACCURACY:
        return _accuracy(sys, gold, kind, agree)
    return _pair_score(sys, gold, kind, mode, agree)


def score_all_attributes(sys, gold, kind, mode=MatchMode.EXACT, form=Form.PRF):
    attrs = attributes_for(kind)

    def agree(a, b):
        return all(a.attribute(n) == b.attribute(n) for n in attrs)

    if Form(form) is Form.ACCURACY:
        return _accuracy(sys, gold, kind, agree)
    return _pair_score(sys, gold, kind, mode, agree)


def score_doc_time_rel(sys, gold, mode=MatchMode.EXACT, form=Form.PRF):
    return score_attribute(sys, gold, EVENT, "docTimeRel", mode, form)


def _relation_keys(doc: Document):
    ents = {e.id: (e.kind, e.span) for e in doc.entities()}
    return {(ents[r.source], ents[r.target]) for r in doc.relations}


def score_relations(sys: Corpus, gold: Corpus, closure=ClosureMode.OFF, warnings=None) -> PRFScore:
    """CONTAINS scores; endpoints correspond across system and gold by kind and span.

    With BOTH_CLOSED, both relation sets are closed before counting. With
    ASYMMETRIC, system links are checked against the closed gold set for
    precision and gold links against the closed system set for recall.
    A cyclic gold graph raises; a cyclic system graph is repaired and a
    warning is appended to ``warnings``.
    """
    if isinstance(closure, bool):
        closure = ClosureMode.BOTH_CLOSED if closure else ClosureMode.OFF
    closure = ClosureMode(closure)
    total = PRFScore(0, 0, 0, 0 if closure is ClosureMode.ASYMMETRIC else None)
    for s, g in _aligned_docs(sys, gold):
        s_keys, g_keys = _relation_keys(s), _relation_keys(g)
        if closure is ClosureMode.OFF:
            total = total + PRFScore(len(s_keys & g_keys), len(s_keys), len(g_keys))
            continue
        g_closed, _ = close_document(g, repair=False)
        s_closed, notes = close_document(s, repair=True)
        if warnings is not None:
            warnings.extend(notes)
        gc_keys, sc_keys = _relation_keys(g_closed), _relation_keys(s_closed)
        if closure is ClosureMode.BOTH_CLOSED:
            total = total + PRFScore(len(sc_keys & gc_keys), len(sc_keys), len(gc_keys))
        else:
            total = total + PRFScore(
                len(s_keys & gc_keys), len(s_keys), len(g_keys), len(g_keys & sc_keys)
            )
    return total
