import datetime

import pytest

from clintempeval.model import (
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
from clintempeval.synthetic import GeneratorConfig, generate_synthetic

DCT = datetime.date(2013, 5, 1)


def timex(id, begin, end, ttype="DATE", value="2013-05-01"):
    return TimexEntity(id, Span(begin, end), TimexType(ttype), value)


def event(id, begin, end, etype="NA", pol="POS", deg="NA", mod="ACTUAL", dtr="BEFORE"):
    return EventEntity(
        id, Span(begin, end), EventType(etype), Polarity(pol), Degree(deg),
        Modality(mod), DocTimeRel(dtr),
    )


def make_doc(text, timexes=(), events=(), relations=(), sentences=None,
             doc_id="d1", patient_id="p1"):
    if sentences is None:
        sentences = [Span(0, len(text))] if text else []
    return Document(
        doc_id=doc_id,
        patient_id=patient_id,
        text=text,
        dct=DCT,
        sentences=tuple(sentences),
        timexes=tuple(timexes),
        events=tuple(events),
        relations=tuple(ContainerRelation(s, t) for s, t in relations),
    )


def corpus(*docs):
    return Corpus(tuple(docs))


@pytest.fixture(scope="session")
def small_synthetic():
    return generate_synthetic(GeneratorConfig(
        n_patients=8, notes_per_patient=(1, 2), events_per_note=(15, 25),
        timexes_per_note=(3, 6), seed=11,
    ))


@pytest.fixture(scope="session")
def unambiguous_synthetic():
    return generate_synthetic(GeneratorConfig(
        n_patients=10, notes_per_patient=(3, 3), events_per_note=(30, 50),
        timexes_per_note=(4, 8), unambiguous_surfaces=True, seed=5,
    ))


# (number, title, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}: {detail}")
