import dataclasses
import json

import pytest

from clintempeval.metrics import AccuracyScore, AlignmentError, ClosureMode, PRFScore
from clintempeval.model import Corpus, Polarity
from clintempeval.scenarios import (
    Report,
    ScenarioConfig,
    ScenarioError,
    emit_report,
    expected_metrics,
    parse_json_report,
    run_scenario,
)
from clintempeval.synthetic import GeneratorConfig, generate_synthetic

EVALUATION_TABLE = {
    1: {
        ("TS", "span-F1"), ("ES", "span-F1"),
        ("TA", "type-F1"), ("TA", "value-F1"), ("TA", "overall-F1"),
        ("EA", "type-F1"), ("EA", "polarity-F1"), ("EA", "degree-F1"), ("EA", "modality-F1"),
        ("EA", "overall-F1"),
        ("DR", "docTimeRel-F1"),
        ("CR", "plain-F1"), ("CR", "closure-F1"),
    },
    2: {
        ("TA", "type-accuracy"), ("TA", "value-accuracy"), ("TA", "overall-accuracy"),
        ("EA", "type-accuracy"), ("EA", "polarity-accuracy"), ("EA", "degree-accuracy"),
        ("EA", "modality-accuracy"), ("EA", "overall-accuracy"),
        ("DR", "docTimeRel-accuracy"),
        ("CR", "plain-F1"), ("CR", "closure-F1"),
    },
    3: {("DR", "docTimeRel-accuracy"), ("CR", "plain-F1"), ("CR", "closure-F1")},
}


@pytest.mark.parametrize("scenario", [1, 2, 3])
def test_report_has_exactly_the_listed_metrics(scenario, small_synthetic):
    config = ScenarioConfig(scenario)
    assert expected_metrics(config) == EVALUATION_TABLE[scenario]
    report = run_scenario(config, small_synthetic, small_synthetic)
    assert set(report.scores) == EVALUATION_TABLE[scenario]
    for score in report.scores.values():
        if isinstance(score, PRFScore):
            assert (score.precision, score.recall, score.f1) == (1.0, 1.0, 1.0)
        else:
            assert score.accuracy == 1.0


def test_subtask_subset_and_closure_off(small_synthetic):
    config = ScenarioConfig(1, subtasks=("CR", "TS"), closure_mode=ClosureMode.OFF)
    assert config.subtasks == ("TS", "CR")
    report = run_scenario(config, small_synthetic, small_synthetic)
    assert set(report.scores) == {("TS", "span-F1"), ("CR", "plain-F1")}


@pytest.mark.parametrize("scenario,subtasks", [(2, ("TS",)), (3, ("EA",)), (3, ("ES", "DR")), (1, ("XX",))])
def test_scenario_subtask_mismatch(scenario, subtasks):
    with pytest.raises(ScenarioError):
        ScenarioConfig(scenario, subtasks=subtasks)


def test_bad_scenario_number():
    with pytest.raises(ScenarioError):
        ScenarioConfig(4)


def shift_first_event(c: Corpus) -> Corpus:
    doc = c.documents[0]
    e = doc.events[0]
    moved = dataclasses.replace(e, span=dataclasses.replace(e.span, end=e.span.end - 1))
    return Corpus((doc.replace(events=(moved,) + doc.events[1:]),) + c.documents[1:])


@pytest.mark.parametrize("scenario", [2, 3])
def test_misaligned_spans_rejected(scenario, small_synthetic):
    with pytest.raises(AlignmentError):
        run_scenario(ScenarioConfig(scenario), shift_first_event(small_synthetic), small_synthetic)


def test_scenario_three_requires_given_attributes(small_synthetic):
    doc = small_synthetic.documents[0]
    e = doc.events[0]
    flipped = dataclasses.replace(e, polarity=Polarity.NEG if e.polarity is Polarity.POS else Polarity.POS)
    sys = Corpus((doc.replace(events=(flipped,) + doc.events[1:]),) + small_synthetic.documents[1:])
    run_scenario(ScenarioConfig(2), sys, small_synthetic)
    with pytest.raises(AlignmentError):
        run_scenario(ScenarioConfig(3), sys, small_synthetic)


def test_scenario_three_scores_doc_time_rel(small_synthetic):
    doc = small_synthetic.documents[0]
    e = doc.events[0]
    other = [d for d in type(e.doc_time_rel) if d is not e.doc_time_rel][0]
    sys = Corpus((doc.replace(events=(dataclasses.replace(e, doc_time_rel=other),) + doc.events[1:]),)
                 + small_synthetic.documents[1:])
    report = run_scenario(ScenarioConfig(3), sys, small_synthetic)
    acc = report["DR", "docTimeRel-accuracy"]
    assert acc.correct == acc.total - 1


def perturbed_pair():
    gold = generate_synthetic(GeneratorConfig(
        n_patients=2, notes_per_patient=(1, 1), events_per_note=(8, 10),
        timexes_per_note=(2, 3), seed=42,
    ))
    d0, d1 = gold.documents
    assert (len(d0.events), len(d1.events), len(d0.relations), len(d1.relations)) == (9, 8, 4, 2)
    # drop P0_N00/e4 (no links), flip polarity of P1_N00/e1, drop link t2 -> e6
    d0s = d0.replace(events=tuple(e for e in d0.events if e.id != "e4"))
    assert all("e4" not in (r.source, r.target) for r in d0.relations)
    events1 = tuple(
        dataclasses.replace(e, polarity=Polarity.NEG) if e.id == "e1" else e for e in d1.events
    )
    assert d1.events[1].polarity is Polarity.POS
    d1s = d1.replace(events=events1, relations=tuple(r for r in d1.relations if r.target != "e6"))
    return Corpus((d0s, d1s)), gold


def test_hand_scored_perturbation():
    sys, gold = perturbed_pair()
    report = run_scenario(ScenarioConfig(1), sys, gold)
    es = report["ES", "span-F1"]
    assert (es.tp, es.system_count, es.gold_count) == (16, 16, 17)
    assert es.f1 == pytest.approx(32 / 33, abs=1e-12)
    pol = report["EA", "polarity-F1"]
    assert (pol.tp, pol.system_count, pol.gold_count) == (15, 16, 17)
    assert pol.f1 == pytest.approx(30 / 33, abs=1e-12)
    cr = report["CR", "plain-F1"]
    assert (cr.tp, cr.system_count, cr.gold_count) == (5, 5, 6)
    assert cr.f1 == pytest.approx(10 / 11, abs=1e-12)
    # no containment chains in gold, so closure adds nothing
    assert report["CR", "closure-F1"] == cr
    assert report["TS", "span-F1"].f1 == 1.0
    assert report["EA", "degree-F1"].tp == 16


def test_tsv_schema():
    report = Report(scores={("CR", "closure-F1"): PRFScore(1, 1, 3)})
    lines = emit_report(report, "tsv").decode().splitlines()
    assert lines[0] == "subtask\tmetric\ttp\tsystem\tgold\tprecision\trecall\tf1"
    assert lines[1] == "CR\tclosure-F1\t1\t1\t3\t1.000000\t0.333333\t0.500000"


def test_empty_report_is_header_only():
    data = emit_report(Report(), "tsv")
    assert data == b"subtask\tmetric\ttp\tsystem\tgold\tprecision\trecall\tf1\n"


def test_tsv_rows_sorted_and_deterministic(small_synthetic):
    report = run_scenario(ScenarioConfig(1), small_synthetic, small_synthetic)
    a, b = emit_report(report, "tsv"), emit_report(report, "tsv")
    assert a == b
    keys = [tuple(line.split("\t")[:2]) for line in a.decode().splitlines()[1:]]
    assert keys == sorted(keys)


def test_json_round_trip():
    sys, gold = perturbed_pair()
    for closure in ClosureMode:
        report = run_scenario(ScenarioConfig(1, closure_mode=closure), sys, gold)
        report.warnings.append("example warning")
        data = emit_report(report, "json")
        back = parse_json_report(data)
        assert back.scores == report.scores
        assert back.metadata == report.metadata
        assert back.warnings == report.warnings
        assert emit_report(back, "json") == data
    acc = Report(scores={("DR", "docTimeRel-accuracy"): AccuracyScore(3, 5)}, metadata={"scenario": 2})
    assert parse_json_report(emit_report(acc, "json")).scores == acc.scores
    assert json.loads(emit_report(acc, "json"))["scores"][0]["accuracy"] == 0.6


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(Report(), "xml")
