"""The three evaluation settings and the score report they produce."""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field

from .corpus_io import dumps_corpus
from .metrics import (
    AccuracyScore,
    ClosureMode,
    Form,
    MatchMode,
    PRFScore,
    attributes_for,
    check_entity_alignment,
    score_all_attributes,
    score_attribute,
    score_doc_time_rel,
    score_relations,
    score_spans,
)
from .model import EVENT, TIMEX, Corpus

SUBTASKS = ("TS", "ES", "TA", "EA", "DR", "CR")

ALLOWED_SUBTASKS = {
    1: SUBTASKS,
    2: ("TA", "EA", "DR", "CR"),
    3: ("DR", "CR"),
}


class ScenarioError(ValueError):
    """Bad scenario configuration (a usage problem, not a data problem)."""


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: int = 1
    subtasks: tuple[str, ...] | None = None
    match_mode: MatchMode = MatchMode.EXACT
    closure_mode: ClosureMode = ClosureMode.BOTH_CLOSED

    def __post_init__(self):
        if self.scenario not in ALLOWED_SUBTASKS:
            raise ScenarioError(f"scenario must be 1, 2 or 3, got {self.scenario!r}")
        allowed = ALLOWED_SUBTASKS[self.scenario]
        subtasks = allowed if self.subtasks is None else tuple(self.subtasks)
        bad = [s for s in subtasks if s not in allowed]
        if bad:
            raise ScenarioError(
                f"scenario {self.scenario} does not evaluate {', '.join(bad)} "
                f"(allowed: {', '.join(allowed)})"
            )
        object.__setattr__(self, "subtasks", tuple(s for s in SUBTASKS if s in subtasks))
        object.__setattr__(self, "match_mode", MatchMode(self.match_mode))
        object.__setattr__(self, "closure_mode", ClosureMode(self.closure_mode))


@dataclass
class Report:
    scores: dict = field(default_factory=dict)  # (subtask, metric) -> PRFScore | AccuracyScore
    metadata: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def rows(self):
        return sorted(self.scores.items())

    def __getitem__(self, key):
        return self.scores[key]


def expected_metrics(config: ScenarioConfig) -> set[tuple[str, str]]:
    """The (subtask, metric) names a report for ``config`` must contain."""
    out = set()
    form = "F1" if config.scenario == 1 else "accuracy"
    for sub in config.subtasks:
        if sub in ("TS", "ES"):
            out.add((sub, "span-F1"))
        elif sub in ("TA", "EA"):
            kind = TIMEX if sub == "TA" else EVENT
            out.update((sub, f"{a}-{form}") for a in attributes_for(kind))
            out.add((sub, f"overall-{form}"))
        elif sub == "DR":
            out.add((sub, f"docTimeRel-{form}"))
        elif sub == "CR":
            out.add((sub, "plain-F1"))
            if config.closure_mode is not ClosureMode.OFF:
                out.add((sub, "closure-F1"))
    return out


def corpus_digest(corpus: Corpus) -> str:
    return hashlib.sha256(dumps_corpus(corpus)).hexdigest()[:16]


def run_scenario(config: ScenarioConfig, system: Corpus, gold: Corpus) -> Report:
    report = Report()
    report.metadata = {
        "scenario": config.scenario,
        "subtasks": ",".join(config.subtasks),
        "match": config.match_mode.value,
        "closure": config.closure_mode.value,
        "gold": f"{corpus_digest(gold)} ({len(gold)} documents)",
        "system": f"{corpus_digest(system)} ({len(system)} documents)",
    }
    mode = config.match_mode
    if config.scenario == 1:
        form, suffix = Form.PRF, "F1"
    else:
        form, suffix = Form.ACCURACY, "accuracy"
        # spans are given in settings 2 and 3, attributes too in 3
        for kind in (TIMEX, EVENT):
            check_entity_alignment(system, gold, kind, with_attributes=config.scenario == 3)

    for sub in config.subtasks:
        if sub in ("TS", "ES"):
            kind = TIMEX if sub == "TS" else EVENT
            report.scores[sub, "span-F1"] = score_spans(system, gold, kind, mode)
        elif sub in ("TA", "EA"):
            kind = TIMEX if sub == "TA" else EVENT
            for attr in attributes_for(kind):
                report.scores[sub, f"{attr}-{suffix}"] = score_attribute(
                    system, gold, kind, attr, mode, form
                )
            report.scores[sub, f"overall-{suffix}"] = score_all_attributes(
                system, gold, kind, mode, form
            )
        elif sub == "DR":
            report.scores[sub, f"docTimeRel-{suffix}"] = score_doc_time_rel(
                system, gold, mode, form
            )
        elif sub == "CR":
            report.scores[sub, "plain-F1"] = score_relations(system, gold, ClosureMode.OFF)
            if config.closure_mode is not ClosureMode.OFF:
                report.scores[sub, "closure-F1"] = score_relations(
                    system, gold, config.closure_mode, warnings=report.warnings
                )
    return report


TSV_HEADER = ("subtask", "metric", "tp", "system", "gold", "precision", "recall", "f1")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def score_values(score):
    """(tp, system, gold, P, R, F1) for either score type.

    Accuracy rows put the correct count in the tp column and the total in
    both denominators; with aligned entity sets P, R and F1 all equal the
    accuracy.
    """
    if isinstance(score, AccuracyScore):
        a = score.accuracy
        return score.correct, score.total, score.total, a, a, a
    return score.tp, score.system_count, score.gold_count, score.precision, score.recall, score.f1


def emit_tsv(report: Report) -> bytes:
    out = io.StringIO()
    out.write("\t".join(TSV_HEADER) + "\n")
    for (sub, metric), score in report.rows():
        tp, sn, gn, p, r, f = score_values(score)
        out.write("\t".join([sub, metric, str(tp), str(sn), str(gn), _fmt(p), _fmt(r), _fmt(f)]))
        out.write("\n")
    return out.getvalue().encode("utf-8")


def _score_to_json(sub, metric, score):
    tp, sn, gn, p, r, f = score_values(score)
    row = {"subtask": sub, "metric": metric}
    if isinstance(score, AccuracyScore):
        row.update(kind="accuracy", correct=score.correct, total=score.total, accuracy=p)
    else:
        row.update(kind="prf", tp=tp, system=sn, gold=gn, precision=p, recall=r, f1=f)
        if score.recall_tp is not None:
            row["recall_tp"] = score.recall_tp
    return row


def emit_json(report: Report) -> bytes:
    payload = {
        "metadata": report.metadata,
        "scores": [_score_to_json(sub, metric, s) for (sub, metric), s in report.rows()],
        "warnings": list(report.warnings),
    }
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")


def emit_report(report: Report, format: str = "tsv") -> bytes:
    if format == "tsv":
        return emit_tsv(report)
    if format == "json":
        return emit_json(report)
    raise ValueError(f"unknown report format {format!r}")


def parse_json_report(data: bytes | str) -> Report:
    payload = json.loads(data)
    report = Report(metadata=payload["metadata"], warnings=list(payload["warnings"]))
    for row in payload["scores"]:
        if row["kind"] == "accuracy":
            score = AccuracyScore(row["correct"], row["total"])
        else:
            score = PRFScore(row["tp"], row["system"], row["gold"], row.get("recall_tp"))
        report.scores[row["subtask"], row["metric"]] = score
    return report
