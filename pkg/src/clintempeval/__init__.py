"""Evaluation toolkit for temporal information extraction from clinical notes."""

from .baselines import (
    MajorityDr,
    MemorizationLexicon,
    apply_dr,
    apply_memorizer,
    link_closest_time,
    run_baseline,
    train_dr_majority,
    train_memorizer,
)
from .closure import (
    ConsistencyResult,
    InconsistentGraphError,
    RelationGraph,
    check_consistency,
    close_contains,
)
from .corpus_io import read_corpus, write_corpus
from .metrics import (
    AccuracyScore,
    ClosureMode,
    Form,
    MatchMode,
    PRFScore,
    match_entities,
    prf,
    score_all_attributes,
    score_attribute,
    score_doc_time_rel,
    score_relations,
    score_spans,
)
from .model import (
    ContainerRelation,
    Corpus,
    Document,
    EventEntity,
    Span,
    TimexEntity,
    entity_by_id,
    validate_document,
)
from .scenarios import Report, ScenarioConfig, emit_report, run_scenario
from .split import SplitSpec, split_by_patient
from .synthetic import GeneratorConfig, generate_synthetic

__version__ = "0.1.0"
