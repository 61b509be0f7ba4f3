"""Annotation toolchain for clarification requests grounded in modalities.

The package identifies and classifies clarification requests in dialogue
transcripts through a human-steered decision-graph session backed by a
proposal stack with four-level evidence tracking, and reports agreement
and cross-corpus statistics over the resulting annotations.
"""

from .agreement import (
    AgreementReport,
    ConfusionMatrix,
    LabelSpace,
    adjudicate,
    cohen_kappa,
    confusion_matrix,
)
from .corpus import (
    Corpus,
    Dialogue,
    PressureProfile,
    Turn,
    TurnKind,
    TurnRef,
    Violation,
    get_turn,
    parse_corpus,
    serialize_corpus,
    validate_corpus,
)
from .ladder import (
    CloseCause,
    Level,
    Proposal,
    Stack,
    can_annotate_cr,
    evidence_closure,
    push_proposal,
    record_evidence,
    unstack_over,
)
from .recipe import (
    Annotation,
    AnnotationSet,
    DecisionLog,
    DecisionPrompt,
    LabelKind,
    Session,
    annotations,
    apply_answer,
    gabsdil_prompt,
    next_prompt,
    parse_session_file,
    replay,
    serialize_log,
    serialize_session,
    start_session,
)
from .stats import (
    ComparisonReport,
    CorpusSummary,
    comparison_table,
    cr_rate,
    level_distribution,
    render_comparison_text,
    summarize,
)

__version__ = "0.1.0"
