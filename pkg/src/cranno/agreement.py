"""Inter-annotator agreement over per-turn labels.

Annotation sets are projected into a label space before comparison. The
default space collapses source references: a clarification counts by its
level alone ("CR-L1" .. "CR-L4", "CR-Other") and every other turn is
"NotCR". A stricter space that keeps sources apart ("CR-L4@3") is
available via :func:`source_sensitive_space`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AgreementError
from .ladder import Level
from .recipe import Annotation, AnnotationSet, LabelKind

NOT_CR = "NotCR"
DEFAULT_LABELS = ("CR-L1", "CR-L2", "CR-L3", "CR-L4", "CR-Other", NOT_CR)


@dataclass(frozen=True)
class LabelSpace:
    labels: tuple[str, ...] = DEFAULT_LABELS

    def __post_init__(self) -> None:
        if len(self.labels) < 2:
            raise AgreementError("label space needs at least two labels")
        if len(set(self.labels)) != len(self.labels):
            raise AgreementError("label space contains duplicates")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise AgreementError(f"label {label!r} not in label space") from None


def _level_tag(level: Level) -> str:
    return "Other" if level is Level.OTHER else level.value


def cr_label(level: Level, source: int | None = None) -> str:
    """Render a clarification label, optionally source-sensitive."""
    label = f"CR-{_level_tag(level)}"
    if source is not None:
        label = f"{label}@{source}"
    return label


def parse_label(label: str) -> tuple[Level | None, int | None]:
    """Inverse of :func:`cr_label`; NotCR parses to (None, None)."""
    if label == NOT_CR:
        return None, None
    body = label.removeprefix("CR-")
    if body == label:
        raise AgreementError(f"cannot parse label {label!r}")
    body, _, source_part = body.partition("@")
    source = None
    if source_part:
        if not source_part.isdigit():
            raise AgreementError(f"cannot parse label {label!r}")
        source = int(source_part)
    if body == "Other":
        return Level.OTHER, source
    try:
        level = Level(body)
    except ValueError:
        raise AgreementError(f"cannot parse label {label!r}") from None
    return level, source


def project_label(annotations: AnnotationSet, turn: int,
                  source_sensitive: bool = False) -> str:
    """Collapse a turn's annotations to one comparison label."""
    cr = annotations.cr_for_turn(turn)
    if cr is None:
        return NOT_CR
    assert cr.level is not None
    return cr_label(cr.level, cr.source if source_sensitive else None)


def source_sensitive_space(*annotation_sets: AnnotationSet) -> LabelSpace:
    """Label space keeping (level, source) pairs distinct, built from the
    labels observed in the given sets."""
    observed = sorted(
        {
            project_label(s, a.turn, source_sensitive=True)
            for s in annotation_sets
            for a in s.entries
            if a.label is LabelKind.CR
        }
    )
    return LabelSpace(labels=tuple(observed) + (NOT_CR,))


@dataclass(eq=False)
class ConfusionMatrix:
    """Square count grid: rows are annotator A's labels, columns B's."""

    labels: LabelSpace
    counts: np.ndarray

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        n = len(self.labels.labels)
        if self.counts.shape != (n, n):
            raise AgreementError(
                f"counts must be {n}x{n}, got {self.counts.shape}"
            )
        if (self.counts < 0).any():
            raise AgreementError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def transpose(self) -> "ConfusionMatrix":
        return ConfusionMatrix(self.labels, self.counts.T.copy())


@dataclass(frozen=True)
class AgreementReport:
    """Cohen's kappa with its ingredients; ``kappa`` is None when the
    expected agreement is 1 (degenerate marginals make it undefined)."""

    kappa: float | None
    observed_agreement: float
    expected_agreement: float
    n_items: int
    undefined: bool = False


def confusion_matrix(a: AnnotationSet, b: AnnotationSet,
                     space: LabelSpace | None = None,
                     source_sensitive: bool = False) -> ConfusionMatrix:
    """Cross-tabulate two annotators' labels over the same dialogue."""
    if space is None:
        space = LabelSpace()
    if a.dialogue_id != b.dialogue_id or a.n_turns != b.n_turns:
        raise AgreementError(
            "annotation sets cover different turn sets: "
            f"{a.dialogue_id!r}/{a.n_turns} vs {b.dialogue_id!r}/{b.n_turns}"
        )
    n = len(space.labels)
    counts = np.zeros((n, n), dtype=np.int64)
    for turn in range(a.n_turns):
        row = space.index(project_label(a, turn, source_sensitive))
        col = space.index(project_label(b, turn, source_sensitive))
        counts[row, col] += 1
    return ConfusionMatrix(space, counts)


def cohen_kappa(matrix: ConfusionMatrix) -> AgreementReport:
    """Chance-corrected agreement: (p_o - p_e) / (1 - p_e).

    p_o is the diagonal share; p_e the agreement expected from the
    marginals. When p_e = 1 (all mass in one cell) kappa is undefined and
    flagged rather than given a sentinel value.
    """
    total = matrix.total
    if total == 0:
        raise AgreementError("empty matrix: no items to compare")
    counts = matrix.counts
    trace = int(np.trace(counts))
    rows = counts.sum(axis=1)
    cols = counts.sum(axis=0)
    pe_numer = int(np.dot(rows, cols))
    pe_denom = total * total
    p_o = trace / total
    p_e = pe_numer / pe_denom
    if pe_numer == pe_denom:
        return AgreementReport(
            kappa=None, observed_agreement=p_o, expected_agreement=1.0,
            n_items=total, undefined=True,
        )
    kappa = (p_o - p_e) / (1.0 - p_e)
    return AgreementReport(
        kappa=kappa, observed_agreement=p_o, expected_agreement=p_e,
        n_items=total,
    )


def kappa_display(report: AgreementReport) -> str:
    """Two-decimal kappa in the conventional leading-dot style (".84")."""
    if report.undefined or report.kappa is None:
        return "undefined"
    text = f"{report.kappa:.2f}"
    if text.startswith("0."):
        return text[1:]
    if text.startswith("-0."):
        return "-" + text[2:]
    return text


def disagreeing_turns(a: AnnotationSet, b: AnnotationSet,
                      source_sensitive: bool = False) -> list[int]:
    if a.dialogue_id != b.dialogue_id or a.n_turns != b.n_turns:
        raise AgreementError("annotation sets cover different turn sets")
    return [
        turn
        for turn in range(a.n_turns)
        if project_label(a, turn, source_sensitive)
        != project_label(b, turn, source_sensitive)
    ]


def adjudicate(a: AnnotationSet, b: AnnotationSet,
               resolutions: dict[int, str],
               source_sensitive: bool = False) -> AnnotationSet:
    """Merge two annotation sets after discussion.

    ``resolutions`` must cover exactly the disagreeing turns. A resolution
    that matches one annotator's label adopts that annotator's records for
    the turn; any other label from the space yields a bare record (the
    clarification source is unknown unless the label carries one).
    """
    disagreements = set(disagreeing_turns(a, b, source_sensitive))
    if set(resolutions) != disagreements:
        missing = sorted(disagreements - set(resolutions))
        extra = sorted(set(resolutions) - disagreements)
        raise AgreementError(
            f"resolutions must cover exactly the disagreements; "
            f"missing {missing}, extraneous {extra}"
        )
    merged: list[Annotation] = []
    for turn in range(a.n_turns):
        if turn not in resolutions:
            merged.extend(a.for_turn(turn))
            continue
        label = resolutions[turn]
        if label == project_label(a, turn, source_sensitive):
            merged.extend(a.for_turn(turn))
        elif label == project_label(b, turn, source_sensitive):
            merged.extend(b.for_turn(turn))
        else:
            level, source = parse_label(label)
            if level is not None:
                merged.append(
                    Annotation(turn=turn, label=LabelKind.CR, source=source,
                               level=level)
                )
    return AnnotationSet(
        dialogue_id=a.dialogue_id, n_turns=a.n_turns, entries=tuple(merged)
    )
