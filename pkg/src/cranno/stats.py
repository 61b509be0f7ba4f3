"""Corpus-level clarification statistics and the cross-corpus comparison.

Rates are kept at full precision internally; display rounding (one
decimal for rates, whole percentages for the per-level split) happens
only in the text renderer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .corpus import Dialogue, PressureProfile
from .errors import StatsError
from .ladder import GROUNDED_LEVELS, Level
from .recipe import AnnotationSet, LabelKind

LEVEL_ORDER: tuple[Level, ...] = GROUNDED_LEVELS + (Level.OTHER,)


def cr_rate(annotations: AnnotationSet, dialogue: Dialogue) -> float:
    """Clarifications per hundred turns."""
    if (
        annotations.dialogue_id != dialogue.dialogue_id
        or annotations.n_turns != len(dialogue.turns)
    ):
        raise StatsError(
            f"annotation set covers {annotations.dialogue_id!r}"
            f"/{annotations.n_turns}, dialogue is {dialogue.dialogue_id!r}"
            f"/{len(dialogue.turns)}"
        )
    assert dialogue.turns, "corpus invariants forbid empty dialogues"
    crs = sum(1 for a in annotations.entries if a.label is LabelKind.CR)
    return 100.0 * crs / len(dialogue.turns)


def level_distribution(annotations: AnnotationSet) -> dict[Level, float]:
    """Percentage of clarifications at each level; {} when there are none."""
    crs = [a for a in annotations.entries if a.label is LabelKind.CR]
    if not crs:
        return {}
    counts = {level: 0 for level in LEVEL_ORDER}
    for a in crs:
        assert a.level is not None
        counts[a.level] += 1
    return {level: 100.0 * n / len(crs) for level, n in counts.items()}


@dataclass(frozen=True)
class CorpusSummary:
    """One comparison-table column: task pressures plus observed rates."""

    name: str
    task: str
    profile: PressureProfile
    total_turns: int
    avg_dialogue_length: float
    cr_rate_percent: float
    level_percents: Mapping[Level, float]

    def __post_init__(self) -> None:
        if not 0.0 <= self.cr_rate_percent <= 100.0:
            raise StatsError("cr_rate_percent must be within [0, 100]")
        if self.level_percents:
            if any(v < 0 for v in self.level_percents.values()):
                raise StatsError("level percentages must be non-negative")
            total = sum(self.level_percents.values())
            if abs(total - 100.0) > 1.0:
                raise StatsError(
                    f"level percentages must sum to 100 within 1.0, got {total}"
                )
        elif self.cr_rate_percent > 0:
            raise StatsError("nonzero CR rate needs a level distribution")


@dataclass(frozen=True)
class ComparisonReport:
    columns: tuple[CorpusSummary, ...]

    def __post_init__(self) -> None:
        if not self.columns:
            raise StatsError("comparison needs at least one corpus summary")


def summarize(
    name: str,
    task: str,
    profile: PressureProfile,
    annotated: Iterable[tuple[Dialogue, AnnotationSet]],
) -> CorpusSummary:
    """Build a comparison column from annotated dialogues."""
    annotated = list(annotated)
    if not annotated:
        raise StatsError("no dialogues to summarize")
    total_turns = sum(len(d.turns) for d, _ in annotated)
    total_crs = 0
    level_counts = {level: 0 for level in LEVEL_ORDER}
    for dialogue, annotations in annotated:
        cr_rate(annotations, dialogue)  # validates the pairing
        for a in annotations.entries:
            if a.label is LabelKind.CR:
                assert a.level is not None
                total_crs += 1
                level_counts[a.level] += 1
    level_percents: dict[Level, float] = {}
    if total_crs:
        level_percents = {
            level: 100.0 * n / total_crs for level, n in level_counts.items()
        }
    return CorpusSummary(
        name=name,
        task=task,
        profile=profile,
        total_turns=total_turns,
        avg_dialogue_length=total_turns / len(annotated),
        cr_rate_percent=100.0 * total_crs / total_turns,
        level_percents=level_percents,
    )


def comparison_table(summaries: Iterable[CorpusSummary]) -> ComparisonReport:
    """Pure projection: columns appear in the order given."""
    return ComparisonReport(columns=tuple(summaries))


def _yes_no(value: bool) -> str:
    return "Yes" if value else "No"


def _participants_text(n: int) -> str:
    if n == 1:
        return "One"
    if n == 2:
        return "Two"
    return "More than two"


def _enum_text(value: Any) -> str:
    return str(value.value).replace("_", " ").capitalize()


def _level_percent(summary: CorpusSummary, level: Level) -> float:
    return float(summary.level_percents.get(level, 0.0))


COMPARISON_ROWS: tuple[str, ...] = (
    "Task",
    "Shared view",
    "Participants",
    "World validation",
    "Information Flow",
    "Total # turns",
    "Avg dialogue length",
    "% of CRs/turns",
    "% CRs level 1",
    "% CRs level 2",
    "% CRs level 3",
    "% CRs level 4",
    "% CRs other",
)


def _row_values(row: str, columns: tuple[CorpusSummary, ...]) -> list[str]:
    def cell(s: CorpusSummary) -> str:
        if row == "Task":
            return s.task
        if row == "Shared view":
            return _yes_no(s.profile.shared_view)
        if row == "Participants":
            return _participants_text(s.profile.participants)
        if row == "World validation":
            return _enum_text(s.profile.world_validation)
        if row == "Information Flow":
            return _enum_text(s.profile.information_flow)
        if row == "Total # turns":
            return str(s.total_turns)
        if row == "Avg dialogue length":
            return f"{s.avg_dialogue_length:.0f}"
        if row == "% of CRs/turns":
            return f"{s.cr_rate_percent:.1f}"
        if row == "% CRs other":
            return f"{_level_percent(s, Level.OTHER):.0f}"
        for level in GROUNDED_LEVELS:
            if row == f"% CRs level {level.rank}":
                return f"{_level_percent(s, level):.0f}"
        raise AssertionError(f"unknown row {row!r}")

    return [cell(s) for s in columns]


def render_comparison_text(report: ComparisonReport) -> str:
    """Aligned plain-text table, one corpus per column."""
    header = ["Characteristics"] + [s.name for s in report.columns]
    rows = [[row] + _row_values(row, report.columns) for row in COMPARISON_ROWS]
    widths = [
        max(len(line[i]) for line in [header] + rows)
        for i in range(len(header))
    ]
    lines = []
    for line in [header] + rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
    return "\n".join(lines) + "\n"


def summary_record(summary: CorpusSummary) -> dict[str, Any]:
    """Machine-readable comparison column at full precision."""
    profile = summary.profile
    return {
        "name": summary.name,
        "task": summary.task,
        "task_oriented": profile.task_oriented,
        "shared_view": profile.shared_view,
        "participants": profile.participants,
        "world_validation": profile.world_validation.value,
        "information_flow": profile.information_flow.value,
        "irreversible_actions": profile.irreversible_actions,
        "total_turns": summary.total_turns,
        "avg_dialogue_length": summary.avg_dialogue_length,
        "cr_rate_percent": summary.cr_rate_percent,
        "level_percents": {
            ("other" if level is Level.OTHER else level.value): (
                _level_percent(summary, level)
            )
            for level in LEVEL_ORDER
        },
    }


def dialogue_stats_record(
    annotations: AnnotationSet, dialogue: Dialogue
) -> dict[str, Any]:
    """Per-dialogue rates for one annotated session."""
    distribution = level_distribution(annotations)
    return {
        "dialogue": dialogue.dialogue_id,
        "turns": len(dialogue.turns),
        "crs": sum(1 for a in annotations.entries if a.label is LabelKind.CR),
        "cr_rate_percent": cr_rate(annotations, dialogue),
        "level_percents": {
            ("other" if level is Level.OTHER else level.value): value
            for level, value in distribution.items()
        },
    }
