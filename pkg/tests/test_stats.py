from __future__ import annotations

import pytest

from cranno import fixtures
from cranno.errors import StatsError
from cranno.ladder import Level
from cranno.recipe import Annotation, AnnotationSet, LabelKind, annotations
from cranno.stats import (
    COMPARISON_ROWS,
    CorpusSummary,
    comparison_table,
    cr_rate,
    dialogue_stats_record,
    level_distribution,
    render_comparison_text,
    summarize,
    summary_record,
)


def count_golden_crs() -> int:
    # Independent tally: count label records directly from the frozen
    # fixture constants rather than through the stats module.
    return len(fixtures.GOLDEN_CRS)


class TestCrRate:
    def test_golden_rate(self, fragment, golden):
        rate = cr_rate(annotations(golden), fragment.dialogues[0])
        expected = 100.0 * count_golden_crs() / 17
        assert rate == pytest.approx(expected, abs=1e-12)
        assert round(rate, 1) == 35.3

    def test_zero_crs(self, fragment):
        empty = AnnotationSet("s2", 17)
        assert cr_rate(empty, fragment.dialogues[0]) == 0.0

    def test_all_turns_crs(self, fragment):
        entries = tuple(
            Annotation(turn=i, label=LabelKind.CR, source=0, level=Level.L4)
            for i in range(17)
        )
        full = AnnotationSet("s2", 17, entries)
        assert cr_rate(full, fragment.dialogues[0]) == 100.0

    def test_mismatched_pairing_rejected(self, fragment):
        with pytest.raises(StatsError):
            cr_rate(AnnotationSet("other", 17), fragment.dialogues[0])


class TestLevelDistribution:
    def test_golden_split(self, golden):
        split = level_distribution(annotations(golden))
        assert split[Level.L4] == pytest.approx(100 * 5 / 6, abs=1e-12)
        assert split[Level.L3] == pytest.approx(100 * 1 / 6, abs=1e-12)
        assert split[Level.L1] == split[Level.L2] == split[Level.OTHER] == 0.0
        assert round(split[Level.L4], 1) == 83.3
        assert round(split[Level.L3], 1) == 16.7
        assert sum(split.values()) == pytest.approx(100.0, abs=0.2)

    def test_single_cr(self):
        one = AnnotationSet("d", 3, (
            Annotation(turn=1, label=LabelKind.CR, source=0, level=Level.L2),
        ))
        split = level_distribution(one)
        assert split[Level.L2] == 100.0

    def test_no_crs_marker(self):
        assert level_distribution(AnnotationSet("d", 3)) == {}


class TestCorpusSummary:
    def test_accepts_rounding_overshoot(self):
        # Published splits may sum to 101 after rounding; within tolerance.
        summary = fixtures.table4_summaries()[3]
        assert sum(summary.level_percents.values()) == 101.0

    def test_rejects_wild_sum(self):
        scare = fixtures.table4_summaries()[3]
        with pytest.raises(StatsError):
            CorpusSummary(
                name="x", task="x", profile=scare.profile, total_turns=10,
                avg_dialogue_length=10.0, cr_rate_percent=5.0,
                level_percents={Level.L4: 90.0},
            )

    def test_rejects_bad_rate(self):
        scare = fixtures.table4_summaries()[3]
        with pytest.raises(StatsError):
            CorpusSummary(
                name="x", task="x", profile=scare.profile, total_turns=10,
                avg_dialogue_length=10.0, cr_rate_percent=120.0,
                level_percents={Level.L4: 100.0},
            )

    def test_summarize_matches_direct_computation(self, fragment, golden):
        ann = annotations(golden)
        dialogue = fragment.dialogues[0]
        summary = summarize("fragment", "Moving", fixtures.SCARE_PROFILE,
                            [(dialogue, ann)])
        assert summary.total_turns == 17
        assert summary.avg_dialogue_length == 17.0
        assert summary.cr_rate_percent == cr_rate(ann, dialogue)
        assert summary.level_percents == level_distribution(ann)


def _cell(text: str, row_name: str, column: int) -> str:
    for line in text.splitlines():
        if line.startswith(row_name):
            rest = line[len(row_name):]
            cells = [part for part in rest.split("  ") if part.strip()]
            return cells[column].strip()
    raise AssertionError(f"row {row_name!r} not rendered")


class TestComparisonTable:
    def test_row_order(self):
        report = comparison_table(fixtures.table4_summaries())
        text = render_comparison_text(report)
        lines = [line.split("  ")[0].strip() for line in text.splitlines()]
        assert lines[0] == "Characteristics"
        assert lines[1:] == list(COMPARISON_ROWS)

    def test_scare_column_values(self):
        report = comparison_table(fixtures.table4_summaries())
        text = render_comparison_text(report)
        scare = 3
        assert _cell(text, "Total # turns", scare) == "11350"
        assert _cell(text, "Avg dialogue length", scare) == "800"
        assert _cell(text, "% of CRs/turns", scare) == "6.8"
        assert [
            _cell(text, f"% CRs level {k}", scare) for k in (1, 2, 3, 4)
        ] == ["3", "9", "32", "53"]
        assert _cell(text, "% CRs other", scare) == "4"

    def test_bnc_column_values(self):
        report = comparison_table(fixtures.table4_summaries())
        text = render_comparison_text(report)
        bnc = 0
        assert _cell(text, "% of CRs/turns", bnc) == "3.1"
        assert [
            _cell(text, f"% CRs level {k}", bnc) for k in (1, 2, 3, 4)
        ] == ["10", "31", "47", "2"]
        assert _cell(text, "% CRs other", bnc) == "10"

    def test_single_summary_table(self):
        report = comparison_table(fixtures.table4_summaries()[:1])
        text = render_comparison_text(report)
        assert "BNC fragment" in text

    def test_empty_rejected(self):
        with pytest.raises(StatsError):
            comparison_table(())

    def test_permutation_is_projection(self):
        summaries = fixtures.table4_summaries()
        forward = comparison_table(summaries)
        backward = comparison_table(tuple(reversed(summaries)))
        assert forward.columns == tuple(reversed(backward.columns))

    def test_records_have_full_precision(self):
        record = summary_record(fixtures.table4_summaries()[3])
        assert record["cr_rate_percent"] == 6.8
        assert record["level_percents"]["L4"] == 53.0
        assert record["world_validation"] == "simulated"


class TestDialogueStats:
    def test_golden_record(self, fragment, golden):
        record = dialogue_stats_record(annotations(golden), fragment.dialogues[0])
        assert record["dialogue"] == "s2"
        assert record["turns"] == 17
        assert record["crs"] == 6
        assert round(record["cr_rate_percent"], 1) == 35.3
        assert round(record["level_percents"]["L4"]) == 83
