"""Two annotators disagree on one turn; measure it, then adjudicate.

Run:  python demos/agreement_demo.py
"""
from cranno import fixtures
from cranno.agreement import (
    adjudicate,
    cohen_kappa,
    confusion_matrix,
    disagreeing_turns,
    kappa_display,
    project_label,
)
from cranno.recipe import AnnotationSet, LabelKind, annotations


def main():
    golden = annotations(fixtures.golden_session())

    # A second annotator who missed the clarification at turn 13.
    other = AnnotationSet(
        dialogue_id=golden.dialogue_id,
        n_turns=golden.n_turns,
        entries=tuple(
            a for a in golden.entries
            if not (a.turn == 13 and a.label is LabelKind.CR)
        ),
    )

    matrix = confusion_matrix(golden, other)
    print("labels:", ", ".join(matrix.labels.labels))
    print("counts:")
    for label, row in zip(matrix.labels.labels, matrix.counts):
        print(f"  {label:>9}", list(int(n) for n in row))

    report = cohen_kappa(matrix)
    print(f"\nobserved agreement {report.observed_agreement:.3f}, "
          f"expected {report.expected_agreement:.3f}, "
          f"kappa {kappa_display(report)}")

    turns = disagreeing_turns(golden, other)
    print(f"\ndisagreeing turns: {turns}")
    merged = adjudicate(golden, other, {13: "CR-L4"})
    print(f"after discussion, turn 13 is {project_label(merged, 13)} "
          f"with source ({merged.cr_for_turn(13).source})")

    perfect = cohen_kappa(confusion_matrix(golden, merged))
    print(f"adjudicated vs first annotator: kappa {kappa_display(perfect)}")


if __name__ == "__main__":
    main()
