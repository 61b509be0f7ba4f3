"""Walk the bundled 17-turn fragment through its reference decision log,
showing how the proposal stack and the annotations evolve turn by turn.

Run:  python demos/walkthrough_fragment.py
"""
from cranno import fixtures
from cranno.ladder import GROUNDED_LEVELS
from cranno.recipe import LabelKind, apply_answer, start_session
from cranno.stats import cr_rate, level_distribution
from cranno.recipe import annotations as project_annotations


def describe_stack(session):
    if not session.stack.entries:
        return "(empty)"
    parts = []
    for proposal in reversed(session.stack.entries):
        levels = "".join(
            level.value[1] if level in proposal.satisfied else "-"
            for level in GROUNDED_LEVELS
        )
        parts.append(f"({proposal.source.index})[{levels}]")
    return " ".join(parts)


def main():
    corpus = fixtures.fragment_corpus()
    log = fixtures.golden_log()
    session = start_session(corpus, "s2", "demo")

    print("The dialogue: a direction giver (DG) steers a direction follower")
    print("(DF) toward hiding an object in cabinet nine.\n")

    seen = 0
    for entry in log.entries:
        session = apply_answer(session, entry.answer)
        # Report whenever the cursor moves on: the turn's sub-graph is done.
        if session.cursor > seen:
            turn = corpus.dialogues[0].turns[seen]
            new_labels = [a for a in session.annotations if a.turn == seen]
            chips = ", ".join(
                f"{a.label.value}"
                + (f" {a.level.value}" if a.level else "")
                + (f" of ({a.source})" if a.source is not None else "")
                for a in new_labels
            ) or "no label"
            print(f"({seen:>2}) {turn.speaker}: {turn.text!r}")
            if turn.action_note:
                print(f"       [{turn.action_note}]")
            print(f"       -> {chips}")
            print(f"       stack top-to-bottom: {describe_stack(session)}")
            seen = session.cursor

    print("\nEvery proposal ends closed:")
    for proposal in session.stack.closed_log:
        print(f"  ({proposal.source.index}) closed by turn "
              f"({proposal.closed_by.index}), {proposal.close_cause.value}")

    result = project_annotations(session)
    crs = [a for a in result.entries if a.label is LabelKind.CR]
    print(f"\n{len(crs)} clarification requests over 17 turns "
          f"({cr_rate(result, corpus.dialogues[0]):.1f}% of turns)")
    for level, percent in level_distribution(result).items():
        if percent:
            print(f"  {level.value}: {percent:.1f}% of clarifications")


if __name__ == "__main__":
    main()
