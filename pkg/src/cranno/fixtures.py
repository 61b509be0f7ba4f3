"""Bundled fixtures: the instruction-giving fragment, its reference
decision log, and the published four-corpus comparison numbers.

The fragment is a 17-turn stretch of a direction-giver (DG) /
direction-follower (DF) dialogue from the SCARE corpus in which the pair
hide an object in a numbered cabinet. Its reference log is the frozen
sequence of annotator answers whose replay yields six clarifications:
one at L3 against the opening instruction and five at L4 against the two
later instructions, with explicit L4 evidence closing each proposal.

The comparison summaries carry the published per-corpus numbers for four
corpus studies (BNC fragment, Communicator, Bielefeld, SCARE); their
underlying annotations are not part of this package.
"""
from __future__ import annotations

from importlib import resources

from .corpus import (
    Corpus,
    Dialogue,
    InformationFlow,
    PressureProfile,
    Turn,
    TurnKind,
    WorldValidation,
)
from .ladder import Level
from .recipe import DecisionLog, LogEntry, Point, Session, replay
from .stats import CorpusSummary

FRAGMENT_DIALOGUE_ID = "s2"
FRAGMENT_CORPUS_ID = "scare_frag"
GOLDEN_ANNOTATOR = "golden"

SCARE_PROFILE = PressureProfile(
    task_oriented=True,
    shared_view=True,
    participants=2,
    world_validation=WorldValidation.SIMULATED,
    information_flow=InformationFlow.ASYMMETRICAL,
    irreversible_actions=True,
)

_FRAGMENT_TURNS: tuple[tuple[str, str, str | None], ...] = (
    ("DG", "we have to put it in cabinet nine", None),
    ("DF", "yeah they're not numbered", None),
    ("DG", "where is cabinet nine", None),
    ("DG", "it's kinda like back where you started so", None),
    ("DF", "ok so I have to go back through here?", None),
    ("DG", "yeah", None),
    ("DF", "and around the corner?", None),
    ("DG", "right", None),
    ("DF", "and then do I have to go back up the steps?", None),
    ("DG", "yeah", None),
    ("DF", "alright this is where we started", None),
    ("DG", "ok so your left ca- the left one", None),
    ("DF", "so how do I open it?", None),
    ("DF", "one of the buttons?", None),
    ("DG", "yeah, it's the left one", None),
    ("DF", "makes sense", "presses the left button"),
    ("DF", "alright so we put it in cabinet nine",
     "puts the rebreather in cabinet nine"),
)


def fragment_corpus() -> Corpus:
    """The bundled 17-turn fragment as a one-dialogue corpus."""
    turns = tuple(
        Turn(
            dialogue_id=FRAGMENT_DIALOGUE_ID,
            index=i,
            speaker=speaker,
            kind=TurnKind.MIXED if note else TurnKind.UTTERANCE,
            text=text,
            action_note=note,
        )
        for i, (speaker, text, note) in enumerate(_FRAGMENT_TURNS)
    )
    dialogue = Dialogue(
        dialogue_id=FRAGMENT_DIALOGUE_ID, turns=turns, metadata=SCARE_PROFILE
    )
    return Corpus(corpus_id=FRAGMENT_CORPUS_ID, dialogues=(dialogue,))


# Frozen answer sequence for the fragment. Turn 0 opens the cabinet-nine
# instruction; turn 1 clarifies it at L3; turns 2 and 3 open and resolve
# the where-is-it sub-project (turn 3 both closes proposal 2 with L4
# evidence and opens the go-back route); turns 4/6/8 clarify that route at
# L4 until turn 10 closes it; turn 11 opens the left-button instruction,
# clarified at L4 by turns 12/13 and closed by the button press at 15;
# turn 16 finally closes the opening instruction.
_GOLDEN_ANSWERS: tuple[tuple[int, Point, str], ...] = (
    (0, Point.PUSH, "yes"),
    (1, Point.D1, "yes"),
    (1, Point.D3, "no"),
    (1, Point.D4, "no"),
    (1, Point.D5, "yes"),
    (2, Point.D1, "no"),
    (2, Point.EVIDENCE, "none"),
    (2, Point.PUSH, "yes"),
    (3, Point.D1, "no"),
    (3, Point.D2, "no"),
    (3, Point.EVIDENCE, "2:L4"),
    (3, Point.EVIDENCE, "none"),
    (3, Point.PUSH, "yes"),
    (4, Point.D1, "yes"),
    (4, Point.D3, "no"),
    (4, Point.D4, "no"),
    (4, Point.D5, "no"),
    (4, Point.D6, "yes"),
    (5, Point.D1, "no"),
    (5, Point.D2, "no"),
    (5, Point.EVIDENCE, "none"),
    (5, Point.PUSH, "no"),
    (6, Point.D1, "yes"),
    (6, Point.D3, "no"),
    (6, Point.D4, "no"),
    (6, Point.D5, "no"),
    (6, Point.D6, "yes"),
    (7, Point.D1, "no"),
    (7, Point.D2, "no"),
    (7, Point.EVIDENCE, "none"),
    (7, Point.PUSH, "no"),
    (8, Point.D1, "yes"),
    (8, Point.D3, "no"),
    (8, Point.D4, "no"),
    (8, Point.D5, "no"),
    (8, Point.D6, "yes"),
    (9, Point.D1, "no"),
    (9, Point.D2, "no"),
    (9, Point.EVIDENCE, "none"),
    (9, Point.PUSH, "no"),
    (10, Point.D1, "no"),
    (10, Point.D2, "no"),
    (10, Point.EVIDENCE, "3:L4"),
    (10, Point.EVIDENCE, "none"),
    (10, Point.PUSH, "no"),
    (11, Point.D1, "no"),
    (11, Point.EVIDENCE, "none"),
    (11, Point.PUSH, "yes"),
    (12, Point.D1, "yes"),
    (12, Point.D3, "no"),
    (12, Point.D4, "no"),
    (12, Point.D5, "no"),
    (12, Point.D6, "yes"),
    (13, Point.D1, "yes"),
    (13, Point.D3, "no"),
    (13, Point.D4, "no"),
    (13, Point.D5, "no"),
    (13, Point.D6, "yes"),
    (14, Point.D1, "no"),
    (14, Point.D2, "no"),
    (14, Point.EVIDENCE, "none"),
    (14, Point.PUSH, "no"),
    (15, Point.D1, "no"),
    (15, Point.D2, "no"),
    (15, Point.EVIDENCE, "11:L4"),
    (15, Point.EVIDENCE, "none"),
    (15, Point.PUSH, "no"),
    (16, Point.D1, "no"),
    (16, Point.EVIDENCE, "0:L4"),
    (16, Point.PUSH, "no"),
)


def golden_log() -> DecisionLog:
    """The frozen reference decision log for the bundled fragment."""
    return DecisionLog(
        dialogue_id=FRAGMENT_DIALOGUE_ID,
        annotator_id=GOLDEN_ANNOTATOR,
        entries=tuple(
            LogEntry(turn=turn, point=point, answer=answer)
            for turn, point, answer in _GOLDEN_ANSWERS
        ),
    )


def golden_session() -> Session:
    """The fragment fully annotated by replaying the reference log."""
    return replay(fragment_corpus(), golden_log())


# Expected outcome of the reference log, frozen for tests and demos:
# (turn, source, level) per clarification, and (turn, source) per
# L4-evidence event in order of occurrence.
GOLDEN_CRS: tuple[tuple[int, int, Level], ...] = (
    (1, 0, Level.L3),
    (4, 3, Level.L4),
    (6, 3, Level.L4),
    (8, 3, Level.L4),
    (12, 11, Level.L4),
    (13, 11, Level.L4),
)
GOLDEN_EVIDENCE: tuple[tuple[int, int], ...] = ((3, 2), (10, 3), (15, 11), (16, 0))
GOLDEN_PROPOSALS: tuple[int, ...] = (0, 2, 3, 11)


def table4_summaries() -> tuple[CorpusSummary, ...]:
    """Published comparison columns for the four corpus studies."""
    bnc = CorpusSummary(
        name="BNC fragment",
        task="Chit-chat",
        profile=PressureProfile(
            task_oriented=False,
            shared_view=True,
            participants=3,
            world_validation=WorldValidation.COMMON_GROUND,
            information_flow=InformationFlow.SYMMETRICAL,
            irreversible_actions=False,
        ),
        total_turns=10466,
        avg_dialogue_length=30.0,
        cr_rate_percent=3.1,
        level_percents={
            Level.L1: 10.0, Level.L2: 31.0, Level.L3: 47.0, Level.L4: 2.0,
            Level.OTHER: 10.0,
        },
    )
    communicator = CorpusSummary(
        name="Communicator",
        task="Travel reservation",
        profile=PressureProfile(
            task_oriented=True,
            shared_view=False,
            participants=2,
            world_validation=WorldValidation.INFORMATIONAL,
            information_flow=InformationFlow.SYMMETRICAL,
            irreversible_actions=False,
        ),
        total_turns=2098,
        avg_dialogue_length=67.0,
        cr_rate_percent=4.6,
        level_percents={
            Level.L1: 3.0, Level.L2: 32.0, Level.L3: 40.0, Level.L4: 12.0,
            Level.OTHER: 13.0,
        },
    )
    bielefeld = CorpusSummary(
        name="Bielefeld",
        task="Building",
        profile=PressureProfile(
            task_oriented=True,
            shared_view=True,
            participants=2,
            world_validation=WorldValidation.PHYSICAL,
            information_flow=InformationFlow.SYMMETRICAL,
            irreversible_actions=False,
        ),
        total_turns=3962,
        avg_dialogue_length=180.0,
        cr_rate_percent=5.8,
        level_percents={
            Level.L1: 0.0, Level.L2: 12.0, Level.L3: 50.0, Level.L4: 22.0,
            Level.OTHER: 16.0,
        },
    )
    scare = CorpusSummary(
        name="Scare",
        task="Moving",
        profile=SCARE_PROFILE,
        total_turns=11350,
        avg_dialogue_length=800.0,
        cr_rate_percent=6.8,
        level_percents={
            Level.L1: 3.0, Level.L2: 9.0, Level.L3: 32.0, Level.L4: 53.0,
            Level.OTHER: 4.0,
        },
    )
    return (bnc, communicator, bielefeld, scare)


def data_text(name: str) -> str:
    """Read a bundled data file (corpus or session) as text."""
    return (resources.files("cranno") / "data" / name).read_text("utf-8")


BUNDLED_CORPORA = {FRAGMENT_CORPUS_ID: "scare_frag.jsonl"}
BUNDLED_SESSIONS = {GOLDEN_ANNOTATOR: "golden.session.jsonl"}
