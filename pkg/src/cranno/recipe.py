"""Decision-graph annotation sessions over one dialogue.

The engine walks the dialogue turn by turn. For every turn it asks the
annotator a short sequence of judgment prompts; the answers are appended
to a decision log which is the single source of truth. A session is an
event-sourced fold of that log: replaying the log always reconstructs the
identical session, so undo is log truncation and storage is the log alone.

Per-turn prompt sub-graph:

    D1        does the turn address (negotiate) the top open proposal?
    D2 ...    failing that, one of the deeper open proposals, probed
              top-down one at a time?
    D3..D6    if the turn addresses proposal X: paraphrase checks in
              ladder order L1..L4, skipping levels already satisfied on X.
              The first level whose paraphrase is judged odd is the
              clarification level; declining all of them labels the
              clarification OTHER (an obstacle in the language itself).
              Confirming a clarification of X implicitly uptakes every
              proposal stacked above X before the label is recorded.
    EVIDENCE  otherwise: record positive-evidence events (source:level),
              repeating until "none"; each source at most once per turn.
    PUSH      finally: does the turn introduce a new proposal?

Turns that answer "no" throughout are left unlabeled. Prompts D3..D6 are
rendered with :func:`gabsdil_prompt`: the candidate turn is prefixed with
a per-level acknowledgment ("Ok, I did it." for L4) and the annotator
judges whether that sequence is odd. Oddness means the turn cannot be
preceded by positive evidence at that level, which is what makes it a
clarification grounded in that modality.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import IO, Any

from .corpus import Corpus, Dialogue, Turn, TurnRef
from .errors import (
    IllegalAnswerError,
    LevelDomainError,
    SessionFinishedError,
    SessionFormatError,
)
from .ladder import (
    GROUNDED_LEVELS,
    Level,
    Proposal,
    Stack,
    can_annotate_cr,
    push_proposal,
    record_evidence,
    unstack_over,
)
from .records import dump_record, dump_records, iter_lines, parse_record

YES = "yes"
NO = "no"
NONE_ANSWER = "none"

GP_TAGS = ("repetition", "clausal", "intended", "correction")


class Point(Enum):
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D4 = "D4"
    D5 = "D5"
    D6 = "D6"
    EVIDENCE = "EVIDENCE"
    PUSH = "PUSH"


LEVEL_POINTS = {
    Level.L1: Point.D3,
    Level.L2: Point.D4,
    Level.L3: Point.D5,
    Level.L4: Point.D6,
}

GABSDIL_PREFIXES = {
    Level.L1: "Ok, so you want to talk to me.",
    Level.L2: "Ok, I heard you.",
    Level.L3: "Ok, I saw what you are referring to.",
    Level.L4: "Ok, I did it.",
}


def gabsdil_prompt(candidate: Turn, source: Turn, level: Level) -> str:
    """Level-sensitive paraphrase test for a candidate clarification.

    Prefixes the candidate turn with the acknowledgment that asserts
    positive evidence at ``level``; if the resulting sequence is odd, the
    candidate is a clarification of ``source`` grounded in that level's
    modality. ``source`` fixes which proposal the test probes; callers
    render it alongside the returned string.
    """
    if level not in GABSDIL_PREFIXES:
        raise LevelDomainError("paraphrase test is defined for L1..L4 only")
    return f"{GABSDIL_PREFIXES[level]} {candidate.text} — is this sequence odd?"


class LabelKind(Enum):
    CR = "cr"
    EVIDENCE = "evidence"
    PROPOSAL = "proposal"
    NONE = "none"


@dataclass(frozen=True)
class Annotation:
    """One per-turn label. ``source`` and ``level`` apply to CR/EVIDENCE."""

    turn: int
    label: LabelKind
    source: int | None = None
    level: Level | None = None
    gp_tag: str | None = None


@dataclass(frozen=True)
class AnnotationSet:
    """All labels over one dialogue, plus the turn universe they cover."""

    dialogue_id: str
    n_turns: int
    entries: tuple[Annotation, ...] = ()

    def for_turn(self, index: int) -> tuple[Annotation, ...]:
        return tuple(a for a in self.entries if a.turn == index)

    def cr_for_turn(self, index: int) -> Annotation | None:
        for a in self.entries:
            if a.turn == index and a.label is LabelKind.CR:
                return a
        return None


@dataclass(frozen=True)
class DecisionPrompt:
    point: Point
    turn: int
    candidate_source: int | None
    question: str
    answers: tuple[str, ...]

    @property
    def legal_answers(self) -> frozenset[str]:
        return frozenset(self.answers)


@dataclass(frozen=True)
class LogEntry:
    turn: int
    point: Point
    answer: str
    gp_tag: str | None = None


@dataclass(frozen=True)
class DecisionLog:
    dialogue_id: str
    annotator_id: str
    entries: tuple[LogEntry, ...] = ()


class _PhaseKind(Enum):
    GATE_TOP = "gate_top"
    GATE_DEEPER = "gate_deeper"
    LEVELS = "levels"
    EVIDENCE = "evidence"
    PUSH = "push"


@dataclass(frozen=True)
class _Phase:
    """Position inside the current turn's prompt sub-graph."""

    kind: _PhaseKind
    depth: int = 0
    source: int | None = None
    level_queue: tuple[Level, ...] = ()
    evidenced: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Session:
    """Event-sourced annotation state: everything is a fold of ``log``."""

    corpus: Corpus
    dialogue_id: str
    annotator_id: str
    cursor: int
    stack: Stack
    annotations: tuple[Annotation, ...]
    log: DecisionLog
    finished: bool
    phase: _Phase | None

    @property
    def dialogue(self) -> Dialogue:
        return self.corpus.dialogue(self.dialogue_id)

    @property
    def version(self) -> int:
        """Log length; the optimistic-concurrency token."""
        return len(self.log.entries)


def start_session(corpus: Corpus, dialogue_id: str, annotator_id: str) -> Session:
    dialogue = corpus.dialogue(dialogue_id)
    assert dialogue.turns, "corpus invariants forbid empty dialogues"
    stack = Stack()
    return Session(
        corpus=corpus,
        dialogue_id=dialogue_id,
        annotator_id=annotator_id,
        cursor=0,
        stack=stack,
        annotations=(),
        log=DecisionLog(dialogue_id=dialogue_id, annotator_id=annotator_id),
        finished=False,
        phase=_start_phase(stack),
    )


def _start_phase(stack: Stack) -> _Phase:
    if stack.entries:
        return _Phase(kind=_PhaseKind.GATE_TOP)
    return _Phase(kind=_PhaseKind.PUSH)


def _turn_desc(turn: Turn) -> str:
    if turn.text and turn.action_note:
        return f"{turn.text} [{turn.action_note}]"
    if turn.action_note:
        return f"[{turn.action_note}]"
    return turn.text


def format_evidence_answer(source_index: int, level: Level) -> str:
    return f"{source_index}:{level.value}"


def parse_evidence_answer(answer: str) -> tuple[int, Level]:
    source_part, sep, level_part = answer.partition(":")
    if not sep or not source_part.isdigit():
        raise IllegalAnswerError(f"not an evidence answer: {answer!r}")
    try:
        level = Level(level_part)
    except ValueError:
        raise IllegalAnswerError(f"unknown level in answer {answer!r}") from None
    if level is Level.OTHER:
        raise IllegalAnswerError("evidence is recorded at L1..L4 only")
    return int(source_part), level


def _evidence_options(stack: Stack, evidenced: frozenset[int]) -> tuple[str, ...]:
    options = []
    for entry in stack.entries:
        if entry.source.index in evidenced:
            continue
        for level in GROUNDED_LEVELS:
            if level not in entry.satisfied:
                options.append(format_evidence_answer(entry.source.index, level))
    return tuple(options)


def next_prompt(session: Session) -> DecisionPrompt:
    """The prompt dictated by the current graph position."""
    if session.finished:
        raise SessionFinishedError("session is finished; no prompts remain")
    phase = session.phase
    assert phase is not None
    dialogue = session.dialogue
    turn = dialogue.turns[session.cursor]
    desc = _turn_desc(turn)

    if phase.kind is _PhaseKind.GATE_TOP:
        top = session.stack.top
        assert top is not None
        src = dialogue.turns[top.source.index]
        question = (
            f'Does turn ({turn.index}) "{desc}" address the open proposal '
            f'({src.index}) "{_turn_desc(src)}" at the top of the stack, '
            f"rather than start or continue its own project?"
        )
        return DecisionPrompt(Point.D1, turn.index, src.index, question, (YES, NO))

    if phase.kind is _PhaseKind.GATE_DEEPER:
        candidate = session.stack.entries[-phase.depth]
        src = dialogue.turns[candidate.source.index]
        question = (
            f'Does turn ({turn.index}) "{desc}" address the deeper open '
            f'proposal ({src.index}) "{_turn_desc(src)}"?'
        )
        return DecisionPrompt(Point.D2, turn.index, src.index, question, (YES, NO))

    if phase.kind is _PhaseKind.LEVELS:
        level = phase.level_queue[0]
        assert phase.source is not None
        src = dialogue.turns[phase.source]
        question = gabsdil_prompt(turn, src, level)
        return DecisionPrompt(
            LEVEL_POINTS[level], turn.index, phase.source, question, (YES, NO)
        )

    if phase.kind is _PhaseKind.EVIDENCE:
        options = _evidence_options(session.stack, phase.evidenced)
        question = (
            f'Does turn ({turn.index}) "{desc}" give positive evidence of '
            f"understanding for an open proposal? Answer none, or "
            f"source:level such as 0:L4."
        )
        return DecisionPrompt(
            Point.EVIDENCE, turn.index, None, question, (NONE_ANSWER,) + options
        )

    assert phase.kind is _PhaseKind.PUSH
    question = f'Does turn ({turn.index}) "{desc}" introduce a new proposal?'
    return DecisionPrompt(Point.PUSH, turn.index, None, question, (YES, NO))


def _advance(session: Session, stack: Stack, annotations: tuple[Annotation, ...],
             log: DecisionLog) -> Session:
    cursor = session.cursor + 1
    finished = cursor >= len(session.dialogue.turns)
    return replace(
        session,
        cursor=cursor,
        stack=stack,
        annotations=annotations,
        log=log,
        finished=finished,
        phase=None if finished else _start_phase(stack),
    )


def _stay(session: Session, stack: Stack, annotations: tuple[Annotation, ...],
          log: DecisionLog, phase: _Phase) -> Session:
    return replace(
        session, stack=stack, annotations=annotations, log=log, phase=phase
    )


def _confirm_cr(session: Session, log: DecisionLog, source: int, level: Level,
                gp_tag: str | None) -> Session:
    turn_ref = TurnRef(session.dialogue_id, session.cursor)
    source_ref = TurnRef(session.dialogue_id, source)
    stack, _popped = unstack_over(session.stack, source_ref, by_turn=turn_ref)
    assert can_annotate_cr(stack, source_ref, level)
    annotation = Annotation(
        turn=session.cursor, label=LabelKind.CR, source=source, level=level,
        gp_tag=gp_tag,
    )
    return _advance(session, stack, session.annotations + (annotation,), log)


def apply_answer(session: Session, answer: str, gp_tag: str | None = None) -> Session:
    """Apply one answer to the current prompt, returning the new session.

    Illegal answers raise and leave the session unchanged (it is a value;
    nothing mutates). ``gp_tag`` is a free secondary classification the
    annotator may attach to the answer that confirms a clarification; it
    is stored, never interpreted.
    """
    prompt = next_prompt(session)
    if answer not in prompt.legal_answers:
        raise IllegalAnswerError(
            f"answer {answer!r} not among legal answers {sorted(prompt.legal_answers)}"
        )
    phase = session.phase
    assert phase is not None
    confirms_cr = phase.kind is _PhaseKind.LEVELS and (
        answer == YES or len(phase.level_queue) == 1
    )
    if gp_tag is not None:
        if gp_tag not in GP_TAGS:
            raise IllegalAnswerError(f"unknown gp_tag {gp_tag!r}")
        if not confirms_cr:
            raise IllegalAnswerError(
                "gp_tag may only accompany an answer that confirms a clarification"
            )
    entry = LogEntry(turn=session.cursor, point=prompt.point, answer=answer,
                     gp_tag=gp_tag)
    log = replace(session.log, entries=session.log.entries + (entry,))
    stack, annotations = session.stack, session.annotations
    turn = session.dialogue.turns[session.cursor]
    turn_ref = TurnRef(session.dialogue_id, session.cursor)

    if phase.kind is _PhaseKind.GATE_TOP:
        if answer == YES:
            top = stack.top
            assert top is not None
            queue = tuple(l for l in GROUNDED_LEVELS if l not in top.satisfied)
            return _stay(session, stack, annotations, log,
                         _Phase(kind=_PhaseKind.LEVELS, source=top.source.index,
                                level_queue=queue))
        if len(stack.entries) >= 2:
            return _stay(session, stack, annotations, log,
                         _Phase(kind=_PhaseKind.GATE_DEEPER, depth=2))
        return _stay(session, stack, annotations, log,
                     _Phase(kind=_PhaseKind.EVIDENCE))

    if phase.kind is _PhaseKind.GATE_DEEPER:
        if answer == YES:
            candidate = stack.entries[-phase.depth]
            queue = tuple(
                l for l in GROUNDED_LEVELS if l not in candidate.satisfied
            )
            return _stay(session, stack, annotations, log,
                         _Phase(kind=_PhaseKind.LEVELS,
                                source=candidate.source.index, level_queue=queue))
        if phase.depth < len(stack.entries):
            return _stay(session, stack, annotations, log,
                         _Phase(kind=_PhaseKind.GATE_DEEPER, depth=phase.depth + 1))
        return _stay(session, stack, annotations, log,
                     _Phase(kind=_PhaseKind.EVIDENCE))

    if phase.kind is _PhaseKind.LEVELS:
        assert phase.source is not None
        level = phase.level_queue[0]
        if answer == YES:
            return _confirm_cr(session, log, phase.source, level, gp_tag)
        remaining = phase.level_queue[1:]
        if remaining:
            return _stay(session, stack, annotations, log,
                         replace(phase, level_queue=remaining))
        return _confirm_cr(session, log, phase.source, Level.OTHER, gp_tag)

    if phase.kind is _PhaseKind.EVIDENCE:
        if answer == NONE_ANSWER:
            return _stay(session, stack, annotations, log,
                         _Phase(kind=_PhaseKind.PUSH))
        source, level = parse_evidence_answer(answer)
        source_ref = TurnRef(session.dialogue_id, source)
        stack = record_evidence(stack, source_ref, level, by_turn=turn_ref)
        annotations = annotations + (
            Annotation(turn=session.cursor, label=LabelKind.EVIDENCE,
                       source=source, level=level),
        )
        evidenced = phase.evidenced | {source}
        if _evidence_options(stack, evidenced):
            return _stay(session, stack, annotations, log,
                         replace(phase, evidenced=evidenced))
        return _stay(session, stack, annotations, log,
                     _Phase(kind=_PhaseKind.PUSH))

    assert phase.kind is _PhaseKind.PUSH
    if answer == YES:
        stack = push_proposal(stack, Proposal.new(turn_ref, turn.speaker))
        annotations = annotations + (
            Annotation(turn=session.cursor, label=LabelKind.PROPOSAL),
        )
    return _advance(session, stack, annotations, log)


def replay(corpus: Corpus, log: DecisionLog) -> Session:
    """Fold a decision log from the initial state; deterministic."""
    session = start_session(corpus, log.dialogue_id, log.annotator_id)
    for ordinal, entry in enumerate(log.entries, start=1):
        if session.finished:
            raise SessionFormatError("answer after session finished", entry=ordinal)
        prompt = next_prompt(session)
        if entry.turn != session.cursor:
            raise SessionFormatError(
                f"expected turn {session.cursor}, entry names {entry.turn}",
                entry=ordinal,
            )
        if entry.point is not prompt.point:
            raise SessionFormatError(
                f"expected point {prompt.point.value}, entry names "
                f"{entry.point.value}",
                entry=ordinal,
            )
        try:
            session = apply_answer(session, entry.answer, gp_tag=entry.gp_tag)
        except IllegalAnswerError as exc:
            raise SessionFormatError(str(exc), entry=ordinal) from None
    return session


def annotations(session: Session) -> AnnotationSet:
    """Project the session's labels as an ordered annotation set."""
    return AnnotationSet(
        dialogue_id=session.dialogue_id,
        n_turns=len(session.dialogue.turns),
        entries=session.annotations,
    )


def serialize_log(log: DecisionLog) -> str:
    """Canonical session file: header record then one record per answer."""
    records: list[dict[str, Any]] = [
        {"dialogue": log.dialogue_id, "annotator": log.annotator_id}
    ]
    for entry in log.entries:
        record: dict[str, Any] = {
            "turn": entry.turn,
            "point": entry.point.value,
            "answer": entry.answer,
        }
        if entry.gp_tag is not None:
            record["gp_tag"] = entry.gp_tag
        records.append(record)
    return dump_records(records)


def serialize_session(session: Session) -> str:
    return serialize_log(session.log)


def parse_session_file(data: bytes | str | IO) -> DecisionLog:
    """Parse a session file back into a decision log (shape checks only;
    legality against a corpus is established by :func:`replay`)."""
    if hasattr(data, "read"):
        data = data.read()
    assert isinstance(data, (bytes, str))
    header: dict[str, Any] | None = None
    entries: list[LogEntry] = []
    for number, raw in iter_lines(data):
        try:
            record = parse_record(raw)
        except ValueError as exc:
            raise SessionFormatError(f"line {number}: malformed record ({exc})")
        if header is None:
            if set(record) != {"dialogue", "annotator"} or not all(
                isinstance(v, str) for v in record.values()
            ):
                raise SessionFormatError(
                    f"line {number}: first record must be the session header"
                )
            header = record
            continue
        allowed = {"turn", "point", "answer", "gp_tag"}
        if not {"turn", "point", "answer"} <= set(record) <= allowed:
            raise SessionFormatError(f"line {number}: bad entry fields")
        turn = record["turn"]
        if isinstance(turn, bool) or not isinstance(turn, int) or turn < 0:
            raise SessionFormatError(f"line {number}: turn must be a non-negative int")
        try:
            point = Point(record["point"])
        except ValueError:
            raise SessionFormatError(
                f"line {number}: unknown point {record['point']!r}"
            ) from None
        answer = record["answer"]
        if not isinstance(answer, str):
            raise SessionFormatError(f"line {number}: answer must be a string")
        gp_tag = record.get("gp_tag")
        if gp_tag is not None and gp_tag not in GP_TAGS:
            raise SessionFormatError(f"line {number}: unknown gp_tag {gp_tag!r}")
        entries.append(LogEntry(turn=turn, point=point, answer=answer, gp_tag=gp_tag))
    if header is None:
        raise SessionFormatError("session file is empty")
    return DecisionLog(
        dialogue_id=header["dialogue"],
        annotator_id=header["annotator"],
        entries=tuple(entries),
    )
