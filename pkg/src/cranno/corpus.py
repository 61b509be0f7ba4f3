"""Dialogue transcripts: parsing, validation, and turn addressing.

A corpus file is UTF-8 JSON lines. Turn records carry exactly the fields
``dialogue``, ``index``, ``speaker``, ``kind``, ``text`` and optionally
``action_note``. Each dialogue may additionally start with one header
record carrying its pressure profile (``dialogue`` plus the six profile
fields). Records belonging to one dialogue must be contiguous and turn
indices must run 0, 1, 2, ... in file order.

The parser is strict: everything it accepts satisfies the type invariants,
so :func:`validate_corpus` returns no violations for parsed corpora.
Validation exists for corpora built programmatically.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import IO, Any

from .errors import CorpusFormatError, TurnOutOfRangeError, UnknownDialogueError
from .records import dump_records, iter_lines, parse_record


class TurnKind(Enum):
    UTTERANCE = "utterance"
    ACTION = "action"
    MIXED = "mixed"


class WorldValidation(Enum):
    COMMON_GROUND = "common_ground"
    INFORMATIONAL = "informational"
    PHYSICAL = "physical"
    SIMULATED = "simulated"


class InformationFlow(Enum):
    SYMMETRICAL = "symmetrical"
    ASYMMETRICAL = "asymmetrical"


@dataclass(frozen=True)
class TurnRef:
    """Identity of a turn: dialogue id plus 0-based index."""

    dialogue_id: str
    index: int

    def __str__(self) -> str:
        return f"{self.dialogue_id}#{self.index}"


@dataclass(frozen=True)
class Turn:
    """One dialogue event: an utterance, a physical action, or both.

    ``text`` holds the utterance transcript (may be empty for pure
    actions); ``action_note`` describes a non-linguistic event such as a
    button press, which counts as a first-class evidence event.
    """

    dialogue_id: str
    index: int
    speaker: str
    kind: TurnKind
    text: str
    action_note: str | None = None

    @property
    def ref(self) -> TurnRef:
        return TurnRef(self.dialogue_id, self.index)


@dataclass(frozen=True)
class PressureProfile:
    """The six task pressures that shape how often participants clarify."""

    task_oriented: bool
    shared_view: bool
    participants: int
    world_validation: WorldValidation
    information_flow: InformationFlow
    irreversible_actions: bool


DEFAULT_PROFILE = PressureProfile(
    task_oriented=False,
    shared_view=False,
    participants=2,
    world_validation=WorldValidation.COMMON_GROUND,
    information_flow=InformationFlow.SYMMETRICAL,
    irreversible_actions=False,
)


@dataclass(frozen=True)
class Dialogue:
    dialogue_id: str
    turns: tuple[Turn, ...]
    metadata: PressureProfile = DEFAULT_PROFILE


@dataclass(frozen=True)
class Corpus:
    corpus_id: str
    dialogues: tuple[Dialogue, ...]

    def dialogue(self, dialogue_id: str) -> Dialogue:
        for d in self.dialogues:
            if d.dialogue_id == dialogue_id:
                return d
        raise UnknownDialogueError(f"unknown dialogue {dialogue_id!r}")


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by :func:`validate_corpus`."""

    dialogue_id: str
    index: int | None
    rule: str
    detail: str


TURN_FIELDS = ("dialogue", "index", "speaker", "kind", "text", "action_note")
PROFILE_FIELDS = (
    "task_oriented",
    "shared_view",
    "participants",
    "world_validation",
    "information_flow",
    "irreversible_actions",
)


def _require_str(record: dict[str, Any], key: str, line: int) -> str:
    value = record.get(key)
    if not isinstance(value, str):
        raise CorpusFormatError(f"field {key!r} must be a string", line)
    return value


def _require_bool(record: dict[str, Any], key: str, line: int) -> bool:
    value = record.get(key)
    if not isinstance(value, bool):
        raise CorpusFormatError(f"field {key!r} must be a boolean", line)
    return value


def _require_int(record: dict[str, Any], key: str, line: int) -> int:
    value = record.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise CorpusFormatError(f"field {key!r} must be an integer", line)
    return value


def _parse_turn_record(record: dict[str, Any], line: int) -> Turn:
    unknown = set(record) - set(TURN_FIELDS)
    if unknown:
        raise CorpusFormatError(f"unknown field(s) {sorted(unknown)}", line)
    missing = {"dialogue", "index", "speaker", "kind", "text"} - set(record)
    if missing:
        raise CorpusFormatError(f"missing field(s) {sorted(missing)}", line)
    kind_raw = _require_str(record, "kind", line)
    try:
        kind = TurnKind(kind_raw)
    except ValueError:
        raise CorpusFormatError(f"unknown kind {kind_raw!r}", line) from None
    index = _require_int(record, "index", line)
    if index < 0:
        raise CorpusFormatError("index must be non-negative", line)
    note: str | None = None
    if "action_note" in record:
        note = _require_str(record, "action_note", line)
    turn = Turn(
        dialogue_id=_require_str(record, "dialogue", line),
        index=index,
        speaker=_require_str(record, "speaker", line),
        kind=kind,
        text=_require_str(record, "text", line),
        action_note=note,
    )
    for violation in _turn_violations(turn):
        raise CorpusFormatError(violation.detail, line)
    return turn


def _parse_header_record(record: dict[str, Any], line: int) -> tuple[str, PressureProfile]:
    expected = ("dialogue",) + PROFILE_FIELDS
    unknown = set(record) - set(expected)
    if unknown:
        raise CorpusFormatError(f"unknown field(s) {sorted(unknown)}", line)
    missing = set(expected) - set(record)
    if missing:
        raise CorpusFormatError(f"missing field(s) {sorted(missing)}", line)
    participants = _require_int(record, "participants", line)
    if participants < 1:
        raise CorpusFormatError("participants must be positive", line)
    try:
        world = WorldValidation(_require_str(record, "world_validation", line))
    except ValueError:
        raise CorpusFormatError(
            f"unknown world_validation {record['world_validation']!r}", line
        ) from None
    try:
        flow = InformationFlow(_require_str(record, "information_flow", line))
    except ValueError:
        raise CorpusFormatError(
            f"unknown information_flow {record['information_flow']!r}", line
        ) from None
    profile = PressureProfile(
        task_oriented=_require_bool(record, "task_oriented", line),
        shared_view=_require_bool(record, "shared_view", line),
        participants=participants,
        world_validation=world,
        information_flow=flow,
        irreversible_actions=_require_bool(record, "irreversible_actions", line),
    )
    return _require_str(record, "dialogue", line), profile


def parse_corpus(data: bytes | str | IO, corpus_id: str = "corpus") -> Corpus:
    """Parse a JSON-lines corpus document into a :class:`Corpus`.

    Raises :class:`CorpusFormatError` with the offending line number on
    malformed records, unknown kinds, non-dense indices, or out-of-order
    dialogue records.
    """
    if hasattr(data, "read"):
        data = data.read()
    assert isinstance(data, (bytes, str))

    dialogues: list[Dialogue] = []
    seen_ids: set[str] = set()
    current_id: str | None = None
    current_profile: PressureProfile | None = None
    current_turns: list[Turn] = []
    last_line = 0

    def seal(line: int) -> None:
        nonlocal current_id, current_profile, current_turns
        if current_id is None:
            return
        if not current_turns:
            raise CorpusFormatError(f"dialogue {current_id!r} has no turns", line)
        dialogues.append(
            Dialogue(
                dialogue_id=current_id,
                turns=tuple(current_turns),
                metadata=current_profile or DEFAULT_PROFILE,
            )
        )
        current_id, current_profile, current_turns = None, None, []

    def open_dialogue(dialogue_id: str, line: int) -> None:
        nonlocal current_id
        if dialogue_id in seen_ids:
            raise CorpusFormatError(
                f"records for dialogue {dialogue_id!r} are not contiguous", line
            )
        seen_ids.add(dialogue_id)
        current_id = dialogue_id

    for line, raw in iter_lines(data):
        last_line = line
        try:
            record = parse_record(raw)
        except ValueError as exc:
            raise CorpusFormatError(f"malformed record ({exc})", line) from None
        if "index" in record:
            turn = _parse_turn_record(record, line)
            if turn.dialogue_id != current_id:
                seal(line)
                open_dialogue(turn.dialogue_id, line)
            expected = len(current_turns)
            if turn.index != expected:
                raise CorpusFormatError(
                    f"turn index must be {expected} (dense, 0-based), got {turn.index}",
                    line,
                )
            current_turns.append(turn)
        elif "task_oriented" in record:
            dialogue_id, profile = _parse_header_record(record, line)
            seal(line)
            open_dialogue(dialogue_id, line)
            current_profile = profile
        else:
            raise CorpusFormatError(
                "record is neither a turn (no 'index') nor a dialogue header", line
            )
    seal(last_line + 1)
    return Corpus(corpus_id=corpus_id, dialogues=tuple(dialogues))


def serialize_corpus(corpus: Corpus) -> str:
    """Render a corpus back to its canonical JSON-lines form.

    Dialogue and turn order is preserved; a header record is always
    emitted, so ``parse_corpus(serialize_corpus(c)) == c`` up to corpus id.
    """
    records: list[dict[str, Any]] = []
    for d in corpus.dialogues:
        profile = d.metadata
        records.append(
            {
                "dialogue": d.dialogue_id,
                "task_oriented": profile.task_oriented,
                "shared_view": profile.shared_view,
                "participants": profile.participants,
                "world_validation": profile.world_validation.value,
                "information_flow": profile.information_flow.value,
                "irreversible_actions": profile.irreversible_actions,
            }
        )
        for turn in d.turns:
            record: dict[str, Any] = {
                "dialogue": turn.dialogue_id,
                "index": turn.index,
                "speaker": turn.speaker,
                "kind": turn.kind.value,
                "text": turn.text,
            }
            if turn.action_note is not None:
                record["action_note"] = turn.action_note
            records.append(record)
    return dump_records(records)


def _turn_violations(turn: Turn) -> list[Violation]:
    found = []

    def bad(rule: str, detail: str) -> None:
        found.append(Violation(turn.dialogue_id, turn.index, rule, detail))

    if turn.kind is TurnKind.UTTERANCE and not turn.text:
        bad("utterance_empty_text", "utterance turn must have nonempty text")
    if turn.kind is TurnKind.ACTION and not turn.action_note:
        bad("action_missing_note", "action turn must have nonempty action_note")
    if turn.kind is TurnKind.MIXED:
        if not turn.text:
            bad("mixed_empty_text", "mixed turn must have nonempty text")
        if not turn.action_note:
            bad("mixed_missing_note", "mixed turn must have nonempty action_note")
    return found


def validate_corpus(corpus: Corpus) -> list[Violation]:
    """Check every type invariant; violations are data, not exceptions."""
    violations: list[Violation] = []
    seen: set[str] = set()
    for d in corpus.dialogues:
        if d.dialogue_id in seen:
            violations.append(
                Violation(d.dialogue_id, None, "duplicate_dialogue_id",
                          f"dialogue id {d.dialogue_id!r} appears more than once")
            )
        seen.add(d.dialogue_id)
        if not d.turns:
            violations.append(
                Violation(d.dialogue_id, None, "empty_dialogue",
                          "dialogue has no turns")
            )
        if d.metadata.participants < 1:
            violations.append(
                Violation(d.dialogue_id, None, "invalid_participants",
                          "participants must be positive")
            )
        for position, turn in enumerate(d.turns):
            if turn.dialogue_id != d.dialogue_id:
                violations.append(
                    Violation(d.dialogue_id, turn.index, "dialogue_id_mismatch",
                              f"turn carries dialogue id {turn.dialogue_id!r}")
                )
            if turn.index != position:
                violations.append(
                    Violation(d.dialogue_id, turn.index, "index_not_dense",
                              f"expected index {position}, got {turn.index}")
                )
            violations.extend(_turn_violations(turn))
    return violations


def get_turn(corpus: Corpus, dialogue_id: str, index: int) -> Turn:
    """Address one turn; raises on unknown dialogue or out-of-range index."""
    dialogue = corpus.dialogue(dialogue_id)
    if not 0 <= index < len(dialogue.turns):
        raise TurnOutOfRangeError(
            f"dialogue {dialogue_id!r} has {len(dialogue.turns)} turns, "
            f"index {index} is out of range"
        )
    return dialogue.turns[index]
