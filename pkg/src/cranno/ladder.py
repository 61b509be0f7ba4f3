"""Four-level ladder semantics for proposals and their evidence.

Communicative actions sit on a ladder of four co-temporal levels, each
grounded in a modality:

    L1 socioperception  (attending to the speaker)
    L2 hearing          (perceiving the signal)
    L3 vision           (recognizing what is referred to)
    L4 kinesthetic      (uptaking the project by acting)

Two structural laws drive everything here. Evidence trickles down: success
at level m implies success at every level below it, so recording evidence
at m marks all of L1..Lm satisfied. Completion climbs up: a proposal is
complete only when all four levels are, so only L4 evidence closes it.

Open proposals live on a stack. A clarification of a proposal X implicitly
uptakes everything stacked above X (those sub-projects must have finished
for X to be negotiable again), which is what :func:`unstack_over` does.

A fifth pseudo-level ``OTHER`` covers negative evidence about the language
itself rather than any of the four modalities. It never participates in
the evidence lattice: it cannot be recorded as evidence and never blocks
later clarifications.

All operations are pure: they return new values and never mutate.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .corpus import TurnRef
from .errors import (
    ClosedProposalError,
    DuplicateSourceError,
    LevelDomainError,
    UnknownSourceError,
)


class Level(Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    OTHER = "other"

    @property
    def rank(self) -> int:
        """Position in the ladder order, 1..4; OTHER has no rank."""
        if self is Level.OTHER:
            raise LevelDomainError("OTHER has no position in the ladder order")
        return int(self.value[1])

    @property
    def modality(self) -> str:
        return _MODALITIES[self]


_MODALITIES = {
    Level.L1: "socioperception",
    Level.L2: "hearing",
    Level.L3: "vision",
    Level.L4: "kinesthetic",
    Level.OTHER: "other",
}

GROUNDED_LEVELS: tuple[Level, ...] = (Level.L1, Level.L2, Level.L3, Level.L4)
ALL_SATISFIED: frozenset[Level] = frozenset(GROUNDED_LEVELS)


class CloseCause(Enum):
    EXPLICIT_EVIDENCE = "explicit_evidence"
    IMPLICIT_UPTAKE = "implicit_uptake"


def evidence_closure(level: Level) -> frozenset[Level]:
    """All levels at or below ``level``: the downward spread of evidence."""
    if level is Level.OTHER:
        raise LevelDomainError("evidence closure is defined for L1..L4 only")
    return frozenset(l for l in GROUNDED_LEVELS if l.rank <= level.rank)


@dataclass(frozen=True)
class Proposal:
    """A stack entry for one open joint project.

    ``satisfied`` is always downward-closed in the level order, and a
    closed proposal always has all four levels satisfied.
    """

    source: TurnRef
    proposer: str
    satisfied: frozenset[Level] = frozenset()
    closed: bool = False
    close_cause: CloseCause | None = None
    closed_by: TurnRef | None = None

    @staticmethod
    def new(source: TurnRef, proposer: str) -> "Proposal":
        return Proposal(source=source, proposer=proposer)

    def is_satisfied(self, level: Level) -> bool:
        return level in self.satisfied


@dataclass(frozen=True)
class Stack:
    """Open proposals bottom-to-top, plus the log of closed ones."""

    entries: tuple[Proposal, ...] = ()
    closed_log: tuple[Proposal, ...] = ()

    def find_open(self, source: TurnRef) -> Proposal | None:
        for entry in self.entries:
            if entry.source == source:
                return entry
        return None

    def find_closed(self, source: TurnRef) -> Proposal | None:
        for entry in self.closed_log:
            if entry.source == source:
                return entry
        return None

    @property
    def top(self) -> Proposal | None:
        return self.entries[-1] if self.entries else None


def push_proposal(stack: Stack, proposal: Proposal) -> Stack:
    """Push a fresh proposal on top of the stack."""
    if proposal.satisfied or proposal.closed:
        raise ValueError("pushed proposal must be fresh: no evidence, not closed")
    if stack.find_open(proposal.source) is not None:
        raise DuplicateSourceError(
            f"proposal with source {proposal.source} is already open"
        )
    return replace(stack, entries=stack.entries + (proposal,))


def record_evidence(
    stack: Stack, source: TurnRef, level: Level, by_turn: TurnRef
) -> Stack:
    """Record positive evidence at ``level`` for the proposal from ``source``.

    Evidence closure marks every level at or below ``level`` satisfied.
    L4 evidence completes the proposal: it leaves the stack and enters the
    closed log with cause ``EXPLICIT_EVIDENCE``.
    """
    closure = evidence_closure(level)
    target = stack.find_open(source)
    if target is None:
        if stack.find_closed(source) is not None:
            raise ClosedProposalError(f"proposal {source} is already closed")
        raise UnknownSourceError(f"no open proposal with source {source}")
    updated = replace(target, satisfied=target.satisfied | closure)
    if level is Level.L4:
        updated = replace(
            updated,
            closed=True,
            close_cause=CloseCause.EXPLICIT_EVIDENCE,
            closed_by=by_turn,
        )
        entries = tuple(e for e in stack.entries if e.source != source)
        return Stack(entries=entries, closed_log=stack.closed_log + (updated,))
    entries = tuple(updated if e.source == source else e for e in stack.entries)
    return replace(stack, entries=entries)


def unstack_over(
    stack: Stack, source: TurnRef, by_turn: TurnRef | None = None
) -> tuple[Stack, tuple[Proposal, ...]]:
    """Implicitly uptake every proposal stacked above ``source``.

    Each entry above ``source`` is closed with all four levels satisfied
    and cause ``IMPLICIT_UPTAKE``; ``source`` becomes the top. Returns the
    new stack and the implicitly closed proposals in pop order (topmost
    first). ``by_turn`` is the clarifying turn, recorded as the closer.
    """
    position = None
    for i, entry in enumerate(stack.entries):
        if entry.source == source:
            position = i
            break
    if position is None:
        raise UnknownSourceError(f"no open proposal with source {source}")
    above = stack.entries[position + 1 :]
    popped = tuple(
        replace(
            entry,
            satisfied=ALL_SATISFIED,
            closed=True,
            close_cause=CloseCause.IMPLICIT_UPTAKE,
            closed_by=by_turn,
        )
        for entry in reversed(above)
    )
    new_stack = Stack(
        entries=stack.entries[: position + 1],
        closed_log=stack.closed_log + popped,
    )
    return new_stack, popped


def can_annotate_cr(stack: Stack, source: TurnRef, level: Level) -> bool:
    """May a clarification at ``level`` still target the ``source`` proposal?

    Positive evidence blocks: once level m is satisfied, no later
    clarification at m (or below, by downward closure) may target the
    proposal. OTHER clarifications only need the proposal to be open.
    """
    proposal = stack.find_open(source)
    if proposal is None:
        if stack.find_closed(source) is None:
            raise UnknownSourceError(f"no proposal with source {source}")
        return False
    if level is Level.OTHER:
        return True
    return level not in proposal.satisfied
