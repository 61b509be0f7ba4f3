"""Brute-force reference model for the proposal stack.

Deliberately naive and structurally unlike the library: it stores the
full operation history and recomputes all state from scratch by replaying
that history on every query. Used as the oracle for randomized
equivalence testing.
"""
from __future__ import annotations

LEVELS = ("L1", "L2", "L3", "L4")


class RefError(Exception):
    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(kind)


class ReferenceModel:
    def __init__(self):
        self.events: list[tuple] = []

    # -- recomputation from scratch --------------------------------------

    def _scan(self):
        """Replay history: returns (open list, closed list).

        Open list items: [source, proposer, satisfied-set].
        Closed list items: [source, proposer, satisfied, cause, closed_by].
        """
        open_entries: list[list] = []
        closed: list[list] = []
        for event in self.events:
            if event[0] == "push":
                _, source, proposer = event
                open_entries.append([source, proposer, set()])
            elif event[0] == "evidence":
                _, source, level, by = event
                for entry in open_entries:
                    if entry[0] == source:
                        for candidate in LEVELS:
                            entry[2].add(candidate)
                            if candidate == level:
                                break
                        if level == "L4":
                            open_entries.remove(entry)
                            closed.append(
                                [entry[0], entry[1], set(LEVELS),
                                 "explicit_evidence", by]
                            )
                        break
            elif event[0] == "unstack":
                _, source, by = event
                position = [e[0] for e in open_entries].index(source)
                above = open_entries[position + 1:]
                del open_entries[position + 1:]
                for entry in reversed(above):
                    closed.append(
                        [entry[0], entry[1], set(LEVELS), "implicit_uptake", by]
                    )
        return open_entries, closed

    def open_sources(self):
        return [entry[0] for entry in self._scan()[0]]

    def closed_sources(self):
        return [entry[0] for entry in self._scan()[1]]

    # -- operations -------------------------------------------------------

    def push(self, source, proposer):
        if source in self.open_sources():
            raise RefError("duplicate")
        self.events.append(("push", source, proposer))

    def evidence(self, source, level, by):
        if level not in LEVELS:
            raise RefError("level")
        if source in self.closed_sources() and source not in self.open_sources():
            raise RefError("closed")
        if source not in self.open_sources():
            raise RefError("unknown")
        self.events.append(("evidence", source, level, by))

    def unstack(self, source, by):
        if source not in self.open_sources():
            raise RefError("unknown")
        self.events.append(("unstack", source, by))

    def can_annotate(self, source, level):
        open_entries, closed = self._scan()
        for entry in open_entries:
            if entry[0] == source:
                if level == "other":
                    return True
                return level not in entry[2]
        for entry in closed:
            if entry[0] == source:
                return False
        raise RefError("unknown")

    # -- state snapshot for comparison -------------------------------------

    def snapshot(self):
        open_entries, closed = self._scan()
        return {
            "entries": [
                (entry[0], entry[1], frozenset(entry[2])) for entry in open_entries
            ],
            "closed": [
                (entry[0], entry[1], frozenset(entry[2]), entry[3], entry[4])
                for entry in closed
            ],
        }
