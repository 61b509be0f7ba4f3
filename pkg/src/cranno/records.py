"""Canonical JSON-lines encoding used by every file format in the toolchain.

Corpus files, session files, and machine-readable reports are all UTF-8
text with one JSON object per line. Encoding is pinned here so that
serialize -> parse -> serialize round-trips are byte-identical: keys keep
insertion order, separators are the json module defaults, and every record
ends with a newline.
"""
from __future__ import annotations

import json
from typing import Any, Iterable, Iterator


def dump_record(obj: dict[str, Any]) -> str:
    """Encode one record as a single line (no trailing newline)."""
    return json.dumps(obj, ensure_ascii=False)


def dump_records(objs: Iterable[dict[str, Any]]) -> str:
    """Encode records as a document, one per line, trailing newline included."""
    return "".join(dump_record(obj) + "\n" for obj in objs)


def parse_record(line: str) -> dict[str, Any]:
    """Decode one line into a dict; raises ValueError on anything else."""
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    return obj


def iter_lines(data: bytes | str) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, line) with the trailing newline stripped.

    Splits on "\\n" only: JSON permits raw U+2028/U+0085 inside strings, so
    str.splitlines would cut records apart.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for number, line in enumerate(lines, start=1):
        yield number, line.rstrip("\r")
