"""Append-only JSON Lines log of choice records.

One record per line, UTF-8.  Appends go through a single lock and each
record is written with one ``write`` call followed by flush+fsync, so a
line is either fully present or absent and concurrent writers never
interleave.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Iterator

from .errors import SchemaError
from .experiment import ChoiceRecord


class ChoiceLog:
    """Serialized appender / reader for one JSONL file."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, record: ChoiceRecord) -> None:
        line = json.dumps(record.as_dict(), sort_keys=True) + "\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line)
                handle.flush()
                os.fsync(handle.fileno())

    def __iter__(self) -> Iterator[ChoiceRecord]:
        return iter(self.read())

    def read(self) -> list[ChoiceRecord]:
        if not self.path.exists():
            return []
        return list(read_records(self.path))


def read_records(path) -> Iterator[ChoiceRecord]:
    """Parse a JSONL record file; malformed lines raise with their line number."""
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield ChoiceRecord.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise SchemaError(f"{path}:{lineno}: bad record ({exc})") from exc


def append_records(path, records) -> None:
    log = ChoiceLog(path)
    for record in records:
        log.append(record)
