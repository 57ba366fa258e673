"""JSONL dataset writing and reading."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import RecordParseError
from .records import StepRecord, serialize_record

_FIELDS = ("input", "target", "task_type", "variation", "step")


def write_dataset(records: list[StepRecord], role: str, path: str | Path) -> int:
    """Write one JSON object per record; returns the line count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w") as handle:
        for record in records:
            input_text, target = serialize_record(record, role)
            row = {
                "input": input_text,
                "target": target,
                "task_type": record.task_type,
                "variation": record.variation,
                "step": record.time,
            }
            handle.write(json.dumps(row, sort_keys=True) + "\n")
            count += 1
    return count


def read_dataset(path: str | Path) -> list[dict]:
    path = Path(path)
    rows: list[dict] = []
    with path.open() as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordParseError(f"{path}:{lineno}: invalid JSON: {exc}", raw=line) from exc
            missing = [f for f in _FIELDS if f not in row]
            if missing:
                raise RecordParseError(
                    f"{path}:{lineno}: missing fields {missing}", raw=line
                )
            rows.append(row)
    return rows
