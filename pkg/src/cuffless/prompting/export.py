"""JSON-lines export of tuning datasets and inference prompts."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from .builder import PromptRecord


def _write_lines(rows: Iterable[dict[str, Any]], path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False))
            f.write("\n")
    return target


def _ordered(prompts: Iterable[PromptRecord]) -> list[PromptRecord]:
    return sorted(prompts, key=lambda p: (p.subject_id, p.visit_day.ordinal))


def write_tuning_dataset(prompts: Iterable[PromptRecord], path: str | Path) -> Path:
    """Write {"instruction", "input", "output"} lines, one per record.

    Raises:
        PromptError: If a record has no response.
    """
    return _write_lines((p.to_tuning_dict() for p in _ordered(prompts)), path)


def write_prompt_file(prompts: Iterable[PromptRecord], path: str | Path) -> Path:
    """Write inference prompts along with their record identity."""
    return _write_lines((p.to_prompt_dict() for p in _ordered(prompts)), path)
