"""Point-set text files and deterministic JSON.

File format: UTF-8 text, one point per line as two signed decimal integers
separated by whitespace.  Lines whose first non-blank character is ``#`` and
blank lines are ignored.  Line order defines point indices.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import PointSetFormatError
from .geometry import PointSet


def parse_points(text: str) -> PointSet:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PointSetFormatError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            pts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise PointSetFormatError(f"line {lineno}: not an integer pair: {raw!r}") from None
    return PointSet(pts)


def format_points(ps: PointSet | Iterable[Sequence[int]], comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.extend(f"{x} {y}" for x, y in ps)
    return "\n".join(lines) + "\n"


def read_points(path: str | Path) -> PointSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise PointSetFormatError(f"{path}: not UTF-8 text") from e
    return parse_points(text)


def write_points(path: str | Path, ps: PointSet, comment: Optional[str] = None) -> None:
    Path(path).write_text(format_points(ps, comment), encoding="utf-8")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
