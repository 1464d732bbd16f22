"""Deterministic text serialization helpers.

All floats are rendered with 17 significant digits ('%.17g'), enough to
round-trip IEEE doubles, so identical inputs produce byte-identical
files on every platform. Files are written atomically (temp + rename)
with '\\n' line endings.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Iterable, Sequence

FLOAT_FMT = "%.17g"


def fmt_float(x: float) -> str:
    return FLOAT_FMT % float(x)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_float(x) for x in row))
    return "\n".join(lines) + "\n"


def json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temp file in the same directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
