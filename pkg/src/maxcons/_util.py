"""Small shared helpers: seed derivation and deterministic CSV output."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np


def derive_seed(master: int, stream: int) -> int:
    """Derive an independent 64-bit child seed from a master seed and stream id."""
    return int(np.random.SeedSequence([int(master), int(stream)]).generate_state(1, np.uint64)[0])


def fmt(value) -> str:
    """Format a CSV cell deterministically (shortest round-trip repr for floats)."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: str | Path, header: list[str], rows) -> None:
    """Write a CSV atomically with '\\n' line endings and repr-formatted floats."""
    path = Path(path)
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)
