"""Reading and writing matrices as CSV text.

One row per line; entries are decimal literals or ``p/q`` rationals.
"""

from __future__ import annotations

import csv
import io as _io
from fractions import Fraction
from pathlib import Path

from .errors import MatrixError
from .matrix import PairwiseComparisonMatrix


def _parse_cell(cell: str, row: int, col: int) -> float:
    text = cell.strip()
    if not text:
        raise MatrixError(f"empty cell at row {row + 1}, column {col + 1}")
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise MatrixError(f"bad entry {text!r} at row {row + 1}, column {col + 1}") from None


def parse_matrix(text: str, mode: str | None = None) -> PairwiseComparisonMatrix:
    """Parse CSV text into a matrix; mode is inferred unless forced."""
    rows = []
    for i, record in enumerate(csv.reader(_io.StringIO(text))):
        if not record or all(not c.strip() for c in record):
            continue
        rows.append([_parse_cell(c, i, j) for j, c in enumerate(record)])
    if not rows:
        raise MatrixError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatrixError("rows have unequal lengths")
    return PairwiseComparisonMatrix(rows, mode=mode)


def read_matrix(path, mode: str | None = None) -> PairwiseComparisonMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixError(f"cannot read {path}: {exc}") from exc
    return parse_matrix(text, mode=mode)


def format_matrix(m: PairwiseComparisonMatrix) -> str:
    lines = [",".join(repr(x) for x in row) for row in m.entries]
    return "\n".join(lines) + "\n"


def write_matrix(m: PairwiseComparisonMatrix, path) -> None:
    Path(path).write_text(format_matrix(m), encoding="utf-8")
