"""CSV ingestion: plain float matrices and model/score tables."""

from __future__ import annotations

import math
import os

from .errors import (
    DuplicateModelError,
    EmptyInputError,
    InputError,
    NonFiniteInputError,
    RaggedRowsError,
    UnparsableFloatError,
)
from .linalg import as_matrix

SCORE_HEADER = "model,score"


def _lines(path) -> list[str]:
    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8-sig") as fh:
            return [line.rstrip("\n").rstrip("\r") for line in fh]
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_csv_matrix(path):
    """Comma-separated float matrix; every row must have the same length."""
    path = os.fspath(path)
    rows = []
    width = None
    for lineno, line in enumerate(_lines(path), start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise RaggedRowsError(
                lineno, f"{path}: line {lineno} has {len(cells)} cells, expected {width}"
            )
        parsed = []
        for col, cell in enumerate(cells, start=1):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise UnparsableFloatError(
                    lineno, col, f"{path}: line {lineno}, column {col}: {cell!r} is not a float"
                ) from None
        rows.append(parsed)
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return as_matrix(rows, path)


def read_score_table(path) -> list[tuple[str, float]]:
    """Parse a 'model,score' CSV into (model_id, score) pairs.

    Model ids must be unique and scores finite. Used for both ground-truth
    files and exported transferability scores.
    """
    path = os.fspath(path)
    lines = [line for line in _lines(path) if line.strip()]
    if not lines:
        raise EmptyInputError(f"{path}: empty file")
    if lines[0].strip() != SCORE_HEADER:
        raise InputError(f"{path}: expected header {SCORE_HEADER!r}, got {lines[0]!r}")
    out: list[tuple[str, float]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 2:
            raise RaggedRowsError(
                lineno, f"{path}: line {lineno} has {len(cells)} cells, expected 2"
            )
        model_id = cells[0].strip()
        if not model_id:
            raise InputError(f"{path}: line {lineno}: empty model id")
        if model_id in seen:
            raise DuplicateModelError(f"{path}: duplicate model id {model_id!r}")
        seen.add(model_id)
        try:
            score = float(cells[1])
        except ValueError:
            raise UnparsableFloatError(
                lineno, 2, f"{path}: line {lineno}, column 2: {cells[1]!r} is not a float"
            ) from None
        if not math.isfinite(score):
            raise NonFiniteInputError(f"{path}: line {lineno}: non-finite score")
        out.append((model_id, score))
    if not out:
        raise EmptyInputError(f"{path}: header only, no model rows")
    return out


# Ground-truth files share the score-table schema.
read_ground_truth = read_score_table


def write_score_table(path, pairs) -> None:
    with open(os.fspath(path), "w", encoding="utf-8") as fh:
        fh.write(SCORE_HEADER + "\n")
        for model_id, score in pairs:
            fh.write(f"{model_id},{score!r}\n")


def read_int_labels(path) -> list[int]:
    """One integer category id per line (the one-hot manifest input)."""
    path = os.fspath(path)
    ids = []
    for lineno, line in enumerate(_lines(path), start=1):
        if not line.strip():
            continue
        try:
            ids.append(int(line.strip()))
        except ValueError:
            raise UnparsableFloatError(
                lineno, 1, f"{path}: line {lineno}: {line.strip()!r} is not an integer"
            ) from None
    if not ids:
        raise EmptyInputError(f"{path}: no labels")
    return ids
