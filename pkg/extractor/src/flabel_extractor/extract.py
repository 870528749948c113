"""Label file -> K unit-norm embedding NPY files plus a JSON sidecar."""

from __future__ import annotations

import json
import os
import re

import numpy as np

from .encoders import resolve_encoder
from .errors import EmptyLabelLine
from .npywrite import write_npy_atomic

SIDECAR_NAME = "flabels.json"


def read_labels(path: str) -> list[str]:
    """One label text per line; empty lines are an error (they would silently
    shift every later sample's embedding)."""
    with open(path, "r", encoding="utf-8-sig") as fh:
        raw = fh.read()
    lines = raw.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    labels = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            raise EmptyLabelLine(lineno, f"{path}: line {lineno} is empty")
        labels.append(text)
    if not labels:
        raise EmptyLabelLine(1, f"{path}: no labels")
    return labels


def _l2_normalize(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return rows / norms


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", name)


def extract(
    labels_path: str,
    encoder_names,
    out_dir: str,
    batch_size: int = 64,
    pad_to_common: bool = False,
) -> dict:
    """Embed every label with every encoder and write one NPY per encoder.

    Rows are l2-normalized to unit length. ``pad_to_common`` zero-pads every
    file to the widest encoder's dimension (after normalization, so rows stay
    unit norm); the scoring pipeline can only stack same-width files, so turn
    this on when feeding several encoders into one task. Returns the sidecar
    document (also written to ``out_dir/flabels.json``) recording encoder
    identities, versions, dimensions, and truncation policies.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    labels = read_labels(labels_path)
    encoders = [resolve_encoder(name) for name in encoder_names]

    os.makedirs(out_dir, exist_ok=True)
    embedded = []
    for encoder in encoders:
        rows = np.asarray(encoder.encode(labels, batch_size), dtype=np.float64)
        if rows.shape[0] != len(labels):
            raise RuntimeError(
                f"{encoder.info.name}: produced {rows.shape[0]} rows for {len(labels)} labels"
            )
        embedded.append((encoder.info, _l2_normalize(rows)))

    common = max(rows.shape[1] for _, rows in embedded) if pad_to_common else None
    entries = []
    for idx, (info, rows) in enumerate(embedded):
        native_dim = int(rows.shape[1])
        if common is not None and native_dim < common:
            rows = np.hstack([rows, np.zeros((rows.shape[0], common - native_dim))])
        filename = f"flabels_{idx:02d}_{_safe(info.name)}.npy"
        write_npy_atomic(os.path.join(out_dir, filename), rows)
        entries.append(
            {
                "name": info.name,
                "identifier": info.identifier,
                "version": info.version,
                "dim": int(rows.shape[1]),
                "native_dim": native_dim,
                "truncation": info.truncation,
                "file": filename,
            }
        )

    sidecar = {
        "schema_version": "1",
        "labels_file": os.path.basename(labels_path),
        "n": len(labels),
        "k": len(entries),
        "encoders": entries,
    }
    with open(os.path.join(out_dir, SIDECAR_NAME), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return sidecar
