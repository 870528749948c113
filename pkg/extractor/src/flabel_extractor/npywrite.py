"""NPY v1.0 writer matching the scoring pipeline's pinned byte layout.

Always '<f8', C order, header space-padded so the preamble is 64-byte aligned
and newline-terminated. Files are written atomically (temp + rename) so a
crashed run never leaves a half-written embedding file behind.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

MAGIC = b"\x93NUMPY\x01\x00"


def npy_bytes(matrix: np.ndarray) -> bytes:
    m = np.ascontiguousarray(np.asarray(matrix, dtype=np.float64))
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"need a nonempty 2-D matrix, got shape {m.shape}")
    header_core = (
        "{'descr': '<f8', 'fortran_order': False, "
        f"'shape': ({m.shape[0]}, {m.shape[1]}), }}"
    )
    pad = -(10 + len(header_core) + 1) % 64
    header = (header_core + " " * pad + "\n").encode("latin-1")
    return MAGIC + struct.pack("<H", len(header)) + header + m.astype("<f8").tobytes(order="C")


def write_npy_atomic(path: str, matrix: np.ndarray) -> None:
    blob = npy_bytes(matrix)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".npy.tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
