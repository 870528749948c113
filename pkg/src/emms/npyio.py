"""NPY v1.0 reader/writer with a pinned byte layout.

Read side accepts exactly: magic 0x93 'NUMPY', version bytes 01 00, a 2-byte
little-endian header length, a header dict with descr '<f4' or '<f8',
fortran_order False, and a 1-D or 2-D shape; 1-D arrays load as N x 1 and
float32 payloads widen losslessly to float64. Write side always emits '<f8'
with the header space-padded so the whole preamble is 64-byte aligned and
newline terminated, which makes round trips bit-exact and the files readable
by any standard NPY consumer.
"""

from __future__ import annotations

import ast
import os
import struct

import numpy as np

from .errors import (
    BadMagicError,
    FortranOrderUnsupportedError,
    InputError,
    IoFailureError,
    NonFiniteInputError,
    ShapeMismatchError,
    TruncatedPayloadError,
    UnsupportedDtypeError,
)
from .linalg import as_matrix

MAGIC = b"\x93NUMPY"
_VERSION = b"\x01\x00"
_DTYPES = {"<f4": np.dtype("<f4"), "<f8": np.dtype("<f8")}


def read_npy(path) -> np.ndarray:
    """Load an NPY v1.0 float matrix as a float64 N x M array."""
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc

    if blob[:6] != MAGIC:
        raise BadMagicError(f"{path}: offset 0: not an NPY file (magic mismatch)")
    if blob[6:8] != _VERSION:
        raise BadMagicError(
            f"{path}: offset 6: unsupported NPY version {tuple(blob[6:8])}, need (1, 0)"
        )
    if len(blob) < 10:
        raise TruncatedPayloadError(f"{path}: offset 8: header length field truncated")
    (header_len,) = struct.unpack("<H", blob[8:10])
    header_end = 10 + header_len
    if len(blob) < header_end:
        raise TruncatedPayloadError(
            f"{path}: offset 10: header truncated ({len(blob) - 10} of {header_len} bytes)"
        )
    try:
        header = ast.literal_eval(blob[10:header_end].decode("latin-1").strip())
        if not isinstance(header, dict):
            raise ValueError("header is not a dict")
    except (ValueError, SyntaxError) as exc:
        raise BadMagicError(f"{path}: offset 10: unparsable NPY header ({exc})") from None

    descr = header.get("descr")
    if descr not in _DTYPES:
        raise UnsupportedDtypeError(
            f"{path}: offset 10: dtype {descr!r} unsupported (need '<f4' or '<f8')"
        )
    if header.get("fortran_order"):
        raise FortranOrderUnsupportedError(
            f"{path}: offset 10: fortran_order=True payloads are not supported"
        )
    shape = header.get("shape")
    if (
        not isinstance(shape, tuple)
        or not shape
        or len(shape) > 2
        or not all(isinstance(s, int) and s >= 0 for s in shape)
    ):
        raise ShapeMismatchError(
            f"{path}: offset 10: shape {shape!r} unsupported (need 1-D or 2-D)"
        )

    dtype = _DTYPES[descr]
    count = int(np.prod(shape, dtype=np.int64))
    expected = count * dtype.itemsize
    payload = blob[header_end:]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"{path}: offset {header_end}: payload truncated "
            f"({len(payload)} of {expected} bytes)"
        )
    values = np.frombuffer(payload, dtype=dtype, count=count).reshape(shape)
    if values.ndim == 1:
        values = values[:, None]
    return as_matrix(values, path)


def write_npy(path, matrix) -> None:
    """Write a matrix as NPY v1.0 '<f8'; round-trips through read_npy bit-exactly."""
    try:
        m = as_matrix(matrix, "matrix")
    except NonFiniteInputError:
        raise
    if m.size == 0:
        raise IoFailureError(f"EmptyMatrix: refusing to write {m.shape[0]}x{m.shape[1]} matrix")
    header_core = (
        "{'descr': '<f8', 'fortran_order': False, "
        f"'shape': ({m.shape[0]}, {m.shape[1]}), }}"
    )
    pad = -(10 + len(header_core) + 1) % 64
    header = header_core + " " * pad + "\n"
    path = os.fspath(path)
    try:
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(_VERSION)
            fh.write(struct.pack("<H", len(header)))
            fh.write(header.encode("latin-1"))
            fh.write(m.astype("<f8", copy=False).tobytes(order="C"))
    except OSError as exc:
        raise IoFailureError(f"{path}: {exc}") from exc
