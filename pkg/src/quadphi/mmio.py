"""Matrix Market input/output for dense real matrices.

Writing always produces the ``array real general`` variant with each value
printed by ``repr(float)``, the shortest decimal string that reads back to the
same double, so a write/read cycle is bit-exact.  Reading accepts array and
coordinate layouts, general or symmetric.  Array files are parsed here
(scipy drops the sign of ``-0.0``); coordinate files go through
:func:`scipy.io.mmread`.
"""
from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse


class MatrixFileError(ValueError):
    """A matrix file is missing, unreadable or malformed."""


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_mtx(a: np.ndarray) -> str:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = a.shape
    lines = ["%%MatrixMarket matrix array real general", f"{rows} {cols}"]
    # array layout is column-major
    lines.extend(repr(float(v)) for v in a.T.ravel())
    return "\n".join(lines) + "\n"


def write_mtx(path, a: np.ndarray) -> None:
    atomic_write_text(path, format_mtx(a))


def _read_array(path: Path, header: list[str], lines) -> np.ndarray:
    symmetry = header[4]
    body = [ln for ln in lines if ln.strip() and not ln.startswith("%")]
    if not body:
        raise MatrixFileError(f"{path}: missing size line")
    try:
        rows, cols = (int(t) for t in body[0].split())
        values = [float(t) for ln in body[1:] for t in ln.split()]
    except ValueError as exc:
        raise MatrixFileError(f"malformed Matrix Market file {path}: {exc}") from exc
    if symmetry == "general":
        if len(values) != rows * cols:
            raise MatrixFileError(f"{path}: expected {rows * cols} values, found {len(values)}")
        return np.array(values, dtype=np.float64).reshape(cols, rows).T.copy()
    if rows != cols:
        raise MatrixFileError(f"{path}: symmetric matrix must be square")
    if len(values) != rows * (rows + 1) // 2:
        raise MatrixFileError(f"{path}: wrong number of values for a symmetric array")
    out = np.zeros((rows, rows))
    it = iter(values)
    for j in range(rows):
        for i in range(j, rows):
            out[i, j] = out[j, i] = next(it)
    return out


def read_mtx(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise MatrixFileError(f"cannot read matrix file {path}: no such file")
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise MatrixFileError(f"cannot read matrix file {path}: {exc}") from exc
    header = lines[0].lower().split() if lines else []
    if len(header) != 5 or header[0] != "%%matrixmarket" or header[1] != "matrix":
        raise MatrixFileError(f"{path}: not a Matrix Market file")
    if header[3] not in ("real", "integer", "double"):
        raise MatrixFileError(f"{path}: only real matrices are supported")
    if header[4] not in ("general", "symmetric"):
        raise MatrixFileError(f"{path}: unsupported symmetry {header[4]!r}")
    if header[2] == "array":
        return _read_array(path, header, lines[1:])
    try:
        m = scipy.io.mmread(str(path))
    except Exception as exc:
        raise MatrixFileError(f"malformed Matrix Market file {path}: {exc}") from exc
    if scipy.sparse.issparse(m):
        m = m.toarray()
    return np.asarray(m, dtype=np.float64)


def format_csv_matrix(a: np.ndarray) -> str:
    """Dense CSV with a ``c0,c1,..`` header row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"c{j}" for j in range(a.shape[1])])
    for row in np.asarray(a, dtype=np.float64):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def format_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
