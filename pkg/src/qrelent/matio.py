"""Matrix and projector files.

A matrix file is a JSON document::

    {
      "dim": 2,
      "matrix": [
        [[0.5, 0.0], [0.0, -0.5]],
        [[0.0, 0.5], [0.5, 0.0]]
      ]
    }

``matrix`` holds ``dim`` rows of ``dim`` entries, each entry a
``[real, imag]`` pair.  A projector file carries ``dim`` plus a
``projectors`` list of matrices in the same row encoding.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FileFormatError

__all__ = ["load_matrix", "save_matrix", "load_projectors", "save_projectors"]


def _matrix_to_rows(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(m, dtype=complex)]


def _rows_to_matrix(rows, dim: int, what: str) -> np.ndarray:
    try:
        m = np.array([[complex(e[0], e[1]) for e in row] for row in rows], dtype=complex)
    except (TypeError, ValueError, IndexError) as exc:
        raise FileFormatError(f"{what}: entries must be [real, imag] pairs ({exc})") from exc
    if m.shape != (dim, dim):
        raise FileFormatError(f"{what}: expected shape ({dim}, {dim}), got {m.shape}")
    return m


def _load_json(path: str | Path, what: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise FileFormatError(f"cannot read {what} file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{what} file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{what} file {path}: top level must be an object")
    return doc


def _get_dim(doc: dict, path: str | Path, what: str) -> int:
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise FileFormatError(f"{what} file {path}: 'dim' must be a positive integer")
    return dim


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a complex square matrix from a matrix file."""
    doc = _load_json(path, "matrix")
    dim = _get_dim(doc, path, "matrix")
    rows = doc.get("matrix")
    if not isinstance(rows, list):
        raise FileFormatError(f"matrix file {path}: missing 'matrix' rows")
    return _rows_to_matrix(rows, dim, f"matrix file {path}")


def save_matrix(path: str | Path, matrix: np.ndarray) -> None:
    """Write a complex square matrix as a matrix file."""
    m = np.asarray(matrix, dtype=complex)
    doc = {"dim": int(m.shape[0]), "matrix": _matrix_to_rows(m)}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_projectors(path: str | Path) -> list[np.ndarray]:
    """Read a list of same-dimension complex matrices from a projector file."""
    doc = _load_json(path, "projector")
    dim = _get_dim(doc, path, "projector")
    entries = doc.get("projectors")
    if not isinstance(entries, list) or not entries:
        raise FileFormatError(f"projector file {path}: missing non-empty 'projectors' list")
    return [
        _rows_to_matrix(rows, dim, f"projector file {path} (entry {k})")
        for k, rows in enumerate(entries)
    ]


def save_projectors(path: str | Path, projectors) -> None:
    """Write a list of matrices as a projector file."""
    mats = [np.asarray(p, dtype=complex) for p in projectors]
    doc = {"dim": int(mats[0].shape[0]), "projectors": [_matrix_to_rows(m) for m in mats]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
