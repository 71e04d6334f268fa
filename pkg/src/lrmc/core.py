"""Dense-matrix primitives: thin SVD, observation masks, and CSV I/O.

Matrices are plain 2-D float64 ``numpy`` arrays throughout the package.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import SvdConvergenceError

__all__ = [
    "SvdFactors",
    "ObservationSet",
    "as_matrix",
    "thin_svd",
    "mask_project",
    "masked_frobenius_norm",
    "read_matrix_csv",
    "write_matrix_csv",
    "read_observations_csv",
    "write_observations_csv",
]


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float64 array, raising ValueError otherwise."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


class SvdFactors(NamedTuple):
    """Thin SVD ``A = u @ diag(s) @ v.T`` with k = min(m, n).

    ``s`` is sorted non-increasing; columns of ``u`` (m x k) and ``v`` (n x k)
    are orthonormal. Sign convention: the first nonzero entry of each column
    of ``u`` is non-negative, with the matching column of ``v`` flipped in
    tandem, so factorizations are reproducible run to run.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.v.T


def thin_svd(a) -> SvdFactors:
    """Thin singular value decomposition of a dense matrix.

    Raises ValueError on non-finite input and SvdConvergenceError if the
    underlying factorization does not converge.
    """
    a = as_matrix(a)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdConvergenceError(f"SVD did not converge for {a.shape} input") from exc
    # Fix signs: first nonzero entry of each left singular vector >= 0.
    first_nonzero = np.argmax(u != 0.0, axis=0)
    signs = np.sign(u[first_nonzero, np.arange(u.shape[1])])
    signs[signs == 0.0] = 1.0
    u = u * signs
    vt = vt * signs[:, None]
    return SvdFactors(u, s, vt.T)


class ObservationSet:
    """Set of observed entries of an ``rows x cols`` matrix with their values.

    Indices are zero-based; duplicate (row, col) pairs are rejected. The dense
    boolean mask and the observed matrix (zeros off the support) are cached,
    which is fine at the matrix sizes this package targets.
    """

    def __init__(self, rows: int, cols: int, entries):
        rows, cols = int(rows), int(cols)
        if rows <= 0 or cols <= 0:
            raise ValueError(f"invalid dimensions {rows}x{cols}")
        entries = list(entries)
        if entries:
            ri = np.asarray([e[0] for e in entries], dtype=np.int64)
            ci = np.asarray([e[1] for e in entries], dtype=np.int64)
            vals = np.asarray([e[2] for e in entries], dtype=np.float64)
        else:
            ri = np.zeros(0, dtype=np.int64)
            ci = np.zeros(0, dtype=np.int64)
            vals = np.zeros(0, dtype=np.float64)
        if ri.size and (ri.min() < 0 or ri.max() >= rows or ci.min() < 0 or ci.max() >= cols):
            raise ValueError("observation index out of bounds")
        if not np.all(np.isfinite(vals)):
            raise ValueError("observation values must be finite")
        flat = ri * cols + ci
        if np.unique(flat).size != flat.size:
            raise ValueError("duplicate (row, col) pair in observation set")
        self.rows = rows
        self.cols = cols
        self.row_idx = ri
        self.col_idx = ci
        self.values = vals
        mask = np.zeros((rows, cols), dtype=bool)
        mask[ri, ci] = True
        self._mask = mask
        dense = np.zeros((rows, cols), dtype=np.float64)
        dense[ri, ci] = vals
        self._dense = dense

    @classmethod
    def from_mask(cls, mask: np.ndarray, values: np.ndarray) -> "ObservationSet":
        """Build from a boolean mask and a full matrix of values."""
        mask = np.asarray(mask, dtype=bool)
        values = as_matrix(values, "values")
        if mask.shape != values.shape:
            raise ValueError(f"mask shape {mask.shape} != values shape {values.shape}")
        ri, ci = np.nonzero(mask)
        obj = cls.__new__(cls)
        obj.rows, obj.cols = mask.shape
        obj.row_idx, obj.col_idx = ri, ci
        obj.values = values[ri, ci].astype(np.float64)
        obj._mask = mask.copy()
        dense = np.zeros(mask.shape, dtype=np.float64)
        dense[ri, ci] = obj.values
        obj._dense = dense
        return obj

    @property
    def count(self) -> int:
        return int(self.values.size)

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    def observed_matrix(self) -> np.ndarray:
        """Dense matrix holding the observed values, zero elsewhere."""
        return self._dense.copy()

    def __repr__(self):
        return f"ObservationSet({self.rows}x{self.cols}, {self.count} entries)"


def _check_dims(a: np.ndarray, obs: ObservationSet):
    if a.shape != (obs.rows, obs.cols):
        raise ValueError(f"matrix shape {a.shape} does not match observations "
                         f"{obs.rows}x{obs.cols}")


def mask_project(a, obs: ObservationSet) -> np.ndarray:
    """Keep the entries indexed by the observation set, zero out the rest."""
    a = as_matrix(a)
    _check_dims(a, obs)
    return np.where(obs.mask, a, 0.0)


def masked_frobenius_norm(a, obs: ObservationSet) -> float:
    """Frobenius norm of a matrix restricted to the observed entries."""
    a = as_matrix(a)
    _check_dims(a, obs)
    return float(np.linalg.norm(a[obs.mask]))


# ---------------------------------------------------------------------------
# CSV formats. Matrix file: first line "rows,cols", then one row per line.
# Observation file: first line "rows,cols", then "row,col,value" triplets.
# UTF-8, '.' decimal; floats are written with repr for lossless round trips.
# ---------------------------------------------------------------------------

def _parse_header(line: str, path, lineno: int) -> tuple[int, int]:
    parts = line.strip().split(",")
    if len(parts) != 2:
        raise ValueError(f"{path}:{lineno}: expected header 'rows,cols', got {line!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"{path}:{lineno}: non-integer dimensions in {line!r}") from None


def read_matrix_csv(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    rows, cols = _parse_header(lines[0], path, 1)
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise ValueError(f"{path}: expected {rows} data rows, found {len(body)}")
    out = np.empty((rows, cols), dtype=np.float64)
    for i, ln in enumerate(body):
        parts = ln.split(",")
        if len(parts) != cols:
            raise ValueError(f"{path}:{i + 2}: expected {cols} values, found {len(parts)}")
        try:
            out[i] = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"{path}:{i + 2}: non-numeric value in row") from None
    return as_matrix(out, str(path))


def write_matrix_csv(path, a) -> None:
    a = as_matrix(a)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{a.shape[0]},{a.shape[1]}\n")
        for row in a:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def read_observations_csv(path) -> ObservationSet:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    rows, cols = _parse_header(lines[0], path, 1)
    entries = []
    for lineno, ln in enumerate(lines[1:], start=2):
        if not ln.strip():
            continue
        parts = ln.split(",")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'row,col,value', got {ln!r}")
        try:
            entries.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: malformed triplet {ln!r}") from None
    try:
        return ObservationSet(rows, cols, entries)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def write_observations_csv(path, obs: ObservationSet) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{obs.rows},{obs.cols}\n")
        for r, c, v in zip(obs.row_idx, obs.col_idx, obs.values):
            fh.write(f"{r},{c},{repr(float(v))}\n")
