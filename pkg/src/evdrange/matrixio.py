"""Reading matrices from header-less CSV and Matrix Market files."""
from __future__ import annotations

import io
import math
import warnings

import numpy as np

from .errors import NotSymmetric, ParseError
from .linalg import SymMatrix

__all__ = ["parse_csv_rows", "load_csv", "load_matrix_market", "to_symmetric",
           "ASYMMETRY_WARN", "ASYMMETRY_REJECT"]

# absolute asymmetry that triggers a warning before exact symmetrization
ASYMMETRY_WARN = 1e-9
# relative asymmetry beyond which the input is rejected instead
ASYMMETRY_REJECT = 1e-6


def parse_csv_rows(text: str) -> np.ndarray:
    """Parse comma-separated rows of numbers into a 2-D array.

    Blank lines are skipped. Errors name the 1-based line number.
    """
    rows = []
    width = None
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = [float(cell) for cell in line.split(",")]
        except ValueError:
            raise ParseError(f"row {lineno}: non-numeric entry in {line!r}") from None
        if not all(math.isfinite(v) for v in row):
            raise ParseError(f"row {lineno}: entries must be finite")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"row {lineno} has {len(row)} entries, expected {width}")
        rows.append(row)
    if not rows:
        raise ParseError("no data rows")
    return np.array(rows, dtype=np.float64)


def to_symmetric(arr: np.ndarray, source: str = "input") -> SymMatrix:
    """Exactly symmetrize a square array, warning on visible asymmetry.

    Rejects the matrix (``NotSymmetric``) when the asymmetry is too large
    to be rounding from a file round trip.
    """
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        rows, cols = arr.shape if arr.ndim == 2 else (len(arr), 0)
        if rows > cols:
            where = f"row {cols + 1} is one too many for {cols} columns"
        else:
            where = f"row {rows} is the last row but rows have {cols} entries"
        raise ParseError(f"{source}: matrix is not square ({rows}x{cols}); {where}")
    gap = SymMatrix.asymmetry(arr)
    scale = float(np.max(np.abs(arr))) or 1.0
    if gap > ASYMMETRY_REJECT * scale:
        raise NotSymmetric(f"{source}: max |A - A^T| = {gap:.3g} is too large to symmetrize")
    if gap > ASYMMETRY_WARN:
        warnings.warn(f"{source}: max |A - A^T| = {gap:.3g}; symmetrizing", stacklevel=2)
    return SymMatrix.symmetrized(arr)


def load_csv(path) -> SymMatrix:
    with open(path, encoding="utf-8") as fh:
        arr = parse_csv_rows(fh.read())
    return to_symmetric(arr, str(path))


def load_matrix_market(path) -> SymMatrix:
    from scipy.io import mmread

    try:
        data = mmread(str(path))
    except (ValueError, TypeError, IndexError) as exc:
        raise ParseError(f"{path}: cannot read Matrix Market file: {exc}") from None
    arr = data.toarray() if hasattr(data, "toarray") else np.asarray(data)
    if np.iscomplexobj(arr):
        raise ParseError(f"{path}: complex matrices are not supported")
    arr = np.asarray(arr, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{path}: entries must be finite")
    return to_symmetric(arr, str(path))
