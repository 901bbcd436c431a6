"""Dense symmetric matrices, norm bounds and spectral-norm scaling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientRows, NotSymmetric, ZeroMatrix

__all__ = [
    "SymMatrix",
    "ScaleResult",
    "norm_one",
    "norm_inf",
    "spectral_bound",
    "scale_matrix",
    "random_spsd",
    "random_data",
    "covariance",
]


def _as_square(entries) -> np.ndarray:
    arr = np.array(entries, dtype=np.float64, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Immutable dense symmetric matrix.

    The constructor requires exact (bitwise) symmetry; use
    :meth:`symmetrized` for data that went through a lossy round trip.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_square(self.entries)
        if not np.array_equal(arr, arr.T):
            raise NotSymmetric("matrix is not exactly symmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def symmetrized(cls, entries) -> "SymMatrix":
        """Build from ``(E + E^T) / 2``, which is exactly symmetric."""
        arr = _as_square(entries)
        return cls((arr + arr.T) / 2.0)

    @staticmethod
    def asymmetry(entries) -> float:
        arr = _as_square(entries)
        return float(np.max(np.abs(arr - arr.T)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __getitem__(self, idx):
        return self.entries[idx]

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __truediv__(self, scalar: float) -> "SymMatrix":
        return SymMatrix(self.entries / scalar)

    def tolist(self) -> list[list[float]]:
        return self.entries.tolist()

    def __repr__(self):
        return f"SymMatrix(n={self.n}, entries={self.entries.tolist()!r})"


@dataclass(frozen=True)
class ScaleResult:
    scaled: SymMatrix
    factor_m: float


def _entries(M) -> np.ndarray:
    return M.entries if isinstance(M, SymMatrix) else np.asarray(M, dtype=np.float64)


def norm_one(M) -> float:
    """Maximum absolute column sum."""
    return float(np.max(np.sum(np.abs(_entries(M)), axis=0)))


def norm_inf(M) -> float:
    """Maximum absolute row sum."""
    return float(np.max(np.sum(np.abs(_entries(M)), axis=1)))


def spectral_bound(M) -> float:
    """Upper bound ``sqrt(||M||_1 ||M||_inf)`` on the spectral norm."""
    one, inf = norm_one(M), norm_inf(M)
    if one == inf:
        return one
    prod = one * inf
    if prod == 0.0 or math.isinf(prod):
        # the product under- or overflows; take the roots separately
        return math.sqrt(one) * math.sqrt(inf)
    return math.sqrt(prod)


def scale_matrix(M: SymMatrix) -> ScaleResult:
    """Divide ``M`` by its spectral-norm bound so every entry lies in [-1, 1].

    Eigenvalues of the result are those of ``M`` divided by ``factor_m``;
    eigenvectors are unchanged.
    """
    if not isinstance(M, SymMatrix):
        M = SymMatrix(M)
    m = spectral_bound(M)
    if m == 0.0:
        raise ZeroMatrix("cannot scale the zero matrix")
    return ScaleResult(SymMatrix(M.entries / m), m)


def _rng(seed: int) -> np.random.Generator:
    # PCG64 (XSL-RR 128/64) has a fixed, documented output stream for a given
    # seed, so generated corpora are identical across platforms.
    return np.random.Generator(np.random.PCG64(seed))


def random_spsd(n: int, seed: int, entry_scale: float = 1.0) -> SymMatrix:
    """Random symmetric positive semi-definite matrix ``B @ B.T``.

    ``B`` is ``n x n`` with entries drawn uniformly from ``[0, entry_scale)``
    using PCG64 seeded with ``seed``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if entry_scale <= 0:
        raise ValueError("entry_scale must be positive")
    B = _rng(seed).random((n, n)) * entry_scale
    return SymMatrix.symmetrized(B @ B.T)


def random_data(n: int, seed: int, rows: int | None = None, entry_scale: float = 1.0) -> np.ndarray:
    """Synthetic observation matrix (``rows x n``) for the PCA pipeline.

    Bands are mixed through a random lower-triangular map so the
    covariance has a decaying spectrum, roughly like correlated spectral
    bands.
    """
    rows = rows if rows is not None else 8 * n
    rng = _rng(seed)
    latent = rng.random((rows, n))
    mix = np.tril(rng.random((n, n)))
    return latent @ mix.T * entry_scale


def covariance(data) -> SymMatrix:
    """Sample covariance (divides by ``m - 1``) of row observations."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError("data must be a 2-D array")
    m = arr.shape[0]
    if m < 2:
        raise InsufficientRows(f"need at least 2 observations, got {m}")
    centered = arr - arr.mean(axis=0)
    return SymMatrix.symmetrized(centered.T @ centered / (m - 1))
