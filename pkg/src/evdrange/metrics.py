"""Accuracy metrics and the PCA pipeline built on the Jacobi solver."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AllZero, DimensionMismatch, LengthMismatch, NoScaleFactor, ShapeMismatch
from .fixedpoint import FixedFormat
from .jacobi import fixed_jacobi_evd, jacobi_evd, sort_descending
from .linalg import SymMatrix, covariance, scale_matrix

__all__ = [
    "EXACT",
    "sqnr",
    "pc_count",
    "PcaModel",
    "fit_pca",
    "pca_project",
    "pca_reconstruct",
    "mse",
    "recover_eigenvalues",
    "align_signs",
    "FormatResult",
    "fixed_point_sweep",
]

# SQNR sentinel for a zero error term (keeps reports JSON-safe)
EXACT = "exact"


def sqnr(lambda_float, lambda_fixed):
    """Signal-to-quantization-noise ratio in dB between two spectra.

    Both lists are sorted descending before pairing. Returns :data:`EXACT`
    when they agree exactly.
    """
    f = np.asarray(lambda_float, dtype=np.float64).ravel()
    x = np.asarray(lambda_fixed, dtype=np.float64).ravel()
    if f.shape != x.shape:
        raise LengthMismatch(f"spectra have lengths {f.size} and {x.size}")
    if f.size == 0:
        raise ValueError("empty spectra")
    f = np.sort(f)[::-1]
    x = np.sort(x)[::-1]
    noise = float(np.mean((f - x) ** 2))
    if noise == 0.0:
        return EXACT
    signal = float(np.mean(f ** 2))
    if signal == 0.0:
        return -math.inf
    return 10.0 * math.log10(signal / noise)


def pc_count(eigenvalues, variance_fraction: float = 0.99) -> int:
    """Smallest k whose k largest eigenvalues explain ``variance_fraction`` of the total."""
    if not 0.0 < variance_fraction <= 1.0:
        raise ValueError("variance_fraction must be in (0, 1]")
    lam = np.sort(np.asarray(eigenvalues, dtype=np.float64).ravel())[::-1]
    if lam.size == 0:
        raise ValueError("no eigenvalues")
    total = float(np.sum(lam))
    if total == 0.0:
        raise AllZero("eigenvalues sum to zero")
    cum = np.cumsum(lam)
    k = int(np.searchsorted(cum, variance_fraction * total, side="left")) + 1
    return min(k, lam.size)


@dataclass(frozen=True)
class PcaModel:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    num_components: int
    mean: np.ndarray
    scale_factor_m: Optional[float] = None

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues)
        if np.any(np.diff(lam) > 0):
            raise ValueError("eigenvalues must be non-increasing")
        if not 1 <= self.num_components <= lam.size:
            raise ValueError("num_components out of range")

    @property
    def kept(self) -> np.ndarray:
        return self.eigenvectors[:, : self.num_components]


def fit_pca(data, variance_fraction: float = 0.99, scaled: bool = False,
            num_components: int | None = None, fmt: FixedFormat | None = None,
            sweeps: int | None = None) -> PcaModel:
    """PCA of row observations via Jacobi EVD of the sample covariance.

    ``scaled`` divides the covariance by its spectral-norm bound first
    (eigenvalues are then the scaled ones; see :func:`recover_eigenvalues`).
    ``fmt`` runs the decomposition in that fixed-point format.
    """
    arr = np.asarray(data, dtype=np.float64)
    cov = covariance(arr)
    m = None
    if scaled:
        res = scale_matrix(cov)
        cov, m = res.scaled, res.factor_m
    evd = fixed_jacobi_evd(cov, fmt, sweeps) if fmt is not None else jacobi_evd(cov, sweeps)
    lam, vecs = sort_descending(evd.eigenvalues, evd.eigenvectors)
    k = num_components if num_components is not None else pc_count(np.clip(lam, 0.0, None),
                                                                    variance_fraction)
    return PcaModel(lam, vecs, k, arr.mean(axis=0), m)


def pca_project(data, model: PcaModel) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != model.eigenvectors.shape[0]:
        raise DimensionMismatch(f"data has shape {arr.shape}, model expects "
                                f"{model.eigenvectors.shape[0]} columns")
    return (arr - model.mean) @ model.kept


def pca_reconstruct(projected, model: PcaModel) -> np.ndarray:
    arr = np.asarray(projected, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != model.num_components:
        raise DimensionMismatch(f"projection has shape {arr.shape}, model keeps "
                                f"{model.num_components} components")
    return arr @ model.kept.T + model.mean


def mse(image_a, image_b) -> float:
    a = np.asarray(image_a, dtype=np.float64)
    b = np.asarray(image_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.mean((a - b) ** 2))


def recover_eigenvalues(model: PcaModel) -> np.ndarray:
    """Eigenvalues of the unscaled covariance: ``m * lambda_hat``."""
    if model.scale_factor_m is None:
        raise NoScaleFactor("model was fitted without scaling")
    return np.asarray(model.eigenvalues) * model.scale_factor_m


def align_signs(reference, vectors) -> np.ndarray:
    """Flip columns of ``vectors`` that point away from the matching ``reference`` column."""
    ref = np.asarray(reference)
    out = np.array(vectors, dtype=np.float64, copy=True)
    dots = np.sum(ref * out, axis=0)
    out[:, dots < 0] *= -1.0
    return out


# --- fixed-point evaluation ----------------------------------------------

@dataclass(frozen=True)
class FormatResult:
    format: FixedFormat
    sqnr_db: object
    pc_mse: tuple
    overflow_count: int


def fixed_point_sweep(matrix, formats, data=None, sweeps: int | None = None,
                      variance_fraction: float = 0.99, strict: bool = False) -> list:
    """Compare fixed-point runs against double precision on the scaled matrix.

    For each format: SQNR of the scaled eigenvalues and, when ``data`` is
    given, the MSE of each retained principal-component image (projection
    of the centred data on one eigenvector).
    """
    M = matrix if isinstance(matrix, SymMatrix) else SymMatrix(matrix)
    scaled = scale_matrix(M).scaled
    ref = jacobi_evd(scaled, sweeps)
    lam_f, vec_f = sort_descending(ref.eigenvalues, ref.eigenvectors)
    centred = None
    k = 0
    if data is not None:
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != M.n:
            raise DimensionMismatch("data columns must match the matrix size")
        centred = arr - arr.mean(axis=0)
        k = pc_count(np.clip(lam_f, 0.0, None), variance_fraction)
    out = []
    for fmt in formats:
        run = fixed_jacobi_evd(scaled, fmt, sweeps, strict=strict)
        lam_x, vec_x = sort_descending(run.eigenvalues, run.eigenvectors)
        pcs = ()
        if centred is not None:
            vec_x = align_signs(vec_f, vec_x)
            pcs = tuple(mse(centred @ vec_f[:, c], centred @ vec_x[:, c]) for c in range(k))
        out.append(FormatResult(fmt, sqnr(lam_f, lam_x), pcs, len(run.overflow_events)))
    return out
