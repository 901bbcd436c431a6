"""Two-sided cyclic Jacobi eigenvalue decomposition.

Float runs without a trace hook go through the compiled kernel when it is
available; with a hook they use the generic engine so the callback sees
every assignment. Fixed-point runs simulate a single Q-format for all
variables and return the overflow log.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _backend, engine
from .engine import FloatOps, TraceHook
from .errors import NotSymmetric
from .fixedpoint import (GUARD_BITS, FixedFormat, OverflowEvent, OverflowLog,
                         fx_quantize)
from .linalg import SymMatrix

__all__ = [
    "RotationParams",
    "EvdResult",
    "jacobi_rotation",
    "sweep",
    "jacobi_evd",
    "traced_evd",
    "fixed_jacobi_evd",
    "off_diagonal_norm",
    "sort_descending",
    "EARLY_EXIT_EPS",
]

EARLY_EXIT_EPS = 1e-12


@dataclass(frozen=True)
class RotationParams:
    t: float
    cs: float
    sn: float


@dataclass(frozen=True)
class EvdResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps_run: int
    offdiag_residual: float
    overflow_events: tuple = field(default_factory=tuple)


def _as_sym(A) -> SymMatrix:
    if isinstance(A, SymMatrix):
        return A
    try:
        return SymMatrix(A)
    except NotSymmetric:
        raise NotSymmetric("Jacobi EVD needs a symmetric matrix") from None


def jacobi_rotation(a: float, b: float, c: float) -> RotationParams:
    """Rotation that annihilates ``c`` in ``[[a, c], [c, b]]``.

    Uses sign(0) = +1, so ``a == b`` gives ``t = 1``; ``c == 0`` gives the
    identity rotation.
    """
    ops = FloatOps()
    t, cs, sn = engine.rotation(float(a), float(b), float(c), ops)
    if cs is None:
        cs = 1.0 / ops.hypot(1.0, t)
        sn = cs * t
    return RotationParams(t, cs, sn)


def off_diagonal_norm(A) -> float:
    arr = np.asarray(A, dtype=np.float64)
    off = arr - np.diag(np.diag(arr))
    return float(np.sqrt(np.sum(off * off)))


def sweep(A, X=None, hook: Optional[TraceHook] = None, index: int = 0):
    """One cyclic-by-row sweep; returns new ``(A, X)`` arrays."""
    a = np.array(A, dtype=np.float64).tolist()
    x = np.eye(len(a)).tolist() if X is None else np.array(X, dtype=np.float64).tolist()
    engine.sweep(a, x, FloatOps(), hook, index)
    return np.array(a), np.array(x)


def _result(A: np.ndarray, X: np.ndarray, done: int, events=()) -> EvdResult:
    return EvdResult(np.diag(A).copy(), X, done, off_diagonal_norm(A), tuple(events))


def jacobi_evd(A, sweeps: int | None = None, hook: Optional[TraceHook] = None,
               early_exit: bool = False) -> EvdResult:
    """Double-precision Jacobi EVD; ``sweeps`` defaults to n.

    Eigenvalues come back in diagonal order; eigenvectors are the columns
    of the accumulated rotation matrix.
    """
    M = _as_sym(A)
    sweeps = M.n if sweeps is None else int(sweeps)
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    eps = EARLY_EXIT_EPS if early_exit else 0.0
    if hook is None:
        A_out, X, done, _ = _backend.float_evd(np.array(M.entries), sweeps, False, eps)
        return _result(A_out, X, done)
    work = M.entries.tolist()
    Xl, done = engine.run(work, FloatOps(), sweeps, hook, eps)
    return _result(np.array(work), np.array(Xl), done)


def traced_evd(A, sweeps: int | None = None):
    """Jacobi EVD plus the min/max envelope of every traced variable.

    Returns ``(EvdResult, {tag: (lo, hi)})``. Tags never assigned (for
    example on a 1x1 input) get ``(inf, -inf)``.
    """
    M = _as_sym(A)
    sweeps = M.n if sweeps is None else int(sweeps)
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    A_out, X, done, env = _backend.float_evd(np.array(M.entries), sweeps, True, 0.0)
    envelope = {tag: (float(env[k, 0]), float(env[k, 1])) for k, tag in enumerate(engine.TAGS)}
    return _result(A_out, X, done), envelope


def fixed_jacobi_evd(A, fmt: FixedFormat, sweeps: int | None = None,
                     strict: bool = False) -> EvdResult:
    """Jacobi EVD simulated in the Q-format ``fmt``.

    Out-of-range values saturate and are logged in ``overflow_events``;
    with ``strict`` the first event raises :class:`~evdrange.errors.FixedOverflow`.
    """
    M = _as_sym(A)
    sweeps = M.n if sweeps is None else int(sweeps)
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    log = OverflowLog(strict=strict)
    n = M.n
    raw = np.zeros((n, n), dtype=np.int64)
    for k in range(n):
        for l in range(k, n):
            caught = OverflowLog()
            q = fx_quantize(float(M.entries[k, l]), fmt, caught)
            for ev in caught.events:
                log.record(replace(ev, variable="A", i=k, j=l))
            raw[k, l] = raw[l, k] = q.raw
    A_raw, X_raw, events = _backend.fixed_evd(raw, fmt.word_length, fmt.integer_bits,
                                              sweeps, strict, GUARD_BITS)
    for ev in events:
        log.record(OverflowEvent(*ev))
    scale = math.ldexp(1.0, -fmt.fraction_bits)
    A_val = A_raw.astype(np.float64) * scale
    X_val = X_raw.astype(np.float64) * scale
    return _result(A_val, X_val, sweeps, log.events)


def sort_descending(eigenvalues, eigenvectors=None):
    """Sort eigenvalues descending, permuting eigenvector columns to match."""
    lam = np.asarray(eigenvalues, dtype=np.float64)
    order = np.argsort(-lam, kind="stable")
    if eigenvectors is None:
        return lam[order]
    return lam[order], np.asarray(eigenvectors)[:, order]
