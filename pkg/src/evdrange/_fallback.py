"""Pure-Python implementations of the compiled kernel entry points.

Same signatures and return values as :mod:`evdrange._kernels`; used when
the extension is not built or ``EVDRANGE_PURE_PYTHON`` is set.
"""
from __future__ import annotations

import math

import numpy as np

from . import engine
from .fixedpoint import FixedFormat, FixedOps, OverflowLog

_TAG_INDEX = {tag: k for k, tag in enumerate(engine.TAGS)}


def float_evd(A_in, sweeps: int, track: bool, early_eps: float):
    A = np.array(A_in, dtype=np.float64).tolist()
    env = None
    lo = [math.inf] * len(engine.TAGS)
    hi = [-math.inf] * len(engine.TAGS)

    def envelope(tag, v):
        k = _TAG_INDEX[tag]
        if v < lo[k]:
            lo[k] = v
        if v > hi[k]:
            hi[k] = v

    X, done = engine.run(A, engine.FloatOps(), sweeps, envelope if track else None, early_eps)
    if track:
        env = np.array([lo, hi], dtype=np.float64).T.copy()
    return np.array(A, dtype=np.float64), np.array(X, dtype=np.float64), done, env


class _Stop(Exception):
    pass


class _StopLog(OverflowLog):
    def record(self, event):
        self.events.append(event)
        if self.strict:
            raise _Stop


def fixed_evd(A_in, wl: int, iwl: int, sweeps: int, strict: bool, guard_bits: int):
    fmt = FixedFormat(wl, iwl)
    log = _StopLog(strict=strict)
    ops = FixedOps(fmt, log)
    A = [[int(v) for v in row] for row in np.asarray(A_in)]
    X = engine.identity(len(A), ops)
    try:
        for index in range(sweeps):
            engine.sweep(A, X, ops, None, index)
    except _Stop:
        pass
    events = [(e.operation, e.operands, e.ideal_value, e.stored_value, e.variable,
               e.sweep, e.i, e.j) for e in log.events]
    return np.array(A, dtype=np.int64), np.array(X, dtype=np.int64), events
