"""Two-sided cyclic Jacobi sweep engine, generic over the scalar kind.

The engine works on ``list[list[scalar]]`` and delegates every arithmetic
operation to an *ops* object (float, fixed-point, interval, affine). Each
assignment to an algorithm variable goes through ``ops.store`` (where a
fixed-point kind saturates and logs overflow) and is then reported to the
optional trace hook as ``hook(tag, value)``.

Variable tags: ``A t cs sn a b c X lambda tmp``.
"""
from __future__ import annotations

import math
from typing import Callable, Optional

TAGS = ("A", "t", "cs", "sn", "a", "b", "c", "X", "lambda", "tmp")

TraceHook = Callable[[str, object], None]


class FloatOps:
    """IEEE double scalar kind."""

    kind = "float"
    zero = 0.0
    one = 1.0

    def __init__(self):
        self.position = (-1, -1, -1)

    @staticmethod
    def const(x):
        return float(x)

    @staticmethod
    def value(x):
        return x

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def sqr(x):
        return x * x

    @staticmethod
    def halve(x):
        return x * 0.5

    @staticmethod
    def div(x, y):
        return x / y

    @staticmethod
    def sqrt(x):
        return math.sqrt(x)

    @staticmethod
    def hypot(x, y):
        return math.sqrt(x * x + y * y)

    @staticmethod
    def abs(x):
        return abs(x)

    @staticmethod
    def sign_ratio(num, den):
        # sign((b - a) / c) as sign(b - a) * sign(c); sign(0) = +1
        if num == 0.0:
            return 1.0
        return 1.0 if (num > 0.0) == (den > 0.0) else -1.0

    @staticmethod
    def is_zero(x):
        return x == 0.0

    @staticmethod
    def store(tag, x):
        return x


def rotation(a, b, c, ops):
    """Rotation ``(t, cs, sn)`` zeroing the off-diagonal of ``[[a, c], [c, b]]``.

    When ``c`` is exactly zero the block is already diagonal and the
    identity rotation is returned without evaluating the sign term.
    """
    if ops.is_zero(c):
        return ops.zero, ops.one, ops.zero
    diff = ops.sub(b, a)
    d = ops.halve(diff)
    r = ops.mul(ops.sign_ratio(diff, c), ops.abs(c))
    s = ops.add(ops.abs(d), ops.hypot(c, d))
    if ops.is_zero(s):
        # c*c underflowed with b == a; the exact quotient is |c| / |c|
        return ops.sign_ratio(diff, c), None, None
    t = ops.div(r, s)
    return t, None, None


def pair_update(A, X, i, j, ops, hook: Optional[TraceHook] = None):
    """One (i, j) step: rotation, 2x2 block update, row/column update, X update."""
    store = ops.store
    value = ops.value
    n = len(A)

    def put(tag, x):
        x = store(tag, x)
        if hook is not None:
            hook(tag, value(x))
        return x

    a = put("a", A[i][i])
    b = put("b", A[j][j])
    c = put("c", A[i][j])
    t, cs, sn = rotation(a, b, c, ops)
    t = put("t", t)
    if cs is None:
        cs = put("cs", ops.div(ops.one, ops.hypot(ops.one, t)))
        sn = put("sn", ops.mul(cs, t))
    else:
        cs = put("cs", cs)
        sn = put("sn", sn)

    ct = ops.mul(c, t)
    A[i][i] = put("A", ops.sub(a, ct))
    A[j][j] = put("A", ops.add(b, ct))
    zero = put("A", ops.zero)
    A[i][j] = zero
    A[j][i] = zero

    Ai, Aj = A[i], A[j]
    for k in range(n):
        if k == i or k == j:
            continue
        tmp = put("tmp", Ai[k])
        ajk = Aj[k]
        aik = put("A", ops.sub(ops.mul(cs, tmp), ops.mul(sn, ajk)))
        ajk = put("A", ops.add(ops.mul(sn, tmp), ops.mul(cs, ajk)))
        Ai[k] = aik
        Aj[k] = ajk
        A[k][i] = aik
        A[k][j] = ajk

    for k in range(n):
        Xk = X[k]
        tmp = put("tmp", Xk[i])
        xkj = Xk[j]
        Xk[i] = put("X", ops.sub(ops.mul(cs, tmp), ops.mul(sn, xkj)))
        Xk[j] = put("X", ops.add(ops.mul(sn, tmp), ops.mul(cs, xkj)))


def sweep(A, X, ops, hook: Optional[TraceHook] = None, index: int = 0):
    """One cyclic-by-row pass over all pairs ``i < j`` (in place)."""
    n = len(A)
    for i in range(n):
        for j in range(i + 1, n):
            ops.position = (index, i, j)
            pair_update(A, X, i, j, ops, hook)


def identity(n, ops):
    return [[ops.one if k == l else ops.zero for l in range(n)] for k in range(n)]


def offdiag_fro(A) -> tuple[float, float]:
    """``(off-diagonal Frobenius norm, full Frobenius norm)`` of a float matrix."""
    off = 0.0
    tot = 0.0
    n = len(A)
    for k in range(n):
        row = A[k]
        for l in range(n):
            v = row[l] * row[l]
            tot += v
            if k != l:
                off += v
    return math.sqrt(off), math.sqrt(tot)


def run(A, ops, sweeps: int, hook: Optional[TraceHook] = None,
        early_eps: float = 0.0, on_pair: Optional[Callable] = None):
    """Run up to ``sweeps`` sweeps in place; returns ``(X, sweeps_run)``.

    ``early_eps > 0`` (float kind only) stops after the first sweep whose
    off-diagonal norm is at most ``early_eps`` times the Frobenius norm.
    ``on_pair(A, sweep, i, j)`` is called after every pair update.
    """
    n = len(A)
    X = identity(n, ops)
    done = 0
    for index in range(sweeps):
        if on_pair is None:
            sweep(A, X, ops, hook, index)
        else:
            for i in range(n):
                for j in range(i + 1, n):
                    ops.position = (index, i, j)
                    pair_update(A, X, i, j, ops, hook)
                    on_pair(A, index, i, j)
        done += 1
        if early_eps > 0.0:
            off, fro = offdiag_fro(A)
            if off <= early_eps * fro:
                break
    if hook is not None:
        for k in range(n):
            hook("lambda", ops.value(A[k][k]))
    return X, done
