# cython: language_level=3
"""Compiled Jacobi sweep kernels (float and fixed-point).

Both kernels perform exactly the operations of :mod:`evdrange.engine` in
the same order, so results agree bit for bit with the pure-Python path.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, ldexp, INFINITY

cnp.import_array()

cdef extern from *:
    ctypedef long long i128 "__int128"
    ctypedef unsigned long long u128 "unsigned __int128"

# tag order shared with engine.TAGS
cdef enum:
    T_A = 0
    T_T = 1
    T_CS = 2
    T_SN = 3
    T_a = 4
    T_b = 5
    T_c = 6
    T_X = 7
    T_L = 8
    T_TMP = 9

_TAG_NAMES = ("A", "t", "cs", "sn", "a", "b", "c", "X", "lambda", "tmp")


cdef inline void _note(double[:, ::1] env, int tag, double v) noexcept nogil:
    if v < env[tag, 0]:
        env[tag, 0] = v
    if v > env[tag, 1]:
        env[tag, 1] = v


def float_evd(cnp.ndarray[cnp.float64_t, ndim=2] A_in, int sweeps, bint track,
              double early_eps):
    """Run ``sweeps`` cyclic sweeps on a copy of ``A_in``.

    Returns ``(A, X, sweeps_run, envelope)``; ``envelope`` is a (10, 2)
    min/max array over all traced assignments, or None when not tracking.
    """
    cdef Py_ssize_t n = A_in.shape[0]
    cdef double[:, ::1] A = np.ascontiguousarray(A_in, dtype=np.float64).copy()
    cdef double[:, ::1] X = np.eye(n, dtype=np.float64)
    env_arr = np.empty((10, 2), dtype=np.float64)
    env_arr[:, 0] = INFINITY
    env_arr[:, 1] = -INFINITY
    cdef double[:, ::1] env = env_arr
    cdef Py_ssize_t i, j, k, l
    cdef int index, done = 0
    cdef double a, b, c, diff, d, r, s, t, cs, sn, ct, tmp, ajk, aik, xkj, v, off, tot
    with nogil:
        for index in range(sweeps):
            for i in range(n):
                for j in range(i + 1, n):
                    a = A[i, i]
                    b = A[j, j]
                    c = A[i, j]
                    if c == 0.0:
                        t = 0.0
                        cs = 1.0
                        sn = 0.0
                    else:
                        diff = b - a
                        d = diff * 0.5
                        if diff == 0.0 or (diff > 0.0) == (c > 0.0):
                            r = 1.0 * fabs(c)
                        else:
                            r = -1.0 * fabs(c)
                        s = fabs(d) + sqrt(c * c + d * d)
                        if s == 0.0:
                            t = 1.0 if (diff == 0.0 or (diff > 0.0) == (c > 0.0)) else -1.0
                        else:
                            t = r / s
                        cs = 1.0 / sqrt(1.0 * 1.0 + t * t)
                        sn = cs * t
                    if track:
                        _note(env, T_a, a)
                        _note(env, T_b, b)
                        _note(env, T_c, c)
                        _note(env, T_T, t)
                        _note(env, T_CS, cs)
                        _note(env, T_SN, sn)
                    ct = c * t
                    A[i, i] = a - ct
                    A[j, j] = b + ct
                    A[i, j] = 0.0
                    A[j, i] = 0.0
                    if track:
                        _note(env, T_A, A[i, i])
                        _note(env, T_A, A[j, j])
                        _note(env, T_A, 0.0)
                    for k in range(n):
                        if k == i or k == j:
                            continue
                        tmp = A[i, k]
                        ajk = A[j, k]
                        aik = cs * tmp - sn * ajk
                        ajk = sn * tmp + cs * ajk
                        A[i, k] = aik
                        A[j, k] = ajk
                        A[k, i] = aik
                        A[k, j] = ajk
                        if track:
                            _note(env, T_TMP, tmp)
                            _note(env, T_A, aik)
                            _note(env, T_A, ajk)
                    for k in range(n):
                        tmp = X[k, i]
                        xkj = X[k, j]
                        X[k, i] = cs * tmp - sn * xkj
                        X[k, j] = sn * tmp + cs * xkj
                        if track:
                            _note(env, T_TMP, tmp)
                            _note(env, T_X, X[k, i])
                            _note(env, T_X, X[k, j])
            done += 1
            if early_eps > 0.0:
                off = 0.0
                tot = 0.0
                for k in range(n):
                    for l in range(n):
                        v = A[k, l] * A[k, l]
                        tot += v
                        if k != l:
                            off += v
                if sqrt(off) <= early_eps * sqrt(tot):
                    break
        if track:
            for k in range(n):
                _note(env, T_L, A[k, k])
    return np.asarray(A), np.asarray(X), done, (env_arr if track else None)


# --- fixed point --------------------------------------------------------

cdef struct FxCtx:
    int frac
    i128 acc_min
    i128 acc_max
    long long raw_min
    long long raw_max
    int sweep
    int i
    int j
    bint strict
    bint stop


cdef inline double _val(i128 raw, int frac) noexcept:
    if raw == 0:
        return 0.0
    return ldexp(<double>raw, -frac)


cdef inline i128 _round_shift(i128 x, int shift) noexcept:
    cdef i128 q, rem, half
    if shift <= 0:
        return x * ((<i128>1) << (-shift))
    q = x >> shift
    rem = x - q * ((<i128>1) << shift)
    half = (<i128>1) << (shift - 1)
    if rem > half or (rem == half and (q & 1)):
        q += 1
    return q


cdef inline i128 _div_rne(i128 num, i128 den) noexcept:
    cdef i128 q, r, twice
    if den < 0:
        num = -num
        den = -den
    q = num / den
    r = num - q * den
    if r < 0:
        q -= 1
        r += den
    twice = 2 * r
    if twice > den or (twice == den and (q & 1)):
        q += 1
    return q


cdef inline i128 _isqrt_rn(i128 x) noexcept:
    cdef u128 ux = <u128>x
    cdef u128 s = <u128>sqrt(<double>x)
    cdef int it
    for it in range(4):
        if s == 0:
            break
        s = (s + ux / s) >> 1
    while s * s > ux:
        s -= 1
    while (s + 1) * (s + 1) <= ux:
        s += 1
    if ux - s * s > s:
        s += 1
    return <i128>s


cdef class _FxRun:
    cdef FxCtx ctx
    cdef list events

    def __cinit__(self):
        self.events = []

    cdef i128 acc(self, i128 raw, str op, i128 x, i128 y, int nargs):
        cdef i128 stored
        if self.ctx.acc_min <= raw <= self.ctx.acc_max:
            return raw
        stored = self.ctx.acc_max if raw > self.ctx.acc_max else self.ctx.acc_min
        if nargs == 1:
            operands = (_val(x, self.ctx.frac),)
        else:
            operands = (_val(x, self.ctx.frac), _val(y, self.ctx.frac))
        self.events.append((op, operands, _val(raw, self.ctx.frac),
                            _val(stored, self.ctx.frac), "tmp-expr",
                            self.ctx.sweep, self.ctx.i, self.ctx.j))
        if self.ctx.strict:
            self.ctx.stop = True
        return stored

    cdef i128 store(self, i128 raw, str tag):
        cdef i128 stored
        if self.ctx.raw_min <= raw <= self.ctx.raw_max:
            return raw
        stored = self.ctx.raw_max if raw > self.ctx.raw_max else self.ctx.raw_min
        self.events.append(("store", (_val(raw, self.ctx.frac),), _val(raw, self.ctx.frac),
                            _val(stored, self.ctx.frac), tag,
                            self.ctx.sweep, self.ctx.i, self.ctx.j))
        if self.ctx.strict:
            self.ctx.stop = True
        return stored

    cdef inline i128 add(self, i128 x, i128 y):
        return self.acc(x + y, "add", x, y, 2)

    cdef inline i128 sub(self, i128 x, i128 y):
        return self.acc(x - y, "sub", x, y, 2)

    cdef inline i128 mul(self, i128 x, i128 y):
        return self.acc(_round_shift(x * y, self.ctx.frac), "mul", x, y, 2)

    cdef i128 div(self, i128 x, i128 y) except? -1:
        if y == 0:
            raise _DivideByZero("fixed-point division by zero")
        return self.acc(_div_rne(x * ((<i128>1) << self.ctx.frac), y), "div", x, y, 2)


from .errors import DivideByZero as _DivideByZero


def fixed_evd(cnp.ndarray[cnp.int64_t, ndim=2] A_in, int wl, int iwl, int sweeps,
              bint strict, int guard_bits):
    """Fixed-point sweeps on raw int64 mantissas.

    Requires ``wl + iwl + guard_bits <= 62`` so accumulator values fit in
    int64 and products in 128 bits. Returns ``(A, X, events)`` where
    each event is ``(operation, operands, ideal, stored, variable, sweep, i, j)``.
    With ``strict`` the run stops after the first event.
    """
    if wl + iwl + guard_bits > 62:
        raise ValueError("format too wide for the compiled kernel")
    cdef Py_ssize_t n = A_in.shape[0]
    cdef long long[:, ::1] A = np.ascontiguousarray(A_in, dtype=np.int64).copy()
    cdef int frac = wl - iwl
    cdef i128 one = (<i128>1) << frac
    cdef long long[:, ::1] X = np.eye(n, dtype=np.int64) * (<long long>one)
    cdef _FxRun run = _FxRun()
    cdef int acc_bits = wl + iwl + guard_bits
    run.ctx.frac = frac
    run.ctx.acc_min = -((<i128>1) << (acc_bits - 1))
    run.ctx.acc_max = ((<i128>1) << (acc_bits - 1)) - 1
    run.ctx.raw_min = -((<long long>1) << (wl - 1))
    run.ctx.raw_max = ((<long long>1) << (wl - 1)) - 1
    run.ctx.strict = strict
    run.ctx.stop = False
    cdef Py_ssize_t i, j, k
    cdef int index
    cdef i128 a, b, c, diff, d, r, s, t, cs, sn, ct, tmp, ajk, aik, xkj, sg, absd, q
    for index in range(sweeps):
        for i in range(n):
            for j in range(i + 1, n):
                run.ctx.sweep = index
                run.ctx.i = <int>i
                run.ctx.j = <int>j
                a = run.store(A[i, i], "a")
                b = run.store(A[j, j], "b")
                c = run.store(A[i, j], "c")
                if c == 0:
                    t = 0
                    cs = one
                    sn = 0
                    t = run.store(t, "t")
                    cs = run.store(cs, "cs")
                    sn = run.store(sn, "sn")
                else:
                    diff = run.sub(b, a)
                    d = run.acc(_round_shift(diff, 1), "mul", diff, 0, 1)
                    if diff == 0 or (diff > 0) == (c > 0):
                        sg = one
                    else:
                        sg = -one
                    r = run.mul(sg, c if c >= 0 else -c)
                    absd = d if d >= 0 else -d
                    q = run.acc(_isqrt_rn(c * c + d * d), "hypot", c, d, 2)
                    s = run.add(absd, q)
                    if s == 0:
                        t = sg
                    else:
                        t = run.div(r, s)
                    t = run.store(t, "t")
                    cs = run.store(run.div(one, run.acc(_isqrt_rn(one * one + t * t), "hypot", one, t, 2)), "cs")
                    sn = run.store(run.mul(cs, t), "sn")
                ct = run.mul(c, t)
                A[i, i] = <long long>run.store(run.sub(a, ct), "A")
                A[j, j] = <long long>run.store(run.add(b, ct), "A")
                A[i, j] = 0
                A[j, i] = 0
                for k in range(n):
                    if k == i or k == j:
                        continue
                    tmp = run.store(A[i, k], "tmp")
                    ajk = A[j, k]
                    aik = run.store(run.sub(run.mul(cs, tmp), run.mul(sn, ajk)), "A")
                    ajk = run.store(run.add(run.mul(sn, tmp), run.mul(cs, ajk)), "A")
                    A[i, k] = <long long>aik
                    A[j, k] = <long long>ajk
                    A[k, i] = <long long>aik
                    A[k, j] = <long long>ajk
                for k in range(n):
                    tmp = run.store(X[k, i], "tmp")
                    xkj = X[k, j]
                    X[k, i] = <long long>run.store(run.sub(run.mul(cs, tmp), run.mul(sn, xkj)), "X")
                    X[k, j] = <long long>run.store(run.add(run.mul(sn, tmp), run.mul(cs, xkj)), "X")
                if run.ctx.stop:
                    return np.asarray(A), np.asarray(X), run.events[:1]
    return np.asarray(A), np.asarray(X), run.events
