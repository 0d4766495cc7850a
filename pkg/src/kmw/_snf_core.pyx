# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""64-bit fast path for the integer normal-form kernels.

Mirrors ``_snf_py`` operation for operation -- same pivot rule, same
reduction order -- so both backends produce identical output.  All
arithmetic runs through 128-bit intermediates; any value leaving the
64-bit comfort zone raises ``Overflow`` and the caller falls back to the
arbitrary-precision kernels.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

cdef extern from *:
    ctypedef long long i128 "__int128"

ctypedef long long i64


class Overflow(Exception):
    """An intermediate left the 64-bit range; use the pure kernels."""


cdef i64 BOUND = (<i64> 1) << 62


cdef inline i64 _chk(i128 x) except? -1:
    if x > BOUND or x < -BOUND:
        raise Overflow()
    return <i64> x


cdef inline i64 _nearest_quo(i64 a, i64 b):
    cdef i64 q = a / b
    cdef i64 r = a - q * b
    if r != 0 and ((a < 0) != (b < 0)):
        q -= 1
        r = a - q * b
    cdef i64 ar = -r if r < 0 else r
    cdef i64 ab = -b if b < 0 else b
    if 2 * ar > ab:
        if (r > 0) == (b > 0):
            q += 1
        else:
            q -= 1
    return q


cdef i64* _to_c(object seq, Py_ssize_t n) except NULL:
    cdef i64* out = <i64*> PyMem_Malloc(n * sizeof(i64) if n else sizeof(i64))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef object x
    try:
        for i in range(n):
            x = seq[i]
            if x > BOUND or x < -BOUND:
                raise Overflow()
            out[i] = x
    except BaseException:
        PyMem_Free(out)
        raise
    return out


cdef list _to_list(i64* buf, Py_ssize_t n):
    cdef list out = [0] * n
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = buf[i]
    return out


cdef i64* _ident(Py_ssize_t n) except NULL:
    cdef i64* m = <i64*> PyMem_Malloc(n * n * sizeof(i64) if n else sizeof(i64))
    if m == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n * n):
        m[i] = 0
    for i in range(n):
        m[i * n + i] = 1
    return m


cdef void _swap_rows(i64* m, Py_ssize_t w, Py_ssize_t i, Py_ssize_t j) noexcept:
    cdef Py_ssize_t c
    cdef i64 tmp
    for c in range(w):
        tmp = m[i * w + c]
        m[i * w + c] = m[j * w + c]
        m[j * w + c] = tmp


cdef int _add_row(i64* m, Py_ssize_t w, Py_ssize_t i, Py_ssize_t j, i64 c) except -1:
    # row_i += c * row_j
    cdef Py_ssize_t k
    for k in range(w):
        m[i * w + k] = _chk(<i128> m[i * w + k] + <i128> c * <i128> m[j * w + k])
    return 0


cdef void _swap_cols(i64* m, Py_ssize_t h, Py_ssize_t w, Py_ssize_t i, Py_ssize_t j) noexcept:
    cdef Py_ssize_t r
    cdef i64 tmp
    for r in range(h):
        tmp = m[r * w + i]
        m[r * w + i] = m[r * w + j]
        m[r * w + j] = tmp


cdef int _add_col(i64* m, Py_ssize_t h, Py_ssize_t w, Py_ssize_t i, Py_ssize_t j, i64 c) except -1:
    # col_i += c * col_j
    cdef Py_ssize_t r
    for r in range(h):
        m[r * w + i] = _chk(<i128> m[r * w + i] + <i128> c * <i128> m[r * w + j])
    return 0


def snf_kernel(a_in, Py_ssize_t rows, Py_ssize_t cols, bint want_u=True, bint want_v=True):
    cdef i64* a = _to_c(a_in, rows * cols)
    cdef i64* u = NULL
    cdef i64* v = NULL
    cdef Py_ssize_t limit = rows if rows < cols else cols
    cdef Py_ssize_t t, i, j, best_i, best_j, base
    cdef i64 x, ax, best_abs, p, q
    cdef bint restart, bad
    try:
        if want_u:
            u = _ident(rows)
        if want_v:
            v = _ident(cols)
        t = 0
        while t < limit:
            best_abs = 0
            best_i = -1
            best_j = -1
            for i in range(t, rows):
                base = i * cols
                for j in range(t, cols):
                    x = a[base + j]
                    if x != 0:
                        ax = -x if x < 0 else x
                        if best_i < 0 or ax < best_abs:
                            best_abs = ax
                            best_i = i
                            best_j = j
                            if ax == 1:
                                break
                if best_abs == 1 and best_i >= 0:
                    break
            if best_i < 0:
                break
            if best_i != t:
                _swap_rows(a, cols, best_i, t)
                if u != NULL:
                    _swap_rows(u, rows, best_i, t)
            if best_j != t:
                _swap_cols(a, rows, cols, best_j, t)
                if v != NULL:
                    _swap_cols(v, cols, cols, best_j, t)

            while True:
                p = a[t * cols + t]
                restart = False
                for i in range(t + 1, rows):
                    x = a[i * cols + t]
                    if x != 0:
                        q = _nearest_quo(x, p)
                        if q != 0:
                            _add_row(a, cols, i, t, -q)
                            if u != NULL:
                                _add_row(u, rows, i, t, -q)
                        if a[i * cols + t] != 0:
                            _swap_rows(a, cols, i, t)
                            if u != NULL:
                                _swap_rows(u, rows, i, t)
                            restart = True
                            break
                if restart:
                    continue
                for j in range(t + 1, cols):
                    x = a[t * cols + j]
                    if x != 0:
                        q = _nearest_quo(x, p)
                        if q != 0:
                            _add_col(a, rows, cols, j, t, -q)
                            if v != NULL:
                                _add_col(v, cols, cols, j, t, -q)
                        if a[t * cols + j] != 0:
                            _swap_cols(a, rows, cols, j, t)
                            if v != NULL:
                                _swap_cols(v, cols, cols, j, t)
                            restart = True
                            break
                if restart:
                    continue
                p = a[t * cols + t]
                bad = False
                for i in range(t + 1, rows):
                    base = i * cols
                    for j in range(t + 1, cols):
                        if a[base + j] % p != 0:
                            _add_row(a, cols, t, i, 1)
                            if u != NULL:
                                _add_row(u, rows, t, i, 1)
                            bad = True
                            break
                    if bad:
                        break
                if bad:
                    continue
                break
            t += 1

        for i in range(limit):
            if a[i * cols + i] < 0:
                a[i * cols + i] = -a[i * cols + i]
                if u != NULL:
                    for j in range(rows):
                        u[i * rows + j] = -u[i * rows + j]

        return (
            _to_list(a, rows * cols),
            _to_list(u, rows * rows) if u != NULL else None,
            _to_list(v, cols * cols) if v != NULL else None,
        )
    finally:
        PyMem_Free(a)
        if u != NULL:
            PyMem_Free(u)
        if v != NULL:
            PyMem_Free(v)


def hnf_kernel(a_in, Py_ssize_t rows, Py_ssize_t cols, bint want_u=True):
    cdef i64* a = _to_c(a_in, rows * cols)
    cdef i64* u = NULL
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t i, j, best_i
    cdef i64 x, ax, best_abs, p, q
    cdef bint clean
    try:
        if want_u:
            u = _ident(rows)
        for j in range(cols):
            if r == rows:
                break
            while True:
                best_abs = 0
                best_i = -1
                for i in range(r, rows):
                    x = a[i * cols + j]
                    if x != 0:
                        ax = -x if x < 0 else x
                        if best_i < 0 or ax < best_abs:
                            best_abs = ax
                            best_i = i
                            if ax == 1:
                                break
                if best_i < 0:
                    break
                if best_i != r:
                    _swap_rows(a, cols, best_i, r)
                    if u != NULL:
                        _swap_rows(u, rows, best_i, r)
                p = a[r * cols + j]
                clean = True
                for i in range(r + 1, rows):
                    x = a[i * cols + j]
                    if x != 0:
                        q = _nearest_quo(x, p)
                        _add_row(a, cols, i, r, -q)
                        if u != NULL:
                            _add_row(u, rows, i, r, -q)
                        if a[i * cols + j] != 0:
                            clean = False
                if clean:
                    break
            if best_i < 0:
                continue
            if a[r * cols + j] < 0:
                for i in range(cols):
                    a[r * cols + i] = -a[r * cols + i]
                if u != NULL:
                    for i in range(rows):
                        u[r * rows + i] = -u[r * rows + i]
            p = a[r * cols + j]
            for i in range(r):
                x = a[i * cols + j]
                q = x / p
                if x - q * p != 0 and ((x < 0) != (p < 0)):
                    q -= 1  # floor
                if q != 0:
                    _add_row(a, cols, i, r, -q)
                    if u != NULL:
                        _add_row(u, rows, i, r, -q)
            r += 1
        return (
            _to_list(a, rows * cols),
            _to_list(u, rows * rows) if u != NULL else None,
            r,
        )
    finally:
        PyMem_Free(a)
        if u != NULL:
            PyMem_Free(u)
