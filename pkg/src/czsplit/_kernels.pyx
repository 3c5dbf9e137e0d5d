# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels over table-backed fields.

Same API and results as ``_kernels_py``.  Needs the exp/log tables of the
field, and an addition table when the field is neither prime nor of
characteristic 2.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from libc.string cimport memset, memcpy

import numpy as np

BACKEND = "cython"


cdef int* _alloc(Py_ssize_t n) except NULL:
    cdef int* buf = <int*> PyMem_Malloc((n if n > 0 else 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    return buf


cdef int* _from_list(object a, Py_ssize_t cap) except NULL:
    cdef Py_ssize_t i, n = len(a)
    cdef int* buf = _alloc(cap if cap > n else n)
    for i in range(n):
        buf[i] = a[i]
    return buf


cdef list _to_list(const int* buf, Py_ssize_t n):
    return [buf[i] for i in range(n)]


cdef inline Py_ssize_t _trim(const int* a, Py_ssize_t n) noexcept nogil:
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return n


cdef class Kernel:
    cdef public object field
    cdef object _keep
    cdef int kind, p, n, n1
    cdef const int* exp
    cdef const int* log
    cdef const int* neg
    cdef const int* addt
    cdef const int[::1] _exp_mv
    cdef const int[::1] _log_mv
    cdef const int[::1] _neg_mv
    cdef const int[::1] _add_mv

    def __init__(self, fld):
        t = fld.tables
        if t is None or t.kind not in (0, 1, 2):
            raise ValueError("compiled kernels need exp/log and addition tables")
        self.field = fld
        self.kind = t.kind
        self.p = fld.p
        self.n = t.n
        self.n1 = t.n - 1
        self._exp_mv = np.ascontiguousarray(t.exp, dtype=np.int32)
        self._log_mv = np.ascontiguousarray(t.log, dtype=np.int32)
        self._neg_mv = np.ascontiguousarray(t.neg, dtype=np.int32)
        self.exp = &self._exp_mv[0]
        self.log = &self._log_mv[0]
        self.neg = &self._neg_mv[0]
        if t.kind == 2:
            self._add_mv = np.ascontiguousarray(t.add, dtype=np.int32).reshape(-1)
            self.addt = &self._add_mv[0]
        else:
            self.addt = NULL

    cdef inline int fadd(self, int a, int b) noexcept nogil:
        cdef int r
        if self.kind == 0:
            return a ^ b
        if self.kind == 1:
            r = a + b
            return r - self.p if r >= self.p else r
        return self.addt[a * self.n + b]

    cdef inline int fneg(self, int a) noexcept nogil:
        if self.kind == 0:
            return a
        return self.neg[a]

    cdef inline int fsub(self, int a, int b) noexcept nogil:
        return self.fadd(a, self.fneg(b))

    cdef inline int fmul(self, int a, int b) noexcept nogil:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    cdef inline int finv(self, int a) noexcept nogil:
        return self.exp[self.n1 - self.log[a]]

    cdef Py_ssize_t _mul(self, const int* a, Py_ssize_t la, const int* b, Py_ssize_t lb,
                         int* out) noexcept nogil:
        cdef Py_ssize_t i, j, lo
        cdef int x
        if la == 0 or lb == 0:
            return 0
        lo = la + lb - 1
        memset(out, 0, lo * sizeof(int))
        for i in range(la):
            x = a[i]
            if x == 0:
                continue
            for j in range(lb):
                if b[j] != 0:
                    out[i + j] = self.fadd(out[i + j], self.fmul(x, b[j]))
        return _trim(out, lo)

    cdef Py_ssize_t _divmod(self, int* r, Py_ssize_t lr, const int* f, Py_ssize_t lf,
                            int* q) noexcept nogil:
        """Reduce r in place modulo f; quotient into q when q is not NULL."""
        cdef Py_ssize_t i, k, base, df = lf - 1
        cdef int c, lead_inv = self.finv(f[df])
        if q != NULL and lr > df:
            memset(q, 0, (lr - df) * sizeof(int))
        i = lr - 1
        while i >= df:
            c = r[i]
            if c != 0:
                c = self.fmul(c, lead_inv)
                base = i - df
                if q != NULL:
                    q[base] = c
                for k in range(lf):
                    if f[k] != 0:
                        r[base + k] = self.fsub(r[base + k], self.fmul(c, f[k]))
            i -= 1
        if lr > df:
            lr = df
        return _trim(r, lr)

    def polymul(self, a, b):
        cdef Py_ssize_t la = len(a), lb = len(b), lo
        if la == 0 or lb == 0:
            return []
        cdef int* ba = _from_list(a, 0)
        cdef int* bb = _from_list(b, 0)
        cdef int* out = _alloc(la + lb - 1)
        try:
            lo = self._mul(ba, la, bb, lb, out)
            return _to_list(out, lo)
        finally:
            PyMem_Free(ba)
            PyMem_Free(bb)
            PyMem_Free(out)

    def polydivmod(self, a, b):
        cdef Py_ssize_t la = len(a), lb = len(b), lq, lr
        if lb == 0:
            raise ZeroDivisionError("polynomial division by zero")
        if la < lb:
            return [], list(a)
        cdef int* ra = _from_list(a, 0)
        cdef int* bb = _from_list(b, 0)
        cdef int* q = _alloc(la - lb + 1)
        try:
            lr = self._divmod(ra, la, bb, lb, q)
            lq = _trim(q, la - lb + 1)
            return _to_list(q, lq), _to_list(ra, lr)
        finally:
            PyMem_Free(ra)
            PyMem_Free(bb)
            PyMem_Free(q)

    def polyrem(self, a, b):
        cdef Py_ssize_t la = len(a), lb = len(b), lr
        if lb == 0:
            raise ZeroDivisionError("polynomial division by zero")
        if la < lb:
            return list(a)
        cdef int* ra = _from_list(a, 0)
        cdef int* bb = _from_list(b, 0)
        try:
            lr = self._divmod(ra, la, bb, lb, NULL)
            return _to_list(ra, lr)
        finally:
            PyMem_Free(ra)
            PyMem_Free(bb)

    def polymulmod(self, a, b, f):
        cdef Py_ssize_t la = len(a), lb = len(b), lf = len(f), lo
        if lf == 0:
            raise ZeroDivisionError("polynomial division by zero")
        if la == 0 or lb == 0:
            return []
        cdef int* ba = _from_list(a, 0)
        cdef int* bb = _from_list(b, 0)
        cdef int* bf = _from_list(f, 0)
        cdef int* out = _alloc(la + lb - 1)
        try:
            lo = self._mul(ba, la, bb, lb, out)
            lo = self._divmod(out, lo, bf, lf, NULL)
            return _to_list(out, lo)
        finally:
            PyMem_Free(ba)
            PyMem_Free(bb)
            PyMem_Free(bf)
            PyMem_Free(out)

    def polypowmod(self, a, e, f):
        cdef Py_ssize_t lf = len(f), la = len(a), lb, lres, lt, i, nbits
        if lf < 2:
            raise ValueError("modulus must have degree >= 1")
        bits = bin(e)[2:].encode()
        cdef const char* cb = bits
        nbits = len(bits)
        cdef int* bf = _from_list(f, 0)
        cdef int* base = _from_list(a, 2 * lf)
        cdef int* res = _alloc(2 * lf)
        cdef int* tmp = _alloc(2 * lf)
        cdef int* sw
        try:
            with nogil:
                lb = self._divmod(base, la, bf, lf, NULL)
                res[0] = 1
                lres = 1
                for i in range(nbits):
                    lt = self._mul(res, lres, res, lres, tmp)
                    lres = self._divmod(tmp, lt, bf, lf, NULL)
                    sw = res; res = tmp; tmp = sw
                    if cb[i] == 49:  # '1'
                        lt = self._mul(res, lres, base, lb, tmp)
                        lres = self._divmod(tmp, lt, bf, lf, NULL)
                        sw = res; res = tmp; tmp = sw
            return _to_list(res, lres)
        finally:
            PyMem_Free(bf)
            PyMem_Free(base)
            PyMem_Free(res)
            PyMem_Free(tmp)

    def polygcd(self, a, b):
        cdef Py_ssize_t la = len(a), lb = len(b), lt, i
        cdef int* ba = _from_list(a, 0)
        cdef int* bb = _from_list(b, 0)
        cdef int* sw
        cdef int c
        try:
            with nogil:
                la = _trim(ba, la)
                lb = _trim(bb, lb)
                while lb > 0:
                    la = self._divmod(ba, la, bb, lb, NULL)
                    sw = ba; ba = bb; bb = sw
                    lt = la; la = lb; lb = lt
                if la > 0:
                    c = self.finv(ba[la - 1])
                    for i in range(la):
                        ba[i] = self.fmul(c, ba[i])
            return _to_list(ba, la)
        finally:
            PyMem_Free(ba)
            PyMem_Free(bb)

    def polyeval(self, a, int x):
        cdef int acc = 0
        cdef Py_ssize_t i
        for i in range(len(a) - 1, -1, -1):
            acc = self.fadd(self.fmul(acc, x), <int> a[i])
        return acc

    def count_common_coset(self, tuples, betas, coset):
        cdef const int[:, ::1] tv = np.ascontiguousarray(tuples, dtype=np.int32)
        cdef const int[::1] bv = np.ascontiguousarray(betas, dtype=np.int32)
        cdef const int[::1] cv = np.ascontiguousarray(coset, dtype=np.int32)
        cdef Py_ssize_t rows = tv.shape[0], t = tv.shape[1], nb = bv.shape[0]
        out = np.zeros(rows, dtype=np.int64)
        cdef long long[::1] ov = out
        cdef Py_ssize_t r, i, k
        cdef int h, beta, ok
        cdef long long cnt
        if rows == 0 or t == 0:
            return out
        with nogil:
            for r in range(rows):
                cnt = 0
                for k in range(nb):
                    beta = bv[k]
                    h = cv[self.fadd(tv[r, 0], beta)]
                    if h < 0:
                        continue
                    ok = 1
                    for i in range(1, t):
                        if cv[self.fadd(tv[r, i], beta)] != h:
                            ok = 0
                            break
                    cnt += ok
                ov[r] = cnt
        return out
