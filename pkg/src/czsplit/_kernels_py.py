"""Pure-Python kernels; the fallback when the compiled module is missing.

Polynomials are plain lists of field encodings, lowest degree first, with
no trailing zeros.  Every routine here has a twin in ``_kernels.pyx`` with
the same signature and results.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


class Kernel:
    def __init__(self, fld) -> None:
        self.field = fld
        self.add = fld.add
        self.sub = fld.sub
        self.mul = fld.mul
        self.inv = fld.inv
        self.tables = fld.tables

    def polymul(self, a, b):
        if not a or not b:
            return []
        add, mul = self.add, self.mul
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return _trim(out)

    def polydivmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        db = len(b) - 1
        r = list(a)
        if len(r) <= db:
            return [], _trim(r)
        sub, mul = self.sub, self.mul
        lead_inv = self.inv(b[-1])
        q = [0] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c:
                c = mul(c, lead_inv)
                q[i - db] = c
                base = i - db
                for k in range(db + 1):
                    if b[k]:
                        r[base + k] = sub(r[base + k], mul(c, b[k]))
        del r[db:]
        return _trim(q), _trim(r)

    def polyrem(self, a, b):
        return self.polydivmod(a, b)[1]

    def polymulmod(self, a, b, f):
        return self.polyrem(self.polymul(a, b), f)

    def polypowmod(self, a, e, f):
        if len(f) < 2:
            raise ValueError("modulus must have degree >= 1")
        base = self.polyrem(a, f)
        result = [1]
        for bit in bin(e)[2:]:
            result = self.polymulmod(result, result, f)
            if bit == "1":
                result = self.polymulmod(result, base, f)
        return result

    def polygcd(self, a, b):
        a, b = _trim(list(a)), _trim(list(b))
        while b:
            a, b = b, self.polyrem(a, b)
        if not a:
            return a
        c = self.inv(a[-1])
        return [self.mul(c, x) for x in a]

    def polyeval(self, a, x):
        add, mul = self.add, self.mul
        acc = 0
        for c in reversed(a):
            acc = add(mul(acc, x), c)
        return acc

    def count_common_coset(self, tuples, betas, coset):
        """For each row of ``tuples`` count betas putting every row+beta in one coset.

        ``coset`` maps an encoding to its coset index, ``-1`` for zero.
        """
        tuples = np.ascontiguousarray(tuples, dtype=np.int64)
        betas = np.ascontiguousarray(betas, dtype=np.int64)
        coset = np.asarray(coset)
        rows, t = tuples.shape
        out = np.zeros(rows, dtype=np.int64)
        if rows == 0 or len(betas) == 0:
            return out
        tab = self.tables
        chunk = max(1, (1 << 22) // max(1, t * len(betas)))
        for start in range(0, rows, chunk):
            block = tuples[start : start + chunk]
            if tab is not None and tab.kind != 3:
                shifted = tab.add_arrays(block[:, :, None], betas[None, None, :])
            else:
                add = self.add
                shifted = np.array(
                    [[[add(int(r), int(b)) for b in betas] for r in row] for row in block],
                    dtype=np.int64,
                ).reshape(len(block), t, len(betas))
            h = coset[shifted]
            ok = (h[:, 0, :] >= 0) & np.all(h == h[:, :1, :], axis=1)
            out[start : start + len(block)] = ok.sum(axis=1)
        return out
