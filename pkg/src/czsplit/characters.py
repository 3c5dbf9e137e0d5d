"""Multiplicative characters of order q, coset membership and exact character sums.

Cubic character values live in the Eisenstein integers Z[w], w a primitive
cube root of unity; quadratic values are plain ints.  Sums are evaluated by
counting how often each power of the root of unity occurs, so everything
stays in exact integer arithmetic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .gf import FieldElement, FieldError, FieldParams


@dataclass(frozen=True)
class Eisenstein:
    """``a + b*w`` with ``w**2 = -1 - w``."""

    a: int
    b: int = 0

    @classmethod
    def zeta(cls, k: int) -> "Eisenstein":
        return _ZETA_POWERS[k % 3]

    @staticmethod
    def _coerce(x) -> "Eisenstein":
        if isinstance(x, Eisenstein):
            return x
        if isinstance(x, int):
            return Eisenstein(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Eisenstein(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Eisenstein(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Eisenstein(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        return Eisenstein(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Eisenstein":
        if e < 0:
            raise ValueError("negative powers are not integral in general")
        out, base = Eisenstein(1, 0), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def conj(self) -> "Eisenstein":
        return Eisenstein(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def divide_exact(self, k: int) -> "Eisenstein":
        if self.a % k or self.b % k:
            raise ValueError(f"{self} is not divisible by {k}")
        return Eisenstein(self.a // k, self.b // k)

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}*w"

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}

    @classmethod
    def parse(cls, text: str) -> "Eisenstein":
        s = text.replace(" ", "")
        if s.endswith("*w"):
            head = s[:-2]
            for i in range(len(head) - 1, 0, -1):
                if head[i] in "+-":
                    return cls(int(head[:i]), int(head[i:]))
            return cls(0, int(head))
        return cls(int(s), 0)


_ZETA_POWERS = (Eisenstein(1, 0), Eisenstein(0, 1), Eisenstein(-1, -1))


@dataclass(frozen=True)
class CosetStructure:
    """The q cosets of the subgroup of q-th powers in GF(p^m)*.

    Coset h is ``alpha**h * A_0``; ``omega = alpha**ell`` is the in-field
    primitive q-th root of unity, and ``x**ell == omega**h`` for x in coset h.
    """

    field: FieldParams
    q: int

    def __post_init__(self) -> None:
        n1 = self.field.order - 1
        if self.q < 2 or n1 % self.q:
            raise FieldError(f"q={self.q} does not divide |{self.field.spec}*| = {n1}")

    @property
    def ell(self) -> int:
        return (self.field.order - 1) // self.q

    @cached_property
    def omega(self) -> int:
        return self.field.pow(self.field.alpha, self.ell)

    @cached_property
    def roots_of_unity(self) -> tuple[int, ...]:
        """``omega**h`` for h = 0..q-1."""
        out, w = [], 1
        for _ in range(self.q):
            out.append(w)
            w = self.field.mul(w, self.omega)
        return tuple(out)

    @cached_property
    def _root_index(self) -> dict[int, int]:
        return {w: h for h, w in enumerate(self.roots_of_unity)}

    def index(self, x: int) -> int | None:
        """Coset of encoding ``x`` by one exponentiation; None for zero."""
        if x == 0:
            return None
        return self._root_index[self.field.pow(x, self.ell)]

    @cached_property
    def table(self) -> np.ndarray:
        """Coset index per encoding (``-1`` at zero), for vectorised sweeps."""
        t = self.field.tables
        if t is not None:
            return t.coset_table(self.q)
        out = np.full(self.field.order, -1, dtype=np.int32)
        for x in range(1, self.field.order):
            out[x] = self.index(x)
        return out

    @cached_property
    def members(self) -> tuple[tuple[int, ...], ...]:
        """Encodings in each coset, sorted."""
        tab = self.table
        return tuple(tuple(np.flatnonzero(tab == h).tolist()) for h in range(self.q))


def make_cosets(fld: FieldParams, q: int | None = None) -> CosetStructure:
    """Cosets for splitting: q defaults to 3 in characteristic 2 and 2 otherwise."""
    if q is None:
        q = 3 if fld.p == 2 else 2
    return CosetStructure(fld, q)


def _value(x: FieldElement | int, cs: CosetStructure) -> int:
    if isinstance(x, FieldElement):
        if x.field != cs.field:
            raise FieldError(f"field mismatch: {x.field.spec} vs {cs.field.spec}")
        return x.value
    return x


def coset_index(x: FieldElement | int, cs: CosetStructure) -> int | None:
    return cs.index(_value(x, cs))


def chi(x: FieldElement | int, cs: CosetStructure) -> int | None:
    """Character of order q as an exponent h (value zeta_q**h); None at zero."""
    return coset_index(x, cs)


def chi3(x: FieldElement | int, cs: CosetStructure) -> Eisenstein:
    if cs.q != 3:
        raise ValueError("chi3 needs a q=3 coset structure")
    h = coset_index(x, cs)
    return Eisenstein(0, 0) if h is None else Eisenstein.zeta(h)


def chi2(x: FieldElement | int, cs: CosetStructure) -> int:
    if cs.q != 2:
        raise ValueError("chi2 needs a q=2 coset structure")
    h = coset_index(x, cs)
    return 0 if h is None else (1, -1)[h]


def conj(v: Eisenstein | int) -> Eisenstein | int:
    return v.conj() if isinstance(v, Eisenstein) else v


def _from_counts(counts: Counter, q: int) -> Eisenstein | int:
    """Sum of counts[k] * zeta_q**k for q in {2, 3}."""
    if q == 2:
        return counts[0] - counts[1]
    if q == 3:
        return counts[0] * _ZETA_POWERS[0] + counts[1] * _ZETA_POWERS[1] + counts[2] * _ZETA_POWERS[2]
    raise ValueError("exact sums are only represented for q in {2, 3}")


def _shift(cs: CosetStructure, beta: int) -> np.ndarray:
    """Encodings of x + beta for every encoding x."""
    fld = cs.field
    xs = np.arange(fld.order, dtype=np.int64)
    if fld.tables is not None and fld.tables.kind != 3:
        return fld.tables.add_arrays(xs, np.int64(beta))
    return np.array([fld.add(x, beta) for x in range(fld.order)], dtype=np.int64)


def total_sum(cs: CosetStructure) -> Eisenstein | int:
    """Sum of chi(x) over the whole field."""
    tab = cs.table
    counts = Counter(int(h) for h in tab if h >= 0)
    return _from_counts(counts, cs.q)


def pair_sum(beta: FieldElement | int, cs: CosetStructure) -> Eisenstein | int:
    """Sum over x of chi(x) * conj(chi(x + beta)), beta nonzero."""
    b = _value(beta, cs)
    if b == 0:
        raise ValueError("pair_sum needs beta != 0")
    tab = cs.table.astype(np.int64)
    h1, h2 = tab, tab[_shift(cs, b)]
    live = (h1 >= 0) & (h2 >= 0)
    ks = (h1[live] - h2[live]) % cs.q
    return _from_counts(Counter(ks.tolist()), cs.q)


def jacobi_like_sum(beta: int, cs: CosetStructure) -> Eisenstein | int:
    """Sum over x of chi(x) * chi(x + beta)."""
    tab = cs.table.astype(np.int64)
    h1, h2 = tab, tab[_shift(cs, beta)]
    live = (h1 >= 0) & (h2 >= 0)
    ks = (h1[live] + h2[live]) % cs.q
    return _from_counts(Counter(ks.tolist()), cs.q)


def gauss_sum_cubic(cs: CosetStructure) -> Eisenstein:
    """Sum of chi3(x) * chi3(x + 1) over GF(2^m), m even."""
    fld = cs.field
    if fld.p != 2 or fld.m % 2 or cs.q != 3:
        raise ValueError("the cubic Gauss sum needs GF(2^m) with m even and q=3")
    return jacobi_like_sum(1, cs)


def indicator(x: FieldElement | int, h: int, cs: CosetStructure) -> int:
    """1 if x lies in coset h, else 0."""
    k = coset_index(x, cs)
    if k is None:
        raise ValueError("indicator is defined for nonzero x only")
    return int(k == h % cs.q)


def indicator_by_characters(x: FieldElement | int, h: int, cs: CosetStructure) -> Fraction:
    """The same indicator assembled from character values.

    q=3: (1 + w^{2h} chi3(x) + w^h conj(chi3(x))) / 3;
    q=2: (1 + (-1)^h chi2(x)) / 2.
    """
    if _value(x, cs) == 0:
        raise ValueError("indicator is defined for nonzero x only")
    if cs.q == 3:
        c = chi3(x, cs)
        num = 1 + Eisenstein.zeta(2 * h) * c + Eisenstein.zeta(h) * c.conj()
        if not num.is_rational():
            raise ArithmeticError("indicator numerator is not rational")
        return Fraction(num.a, 3)
    if cs.q == 2:
        return Fraction(1 + (-1) ** h * chi2(x, cs), 2)
    raise ValueError("character form of the indicator is defined for q in {2, 3}")
