"""Prime fields and extension fields GF(p^m).

Elements are handled internally as integers: the base-p digits of the
integer are the power-basis coordinates, lowest degree first.  So in
GF(2^4) the integer 3 is ``1 + x`` and in GF(3^2) the integer 5 is
``2 + x``.  :class:`FieldElement` wraps such an integer together with its
field for callers who want operator syntax; the polynomial and oracle
layers work on the raw integers.

Fields up to ``TABLE_LIMIT`` elements get exp/log tables at construction
(the accelerator used by the sweeps and the compiled kernels).  The dense
power-basis arithmetic is always available through ``dense_mul`` and is
used to build and cross-check the tables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

MAX_FIELD_SIZE = 1 << 24
TABLE_LIMIT = 1 << 16
ADD_TABLE_LIMIT = 1 << 12

# kernel kinds: how addition of encodings works
KIND_CHAR2 = 0
KIND_PRIME = 1
KIND_TABLE = 2
KIND_DENSE = 3


class FieldError(ValueError):
    """Invalid field parameters or mixing elements of different fields."""


class FieldSizeError(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factor_int(n: int) -> tuple[int, ...]:
    """Prime factors of ``n`` with multiplicity, by trial division."""
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    a = 0
    for d in reversed(ds):
        a = a * p + d
    return a


class FieldTables:
    """Exp/log tables plus whatever addition needs for fast kernels."""

    def __init__(self, fld: "FieldParams") -> None:
        n = fld.order
        self.n = n
        self.p = fld.p
        exp = np.zeros(2 * (n - 1) if n > 2 else 2, dtype=np.int32)
        log = np.full(n, -1, dtype=np.int32)
        x = 1
        for k in range(n - 1):
            exp[k] = x
            if log[x] != -1:
                raise FieldError("alpha is not primitive")
            log[x] = k
            x = fld.dense_mul(x, fld.alpha)
        if x != 1:
            raise FieldError("alpha is not primitive")
        if n > 2:
            exp[n - 1:] = exp[: n - 1]
        else:
            exp[1] = 1
        self.exp = exp
        self.log = log
        self.exp_list = exp.tolist()
        self.log_list = log.tolist()

        idx = np.arange(n, dtype=np.int64)
        if fld.p == 2:
            self.kind = KIND_CHAR2
            self.neg = idx.astype(np.int32)
            self.add = None
        elif fld.m == 1:
            self.kind = KIND_PRIME
            self.neg = ((-idx) % fld.p).astype(np.int32)
            self.add = None
        else:
            digits = np.stack([(idx // fld.p**i) % fld.p for i in range(fld.m)])
            weights = np.array([fld.p**i for i in range(fld.m)], dtype=np.int64)
            self.neg = (((-digits) % fld.p).T @ weights).astype(np.int32)
            if n <= ADD_TABLE_LIMIT:
                self.kind = KIND_TABLE
                tab = np.zeros((n, n), dtype=np.int32)
                for a in range(n):
                    s = (digits + digits[:, a : a + 1]) % fld.p
                    tab[a] = (s.T @ weights).astype(np.int32)
                self.add = tab
            else:
                self.kind = KIND_DENSE
                self.add = None
        self.neg_list = self.neg.tolist()

    def coset_table(self, q: int) -> np.ndarray:
        """``log(x) mod q`` for every encoding, ``-1`` at zero."""
        out = np.where(self.log >= 0, self.log % q, -1)
        return out.astype(np.int8 if q < 128 else np.int32)

    def add_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise field addition of broadcastable encoding arrays."""
        if self.kind == KIND_CHAR2:
            return np.bitwise_xor(a, b)
        if self.kind == KIND_PRIME:
            return (a + b) % self.p
        if self.add is not None:
            return self.add[a, b]
        raise FieldError("vectorised addition needs an addition table")


@dataclass(frozen=True, eq=False)
class FieldParams:
    """GF(p^m) with a fixed modulus and primitive element.

    ``modulus`` holds all m+1 coefficients, low to high (so the last one
    is 1); it is ``None`` for prime fields.  ``alpha`` is the integer
    encoding of the primitive element.
    """

    p: int
    m: int
    modulus: tuple[int, ...] | None
    alpha: int
    order_factorization: tuple[int, ...]
    use_tables: bool = dc_field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self.m == 1:
            if self.p == 2:
                dense = lambda a, b: a & b
            else:
                p = self.p
                dense = lambda a, b: a * b % p
        elif self.p == 2:
            dense = _char2_mul(self.m, _undigits(self.modulus, 2))
        else:
            dense = _generic_mul(self.p, self.m, self.modulus)
        object.__setattr__(self, "dense_mul", dense)

        if self.p == 2:
            add = int.__xor__
            neg = lambda a: a
            sub = int.__xor__
        elif self.m == 1:
            p = self.p
            add = lambda a, b: (a + b) % p
            neg = lambda a: (p - a) % p
            sub = lambda a, b: (a - b) % p
        else:
            add, neg, sub = _generic_add(self.p, self.m)
        tables = None
        if self.use_tables and self.order <= TABLE_LIMIT:
            tables = FieldTables(self)
            if tables.kind == KIND_TABLE:
                rows = tables.add.tolist()
                negl = tables.neg_list
                add = lambda a, b: rows[a][b]
                neg = negl.__getitem__
                sub = lambda a, b: rows[a][negl[b]]
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "neg", neg)
        object.__setattr__(self, "sub", sub)
        if tables is not None:
            exp, log, n1 = tables.exp_list, tables.log_list, self.order - 1

            def mul(a: int, b: int) -> int:
                if a == 0 or b == 0:
                    return 0
                return exp[log[a] + log[b]]

            def inv(a: int) -> int:
                if a == 0:
                    raise ZeroDivisionError("inverse of zero")
                return exp[n1 - log[a]]

            object.__setattr__(self, "mul", mul)
            object.__setattr__(self, "inv", inv)
        else:
            object.__setattr__(self, "mul", dense)
            n2 = self.order - 2

            def inv(a: int) -> int:
                if a == 0:
                    raise ZeroDivisionError("inverse of zero")
                return self.pow(a, n2)

            object.__setattr__(self, "inv", inv)

    # identity is (p, m, modulus); alpha and tables are derived
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldParams):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"FieldParams({self.spec})"

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def spec(self) -> str:
        """Field spec string; the modulus is spelled out when not the default."""
        base = f"gf({self.p},{self.m})"
        if self.m == 1 or self.modulus == default_modulus(self.p, self.m):
            return base
        return f"gf({self.p},{self.m};modulus={','.join(map(str, self.modulus))})"

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        if self.tables is not None:
            if a == 0:
                return 1 if e == 0 else 0
            t = self.tables
            return t.exp_list[(t.log_list[a] * e) % (self.order - 1)]
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return r

    def frobenius(self, a: int, k: int = 1) -> int:
        """``a ** (p ** k)``."""
        return self.pow(a, self.p ** (k % self.m))

    def digits(self, a: int) -> list[int]:
        return _digits(a, self.p, self.m)

    def from_digits(self, ds: Sequence[int]) -> int:
        return _undigits(ds, self.p)

    def __call__(self, n: int) -> "FieldElement":
        return decode(n, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, self.alpha)

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.order):
            yield FieldElement(self, i)

    @cached_property
    def kernel(self):
        from .kernels import make_kernel

        return make_kernel(self)


def _char2_mul(m: int, mod: int):
    top = 1 << m

    def mul(a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    return mul


def _generic_mul(p: int, m: int, modulus: Sequence[int]):
    red = [(-c) % p for c in modulus[:m]]  # x^m == sum red[i] x^i

    def mul(a: int, b: int) -> int:
        da, db = _digits(a, p, m), _digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(m):
                    prod[k - m + i] += c * red[i]
        return _undigits([c % p for c in prod[:m]], p)

    return mul


def _generic_add(p: int, m: int):
    def add(a: int, b: int) -> int:
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, m), _digits(b, p, m))], p)

    def neg(a: int) -> int:
        return _undigits([(-x) % p for x in _digits(a, p, m)], p)

    def sub(a: int, b: int) -> int:
        return _undigits([(x - y) % p for x, y in zip(_digits(a, p, m), _digits(b, p, m))], p)

    return add, neg, sub


@dataclass(frozen=True)
class FieldElement:
    """An element of ``field``, stored as its integer encoding."""

    field: FieldParams
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.value))

    def _check(self, other: object) -> "FieldElement":
        if isinstance(other, int):
            return decode(other % self.field.p, self.field)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field.spec} vs {other.field.spec}")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.value, o.value))

    def __rsub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElement({self.field.spec}, {self.value})"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def neg(x: FieldElement) -> FieldElement:
    return -x


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def pow(x: FieldElement, e: int) -> FieldElement:  # noqa: A001
    return x**e


def encode(x: FieldElement) -> int:
    return x.value


def decode(n: int, fld: FieldParams) -> FieldElement:
    if not 0 <= n < fld.order:
        raise FieldError(f"encoding {n} out of range for {fld.spec}")
    return FieldElement(fld, n)


def _order_ok(fld_pow, a: int, n1: int, factors: Sequence[int]) -> bool:
    if a == 0:
        return False
    if fld_pow(a, n1) != 1:
        return False
    return all(fld_pow(a, n1 // q) != 1 for q in set(factors))


def _check_size(p: int, m: int) -> None:
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if p**m > MAX_FIELD_SIZE:
        raise FieldSizeError(f"GF({p}^{m}) exceeds the size cap of 2^24 elements")


@lru_cache(maxsize=None)
def default_modulus(p: int, m: int) -> tuple[int, ...] | None:
    """Lexicographically smallest monic irreducible of degree m over GF(p)."""
    if m == 1:
        return None
    _check_size(p, m)
    for low in range(p**m):
        cand = tuple(_digits(low, p, m)) + (1,)
        if cand[0] != 0 and _modulus_irreducible(p, cand):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


def _modulus_irreducible(p: int, modulus: Sequence[int]) -> bool:
    from .poly import Polynomial, is_irreducible

    return is_irreducible(Polynomial(make_field(p, 1), tuple(modulus)))


@lru_cache(maxsize=None)
def _make_field(p: int, m: int, modulus: tuple[int, ...] | None, tables: bool) -> FieldParams:
    n1 = p**m - 1
    factors = factor_int(n1) if n1 > 1 else ()
    # provisional field with dense arithmetic to find alpha
    probe = FieldParams(p, m, modulus, 1, factors, use_tables=False)
    alpha = next(a for a in range(1, p**m) if _order_ok(probe.pow, a, n1, factors))
    return FieldParams(p, m, modulus, alpha, factors, use_tables=tables)


def make_field(
    p: int, m: int = 1, modulus: Sequence[int] | None = None, *, tables: bool = True
) -> FieldParams:
    """Build GF(p^m).

    ``modulus`` may be given as m+1 coefficients (monic, low to high) or as
    the m low coefficients with the leading 1 implied.  Without one, the
    lexicographically smallest monic irreducible is used.  The primitive
    element is the smallest encoding of multiplicative order p^m - 1.
    """
    _check_size(p, m)
    if m == 1:
        if modulus is not None and len(modulus) > 2:
            raise FieldError("prime fields take no modulus")
        return _make_field(p, 1, None, tables)
    if modulus is None:
        mod = default_modulus(p, m)
    else:
        mod = tuple(int(c) for c in modulus)
        if len(mod) == m:
            mod = mod + (1,)
        if len(mod) != m + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {m}")
        if any(not 0 <= c < p for c in mod):
            raise FieldError("modulus coefficients must lie in [0, p)")
        if not _modulus_irreducible(p, mod):
            raise FieldError(f"modulus {mod} is reducible over GF({p})")
    return _make_field(p, m, mod, tables)


_SPEC_RE = re.compile(
    r"^\s*gf\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?(?:;\s*modulus\s*=\s*([\d\s,]+))?\)\s*$", re.IGNORECASE
)


def parse_field_spec(text: str) -> FieldParams:
    """Parse ``gf(p)``, ``gf(p,m)`` or ``gf(p,m;modulus=c0,c1,...)``."""
    mt = _SPEC_RE.match(text)
    if not mt:
        raise FieldError(f"cannot parse field spec {text!r}")
    p, m = int(mt.group(1)), int(mt.group(2) or 1)
    modulus = None
    if mt.group(3):
        modulus = [int(c) for c in mt.group(3).split(",") if c.strip()]
    return make_field(p, m, modulus)


@dataclass(frozen=True)
class Embedding:
    """GF(p^m) inside GF(p^{sm}), fixed by where the small generator x goes."""

    small: FieldParams
    big: FieldParams
    image_of_generator: FieldElement

    @cached_property
    def _image(self) -> list[int]:
        big, g = self.big, self.image_of_generator.value
        powers = [1]
        for _ in range(self.small.m - 1):
            powers.append(big.mul(powers[-1], g))
        out = []
        for a in range(self.small.order):
            acc = 0
            for d, gp in zip(self.small.digits(a), powers):
                if d:
                    acc = big.add(acc, big.mul(d, gp))
            out.append(acc)
        return out

    @cached_property
    def _preimage(self) -> dict[int, int]:
        return {b: a for a, b in enumerate(self._image)}

    def __call__(self, x: FieldElement | int) -> FieldElement:
        a = x.value if isinstance(x, FieldElement) else x
        return FieldElement(self.big, self._image[a])

    def image(self, a: int) -> int:
        return self._image[a]

    def preimage(self, b: int) -> int:
        """Encoding in the small field of a big-field encoding lying in the image."""
        try:
            return self._preimage[b]
        except KeyError:
            raise FieldError(f"{b} is not in the embedded subfield") from None

    def contains(self, b: int) -> bool:
        return b in self._preimage


def _eval_prime_poly(big: FieldParams, coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = big.add(big.mul(acc, x), c)
    return acc


def embed_subfield(small: FieldParams, big: FieldParams) -> Embedding:
    if small.p != big.p or big.m % small.m:
        raise FieldError(f"{small.spec} does not embed in {big.spec}")
    if small.m == 1:
        return Embedding(small, big, FieldElement(big, 1))
    for y in range(big.order):
        if _eval_prime_poly(big, small.modulus, y) == 0:
            return Embedding(small, big, FieldElement(big, y))
    raise AssertionError("no root of the small modulus found")  # unreachable


def relative_norm(x: FieldElement, s: int) -> FieldElement:
    """Product of the s conjugates of ``x`` over the subfield of degree m/s."""
    fld = x.field
    if s < 1 or fld.m % s:
        raise FieldError(f"degree ratio {s} does not divide {fld.m}")
    q = fld.p ** (fld.m // s)
    acc, y = 1, x.value
    for _ in range(s):
        acc = fld.mul(acc, y)
        y = fld.pow(y, q)
    return FieldElement(fld, acc)
