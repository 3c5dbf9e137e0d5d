"""Dense univariate polynomials over a field from :mod:`czsplit.gf`.

Coefficients are stored as field encodings (ints), lowest degree first,
without trailing zeros; the zero polynomial has no coefficients.  The heavy
lifting (products, remainders, powers, gcds) goes through the field's
kernel, compiled when available.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf import FieldElement, FieldError, FieldParams

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Polynomial:
    field: FieldParams
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        c = tuple(self.coeffs)
        n = len(c)
        while n and c[n - 1] == 0:
            n -= 1
        object.__setattr__(self, "coeffs", c[:n])

    @classmethod
    def from_elements(cls, fld: FieldParams, elems: Iterable[FieldElement | int]) -> "Polynomial":
        return cls(fld, tuple(e.value if isinstance(e, FieldElement) else e for e in elems))

    @classmethod
    def constant(cls, fld: FieldParams, c: int) -> "Polynomial":
        return cls(fld, (c,))

    @classmethod
    def z(cls, fld: FieldParams) -> "Polynomial":
        return cls(fld, (0, 1))

    @classmethod
    def linear(cls, fld: FieldParams, beta: int) -> "Polynomial":
        """The monic test polynomial z + beta."""
        return cls(fld, (beta, 1))

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return self.lead == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, i: int) -> FieldElement:
        return FieldElement(self.field, self.coeffs[i] if i < len(self.coeffs) else 0)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, c) for c in self.coeffs]

    def monic(self) -> "Polynomial":
        if not self.coeffs or self.lead == 1:
            return self
        fld = self.field
        c = fld.inv(self.lead)
        return Polynomial(fld, tuple(fld.mul(c, x) for x in self.coeffs))

    def scale(self, c: int) -> "Polynomial":
        fld = self.field
        return Polynomial(fld, tuple(fld.mul(c, x) for x in self.coeffs))

    def _same(self, other: "Polynomial") -> None:
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field.spec} vs {other.field.spec}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._same(other)
        a, b, add = self.coeffs, other.coeffs, self.field.add
        if len(a) < len(b):
            a, b = b, a
        return Polynomial(self.field, tuple(add(x, b[i]) if i < len(b) else x for i, x in enumerate(a)))

    def __neg__(self) -> "Polynomial":
        neg = self.field.neg
        return Polynomial(self.field, tuple(neg(x) for x in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._same(other)
        return Polynomial(self.field, tuple(self.field.kernel.polymul(self.coeffs, other.coeffs)))

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = self.field.kernel.polydivmod(self.coeffs, other.coeffs)
        return Polynomial(self.field, tuple(q)), Polynomial(self.field, tuple(r))

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        return Polynomial(self.field, tuple(self.field.kernel.polyrem(self.coeffs, other.coeffs)))

    def __pow__(self, e: int) -> "Polynomial":
        out = Polynomial(self.field, (1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __call__(self, x: FieldElement | int) -> FieldElement:
        return evaluate(self, x)

    def __str__(self) -> str:
        return format_poly(self)


def _check_field(f: Polynomial, g: Polynomial) -> None:
    if f.field != g.field:
        raise FieldError(f"field mismatch: {f.field.spec} vs {g.field.spec}")


def poly_divmod(f: Polynomial, g: Polynomial) -> tuple[Polynomial, Polynomial]:
    return divmod(f, g)


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd; ``gcd(f, 0)`` is ``monic(f)``."""
    _check_field(f, g)
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero polynomials")
    return Polynomial(f.field, tuple(f.field.kernel.polygcd(f.coeffs, g.coeffs)))


def powmod(c: Polynomial, e: int, sigma: Polynomial) -> Polynomial:
    """``c**e mod sigma`` by square-and-multiply."""
    _check_field(c, sigma)
    if sigma.degree < 1:
        raise ValueError("powmod needs a modulus of degree >= 1")
    if e < 0:
        raise ValueError("negative exponent")
    return Polynomial(c.field, tuple(c.field.kernel.polypowmod(c.coeffs, e, sigma.coeffs)))


def evaluate(f: Polynomial, x: FieldElement | int) -> FieldElement:
    """Horner evaluation."""
    if isinstance(x, FieldElement):
        if x.field != f.field:
            raise FieldError(f"field mismatch: {f.field.spec} vs {x.field.spec}")
        x = x.value
    return FieldElement(f.field, f.field.kernel.polyeval(f.coeffs, x))


def derivative(f: Polynomial) -> Polynomial:
    fld = f.field
    out = []
    for i in range(1, len(f.coeffs)):
        k = i % fld.p
        c = f.coeffs[i]
        # k * c as repeated addition in the prime subfield
        out.append(fld.mul(k, c) if k else 0)
    return Polynomial(fld, tuple(out))


def product_from_roots(fld: FieldParams, roots: Iterable[FieldElement | int]) -> Polynomial:
    """Monic polynomial with exactly the given multiset of roots."""
    out = [1]
    for r in roots:
        r = r.value if isinstance(r, FieldElement) else r
        nr = fld.neg(r)
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] = fld.add(nxt[i + 1], c)
            nxt[i] = fld.add(nxt[i], fld.mul(nr, c))
        out = nxt
    return Polynomial(fld, tuple(out))


def roots_in_field(f: Polynomial) -> list[int]:
    """All roots of ``f`` in its coefficient field, by exhaustive evaluation."""
    ev = f.field.kernel.polyeval
    return [x for x in range(f.field.order) if ev(f.coeffs, x) == 0]


def frobenius_power(f: Polynomial, r: int) -> Polynomial:
    """``z**(q**r) mod f`` for q the field order."""
    h = Polynomial.z(f.field) % f
    q = f.field.order
    for _ in range(r):
        h = powmod(h, q, f)
    return h


def is_irreducible(f: Polynomial) -> bool:
    """Irreducibility via gcd(z^(q^r) - z, f) = 1 for all r <= deg/2."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    z = Polynomial.z(f.field)
    fm = f.monic()
    h = z % fm
    q = f.field.order
    for _ in range(int(d) // 2):
        h = powmod(h, q, fm)
        if not gcd(h - z, fm).is_one():
            return False
    return True


def is_squarefree(f: Polynomial) -> bool:
    if f.degree < 1:
        return True
    return gcd(f, derivative(f)).is_one()


def random_monic(fld: FieldParams, degree: int, seed: int | random.Random) -> Polynomial:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return Polynomial(fld, tuple(rng.randrange(fld.order) for _ in range(degree)) + (1,))


def format_poly(f: Polynomial, var: str = "z") -> str:
    """Pretty form with coefficient encodings, highest degree first: ``z^3+2*z+1``."""
    if f.is_zero():
        return "0"
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms)


def format_coeffs(f: Polynomial) -> str:
    return ",".join(map(str, f.coeffs)) if f.coeffs else "0"


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(?:([zx])(?:\^(\d+))?)?$")


class PolyParseError(ValueError):
    pass


def parse_poly(text: str, fld: FieldParams) -> Polynomial:
    """Parse ``c0,c1,...,cd`` (low to high) or a pretty form like ``z^2+3*z+1``.

    Coefficients are element encodings.  A leading ``-`` on a term negates it.
    """
    s = text.replace(" ", "")
    if not s:
        raise PolyParseError("empty polynomial")
    n = fld.order
    if re.fullmatch(r"\d+(,\d+)*", s) and ("," in s or not re.search(r"[zx]", s)):
        vals = [int(v) for v in s.split(",")]
        if any(v >= n for v in vals):
            raise PolyParseError(f"coefficient out of range for {fld.spec}")
        return Polynomial(fld, tuple(vals))
    if not re.fullmatch(r"[-+]?[0-9zx^*]+([-+][0-9zx^*]+)*", s):
        raise PolyParseError(f"cannot parse polynomial {text!r}")
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([-+]?)([^-+]+)", s):
        mt = _TERM_RE.match(body)
        if not mt or (mt.group(1) is None and mt.group(2) is None):
            raise PolyParseError(f"bad term {body!r}")
        c = int(mt.group(1)) if mt.group(1) is not None else 1
        if c >= n:
            raise PolyParseError(f"coefficient {c} out of range for {fld.spec}")
        if mt.group(2) is None:
            if body.endswith("*"):
                raise PolyParseError(f"bad term {body!r}")
            k = 0
        else:
            k = int(mt.group(3)) if mt.group(3) is not None else 1
        if sign == "-":
            c = fld.neg(c)
        coeffs[k] = fld.add(coeffs.get(k, 0), c)
    deg = max(coeffs)
    return Polynomial(fld, tuple(coeffs.get(i, 0) for i in range(deg + 1)))
