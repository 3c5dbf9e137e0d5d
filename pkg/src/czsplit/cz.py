"""Cantor-Zassenhaus splitting and the full factorization pipeline.

The improved splitter tries ``c = z`` first and then ``c = z + beta`` for
distinct nonzero beta.  A linear test whose negated constant is a root of
sigma is detected by evaluating sigma there instead of computing a gcd.
A failed attempt leaves ``c**ell mod sigma`` equal to a constant
``omega**h``, which tells us every root of sigma (shifted by beta) sits in
coset h; the coset-restricted strategy then draws beta from that coset only.

Characteristic 2 with m odd has no cube roots of unity in GF(2^m); those
inputs are split over GF(2^{2m}) and the factors are pulled back.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field as dc_field
from math import isqrt
from typing import Iterable, Iterator

from .characters import CosetStructure, make_cosets
from .gf import FieldError, FieldParams, Embedding, embed_subfield, is_prime, make_field
from .poly import (
    Polynomial,
    derivative,
    evaluate,
    gcd,
    is_irreducible,
    powmod,
    random_monic,
)


class InvariantViolation(RuntimeError):
    """A bound the theory guarantees was exceeded; indicates a bug."""


class SplitValidationError(ValueError):
    """The polynomial handed to a splitter does not meet its preconditions."""


class SplitExhausted(RuntimeError):
    """Every allowed test polynomial failed."""


class Status(str, enum.Enum):
    ALREADY_FACTOR = "already_factor_of_c"
    SPLIT = "split"
    FAILURE = "failure"


class Strategy(str, enum.Enum):
    CLASSIC = "classic"
    IMPROVED = "improved"
    COSET = "improved_coset_restricted"
    DIRECT = "direct_degree_s"

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        aliases = {"coset": cls.COSET, "direct": cls.DIRECT}
        if name in aliases:
            return aliases[name]
        return cls(name)


@dataclass(frozen=True)
class SplitOutcome:
    status: Status
    parts: tuple[Polynomial, ...] = ()
    observed_coset: int | None = None


@dataclass(frozen=True)
class AttemptRecord:
    node: int
    sigma: Polynomial
    test_poly: Polynomial
    outcome: SplitOutcome


@dataclass
class AttemptTrace:
    attempts: list[AttemptRecord] = dc_field(default_factory=list)
    coset_restricted: bool = False
    _nodes: int = 0

    @property
    def total_attempts(self) -> int:
        return len(self.attempts)

    def new_node(self) -> int:
        self._nodes += 1
        return self._nodes - 1

    def record(self, node: int, sigma: Polynomial, c: Polynomial, out: SplitOutcome) -> None:
        self.attempts.append(AttemptRecord(node, sigma, c, out))

    def by_node(self) -> list[list[AttemptRecord]]:
        groups: dict[int, list[AttemptRecord]] = {}
        for rec in self.attempts:
            groups.setdefault(rec.node, []).append(rec)
        return [groups[k] for k in sorted(groups)]

    def extend(self, other: "AttemptTrace") -> None:
        offset = self._nodes
        for rec in other.attempts:
            self.attempts.append(AttemptRecord(rec.node + offset, rec.sigma, rec.test_poly, rec.outcome))
        self._nodes += other._nodes
        self.coset_restricted = self.coset_restricted or other.coset_restricted


@dataclass(frozen=True)
class SplitProblem:
    """sigma: monic, squarefree, z does not divide it, all factors of degree s."""

    sigma: Polynomial
    s: int = 1
    q: int | None = None
    strategy: Strategy = Strategy.IMPROVED
    validate: bool = False

    @property
    def t(self) -> int:
        return int(self.sigma.degree)

    @property
    def d(self) -> int:
        return self.t // self.s

    def check(self) -> None:
        f = self.sigma
        if f.degree < 1 or not f.is_monic():
            raise SplitValidationError("sigma must be monic of degree >= 1")
        if self.t % self.s:
            raise SplitValidationError(f"degree {self.t} is not a multiple of s={self.s}")
        if f.coeffs[0] == 0:
            raise SplitValidationError("z divides sigma")
        if not gcd(f, derivative(f)).is_one():
            raise SplitValidationError("sigma is not squarefree")
        buckets = distinct_degree(f)
        if [r for _, r in buckets] != [self.s]:
            raise SplitValidationError(f"sigma is not a product of degree-{self.s} irreducibles")


def default_q(fld: FieldParams) -> int:
    return 3 if fld.p == 2 else 2


def split_once(
    sigma: Polynomial, c: Polynomial, cs: CosetStructure, exponent: int | None = None
) -> SplitOutcome:
    """One Cantor-Zassenhaus attempt with test polynomial ``c``.

    ``exponent`` defaults to ``cs.ell``; pass (p^{sm}-1)/q for the direct
    degree-s method.
    """
    fld = sigma.field
    if cs.field != fld or c.field != fld:
        raise FieldError("sigma, c and the coset structure must share one field")
    if sigma.degree < 2 or not sigma.is_monic():
        raise ValueError("sigma must be monic of degree >= 2")
    if c.degree < 1:
        raise ValueError("test polynomial must be non-constant")
    if c.degree == 1:
        root = fld.neg(fld.mul(c.coeffs[0], fld.inv(c.coeffs[1])))
        if evaluate(sigma, root).value == 0:
            lin = c.monic()
            return SplitOutcome(Status.ALREADY_FACTOR, (lin, sigma // lin))
    else:
        g = gcd(c, sigma)
        if not g.is_one():
            return SplitOutcome(Status.ALREADY_FACTOR, (g, sigma // g))
    a = powmod(c, cs.ell if exponent is None else exponent, sigma)
    if a.is_zero():
        raise InvariantViolation("c**ell vanished mod sigma although gcd(c, sigma) = 1")
    if a.is_constant():
        h = cs._root_index.get(a.coeffs[0])
        if h is None:
            raise SplitValidationError("c**ell mod sigma is a constant outside the roots of unity")
        return SplitOutcome(Status.FAILURE, observed_coset=h)
    parts = []
    prod = Polynomial(fld, (1,))
    for w in cs.roots_of_unity:
        g = gcd(a - Polynomial(fld, (w,)), sigma)
        if not g.is_one():
            parts.append(g)
            prod = prod * g
    if not parts:
        raise SplitValidationError("no root of unity matches c**ell mod sigma")
    rest = sigma // prod
    if not rest.is_one():
        parts.append(rest)
    return SplitOutcome(Status.SPLIT, tuple(parts))


def _sorted_factors(fs: Iterable[Polynomial]) -> list[Polynomial]:
    return sorted(fs, key=lambda f: (len(f.coeffs), f.coeffs[::-1]))


def _beta_order(fld: FieldParams, pool: Iterable[int] | None, rng: random.Random | None) -> Iterator[int]:
    if pool is None:
        if rng is None:
            return iter(range(1, fld.order))
        pool = range(1, fld.order)
    pool = list(pool)
    if rng is not None:
        rng.shuffle(pool)
    return iter(pool)


def _needs_lift(fld: FieldParams, q: int) -> bool:
    return (fld.order - 1) % q != 0 and fld.p == 2 and q == 3 and fld.m % 2 == 1


def _lift(sigma: Polynomial) -> tuple[Polynomial, Embedding]:
    small = sigma.field
    big = make_field(small.p, 2 * small.m)
    emb = embed_subfield(small, big)
    return Polynomial(big, tuple(emb.image(c) for c in sigma.coeffs)), emb


def _pull_back(factors: list[Polynomial], emb: Embedding) -> list[Polynomial]:
    """Map factors over the big field back, pairing Frobenius conjugates."""
    small, big = emb.small, emb.big
    qm = small.order
    out, pending = [], {}
    for g in factors:
        if all(emb.contains(c) for c in g.coeffs):
            out.append(Polynomial(small, tuple(emb.preimage(c) for c in g.coeffs)))
            continue
        conj = tuple(big.pow(c, qm) for c in g.coeffs)
        if conj in pending:
            h = pending.pop(conj) * g
            out.append(Polynomial(small, tuple(emb.preimage(c) for c in h.coeffs)))
        else:
            pending[g.coeffs] = g
    if pending:
        raise InvariantViolation("unpaired conjugate factors after the quadratic lift")
    return _sorted_factors(out)


def _prepare(problem: SplitProblem) -> None:
    if problem.validate:
        problem.check()
    elif problem.sigma.degree < 1 or not problem.sigma.is_monic():
        raise SplitValidationError("sigma must be monic of degree >= 1")


def edf_improved(problem: SplitProblem, seed: int = 0) -> tuple[list[Polynomial], AttemptTrace]:
    """Equal-degree splitting of a fully split sigma with tests z, z+beta, ...

    Each part of a split is split again from scratch.  Seed 0 walks beta in
    encoding order; other seeds use a seeded permutation.
    """
    _prepare(problem)
    if problem.s != 1:
        return edf_direct_degree_s(problem, seed)
    sigma = problem.sigma
    fld = sigma.field
    q = problem.q or default_q(fld)
    restricted = problem.strategy == Strategy.COSET
    if _needs_lift(fld, q):
        big_sigma, emb = _lift(sigma)
        factors, trace = edf_improved(
            SplitProblem(big_sigma, 1, q, problem.strategy), seed
        )
        return _pull_back(factors, emb), trace
    cs = CosetStructure(fld, q)
    rng = random.Random(seed) if seed else None
    trace = AttemptTrace(coset_restricted=restricted)
    done: list[Polynomial] = []
    stack = [sigma]
    while stack:
        f = stack.pop()
        if f.degree <= 1:
            done.append(f)
            continue
        out = split_node_improved(f, cs, restricted, rng, trace)
        stack.extend(reversed(out.parts))
    return _sorted_factors(done), trace


def split_node_improved(
    f: Polynomial,
    cs: CosetStructure,
    restricted: bool = False,
    rng: random.Random | None = None,
    trace: AttemptTrace | None = None,
) -> SplitOutcome:
    """Run tests z, z+beta, ... on one fully split f until it separates."""
    fld = f.field
    trace = trace if trace is not None else AttemptTrace(coset_restricted=restricted)
    node = trace.new_node()
    z = Polynomial.z(fld)
    out = split_once(f, z, cs)
    trace.record(node, f, z, out)
    if out.status != Status.FAILURE:
        return out
    attempts = 1
    pool = None
    if restricted:
        # beta = -z_i for a root z_i in A_h makes c(z_i) vanish
        pool = sorted(fld.neg(y) for y in cs.members[out.observed_coset])
    for beta in _beta_order(fld, pool, rng):
        if attempts >= cs.ell:
            raise InvariantViolation(
                f"more than ell={cs.ell} attempts needed for a degree-{int(f.degree)} split"
            )
        c = Polynomial.linear(fld, beta)
        out = split_once(f, c, cs)
        trace.record(node, f, c, out)
        attempts += 1
        if out.status != Status.FAILURE:
            return out
    raise InvariantViolation("beta pool exhausted without a split")


def qth_split(problem: SplitProblem, seed: int = 0) -> tuple[list[Polynomial], AttemptTrace]:
    """Improved splitting against the q-th roots of unity for a prime q | p^m - 1."""
    fld = problem.sigma.field
    q = problem.q or default_q(fld)
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if (fld.order - 1) % q:
        raise FieldError(f"q={q} does not divide {fld.order - 1}")
    return edf_improved(problem, seed)


CLASSIC_MAX_ATTEMPTS = 256


def edf_classic(problem: SplitProblem, seed: int = 0) -> tuple[list[Polynomial], AttemptTrace]:
    """Baseline: random monic c of degree 1..t-1 at every attempt."""
    _prepare(problem)
    sigma, s = problem.sigma, problem.s
    fld = sigma.field
    q = problem.q or default_q(fld)
    if _needs_lift(fld, q):
        big_sigma, emb = _lift(sigma)
        s_big = s if s % 2 else s // 2
        factors, trace = edf_classic(SplitProblem(big_sigma, s_big, q, Strategy.CLASSIC), seed)
        return _pull_back(factors, emb), trace
    cs = CosetStructure(fld, q)
    exponent = (fld.order**s - 1) // q
    rng = random.Random(seed)
    trace = AttemptTrace()
    done: list[Polynomial] = []
    stack = [sigma]
    while stack:
        f = stack.pop()
        if f.degree <= s:
            done.append(f)
            continue
        node = trace.new_node()
        t = int(f.degree)
        for _ in range(CLASSIC_MAX_ATTEMPTS):
            c = random_monic(fld, rng.randint(1, t - 1), rng)
            out = split_once(f, c, cs, exponent)
            trace.record(node, f, c, out)
            if out.status != Status.FAILURE:
                break
        else:
            raise SplitExhausted(f"no split after {CLASSIC_MAX_ATTEMPTS} random tests")
        stack.extend(reversed(out.parts))
    return _sorted_factors(done), trace


def linear_tests_sufficient(s: int, fld: FieldParams) -> bool:
    """Whether monic linear tests are guaranteed to separate degree-s factors.

    p = 2: (4s-2)/sqrt(2^m) < 2;  p odd: (2s-1)/sqrt(p^m) < 1.  Compared in
    integers by squaring.
    """
    n = fld.order
    if fld.p == 2:
        return (4 * s - 2) ** 2 < 4 * n
    return (2 * s - 1) ** 2 < n


def _monic_degree_s(fld: FieldParams, s: int, rng: random.Random | None) -> Iterator[Polynomial]:
    total = fld.order**s
    order: Iterable[int] = range(total)
    if rng is not None:
        order = rng.sample(range(total), total) if total <= 1 << 20 else (rng.randrange(total) for _ in range(1 << 20))
    n = fld.order
    for k in order:
        coeffs = []
        for _ in range(s):
            k, r = divmod(k, n)
            coeffs.append(r)
        yield Polynomial(fld, tuple(coeffs) + (1,))


def edf_direct_degree_s(problem: SplitProblem, seed: int = 0) -> tuple[list[Polynomial], AttemptTrace]:
    """Split a product of degree-s irreducibles over GF(p^m) without extending.

    Uses the exponent (p^{sm}-1)/q with tests z, z+beta for beta in GF(p^m);
    if all of those fail, monic degree-s tests follow (which can only happen
    when the linear-sufficiency condition does not hold).
    """
    _prepare(problem)
    sigma, s = problem.sigma, problem.s
    fld = sigma.field
    q = problem.q or default_q(fld)
    if _needs_lift(fld, q):
        big_sigma, emb = _lift(sigma)
        s_big = s if s % 2 else s // 2
        sub = SplitProblem(big_sigma, s_big, q, Strategy.DIRECT)
        factors, trace = (edf_direct_degree_s if s_big > 1 else edf_improved)(sub, seed)
        return _pull_back(factors, emb), trace
    if s == 1:
        return edf_improved(SplitProblem(sigma, 1, q, Strategy.IMPROVED), seed)
    cs = CosetStructure(fld, q)
    exponent = (fld.order**s - 1) // q
    sufficient = linear_tests_sufficient(s, fld)
    rng = random.Random(seed) if seed else None
    trace = AttemptTrace()
    z = Polynomial.z(fld)
    done: list[Polynomial] = []
    stack = [sigma]
    while stack:
        f = stack.pop()
        if f.degree <= s:
            done.append(f)
            continue
        node = trace.new_node()
        out = None
        for c in _chain([z], (Polynomial.linear(fld, b) for b in _beta_order(fld, None, rng))):
            out = split_once(f, c, cs, exponent)
            trace.record(node, f, c, out)
            if out.status != Status.FAILURE:
                break
        else:
            if sufficient:
                raise InvariantViolation("linear tests exhausted although they are provably sufficient")
            for c in _monic_degree_s(fld, s, rng):
                out = split_once(f, c, cs, exponent)
                trace.record(node, f, c, out)
                if out.status != Status.FAILURE:
                    break
            else:
                raise SplitExhausted(f"all monic tests of degree <= {s} failed")
        stack.extend(reversed(out.parts))
    return _sorted_factors(done), trace


def _chain(*its):
    for it in its:
        yield from it


def edf(problem: SplitProblem, seed: int = 0) -> tuple[list[Polynomial], AttemptTrace]:
    """Dispatch on ``problem.strategy``."""
    if problem.strategy == Strategy.CLASSIC:
        return edf_classic(problem, seed)
    if problem.strategy == Strategy.DIRECT or problem.s > 1:
        if problem.s == 1 and problem.strategy == Strategy.DIRECT:
            return edf_improved(SplitProblem(problem.sigma, 1, problem.q, Strategy.IMPROVED, problem.validate), seed)
        return edf_direct_degree_s(problem, seed)
    return edf_improved(problem, seed)


def pth_root(f: Polynomial) -> Polynomial:
    """g with g(z)^p = f(z), for f with zero derivative."""
    fld = f.field
    p = fld.p
    e = fld.order // p  # inverse Frobenius x -> x^(p^(m-1))
    if any(c for i, c in enumerate(f.coeffs) if i % p):
        raise ValueError("not a p-th power")
    return Polynomial(fld, tuple(fld.pow(f.coeffs[i], e) for i in range(0, len(f.coeffs), p)))


def squarefree_decomposition(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Pairs (squarefree part, multiplicity) whose product is monic(f)."""
    if f.degree < 1:
        raise ValueError("squarefree decomposition of a constant")
    acc: dict[int, Polynomial] = {}
    _sqf(f.monic(), 1, acc)
    return [(acc[k], k) for k in sorted(acc)]


def _sqf(f: Polynomial, scale: int, acc: dict[int, Polynomial]) -> None:
    fld = f.field
    c = gcd(f, derivative(f))
    w = f // c
    i = 1
    while not w.is_one():
        y = gcd(w, c)
        fac = w // y
        if not fac.is_one():
            k = i * scale
            acc[k] = acc[k] * fac if k in acc else fac
        w = y
        c = c // y
        i += 1
    if not c.is_one():
        _sqf(pth_root(c), scale * fld.p, acc)


def distinct_degree(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Pairs (product of all degree-r irreducible factors, r), r increasing."""
    if f.degree < 1:
        raise ValueError("distinct-degree factorization of a constant")
    f = f.monic()
    if not gcd(f, derivative(f)).is_one():
        raise SplitValidationError("distinct_degree needs a squarefree polynomial")
    fld = f.field
    z = Polynomial.z(fld)
    q = fld.order
    out = []
    rest = f
    h = z % rest
    r = 0
    while rest.degree >= 2 * (r + 1):
        r += 1
        h = powmod(h, q, rest)
        g = gcd(h - z, rest)
        if not g.is_one():
            out.append((g, r))
            rest = rest // g
            h = h % rest
    if rest.degree >= 1:
        out.append((rest, int(rest.degree)))
    return out


@dataclass
class Factorization:
    field: FieldParams
    leading: int
    factors: list[tuple[Polynomial, int]]
    trace: AttemptTrace

    def reconstruct(self) -> Polynomial:
        out = Polynomial(self.field, (self.leading,))
        for g, k in self.factors:
            out = out * g**k
        return out


def factor(f: Polynomial, seed: int = 0, strategy: Strategy | str = Strategy.IMPROVED) -> Factorization:
    """Complete factorization: z-stripping, squarefree, distinct-degree, equal-degree."""
    if f.degree < 1:
        raise ValueError("cannot factor a constant")
    strategy = Strategy.parse(strategy) if isinstance(strategy, str) else strategy
    fld = f.field
    lead = f.lead
    g = f.monic()
    trace = AttemptTrace(coset_restricted=strategy == Strategy.COSET)
    found: dict[Polynomial, int] = {}
    k = next(i for i, c in enumerate(g.coeffs) if c)
    if k:
        found[Polynomial.z(fld)] = k
        g = Polynomial(fld, g.coeffs[k:])
    if g.degree >= 1:
        for part, mult in squarefree_decomposition(g):
            for bucket, r in distinct_degree(part):
                if bucket.degree == r:
                    pieces = [bucket]
                else:
                    strat = strategy if r == 1 or strategy == Strategy.CLASSIC else Strategy.DIRECT
                    if r == 1 and strat == Strategy.DIRECT:
                        strat = Strategy.IMPROVED
                    pieces, sub = edf(SplitProblem(bucket, r, None, strat), seed)
                    trace.extend(sub)
                for piece in pieces:
                    found[piece] = found.get(piece, 0) + mult
    factors = sorted(found.items(), key=lambda kv: (len(kv[0].coeffs), kv[0].coeffs[::-1]))
    return Factorization(fld, lead, factors, trace)


def prop2_bound_holds(s: int, fld: FieldParams, attempts: int) -> bool:
    """attempts < (2^m/3)(1 + (4s-2)/sqrt(2^m) + 2^-m) resp. (p^m/2)(1 + (2s-1)/sqrt(p^m))."""
    n = fld.order
    r = isqrt(n)
    if r * r == n:
        if fld.p == 2:
            return 3 * attempts * r < n * r + (4 * s - 2) * n + r
        return 2 * attempts * r < n * r + (2 * s - 1) * n
    from .oracle import bound_NA

    return attempts < bound_NA(s, fld)
