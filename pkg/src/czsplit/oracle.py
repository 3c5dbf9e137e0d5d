"""Brute-force counts and closed forms for the attempt-count analysis.

N(roots) is the number of shifts beta for which every ``root + beta`` is
nonzero and all of them fall in one coset; 1 + N bounds the attempts the
improved splitter can spend on a polynomial with those roots.  Every
closed form here is evaluated exactly (Fractions and Eisenstein integers);
the only approximation is an irrational square root inside a bound, which
is rounded up.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .characters import CosetStructure, Eisenstein, chi2, chi3, make_cosets
from .cz import (
    Status,
    Strategy,
    default_q,
    linear_tests_sufficient,
    split_node_improved,
    split_once,
)
from .gf import FieldElement, FieldError, FieldParams, embed_subfield, make_field, relative_norm
from .poly import Polynomial, product_from_roots, random_monic

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    env = os.environ.get("CZSPLIT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class TupleCount:
    roots: tuple[int, ...]
    count: int
    formula_value: Fraction | None = None


@dataclass
class MaxReport:
    field: str
    t: int
    max_count: int
    arg_tuple: tuple[int, ...]
    exhaustive: bool
    sample_size: int
    formula: Fraction | int | None = None  # closed form for 1 + max, when known
    bound_value: Fraction | None = None

    @property
    def one_plus_max(self) -> int:
        return 1 + self.max_count

    @property
    def attained(self) -> bool | None:
        """Brute 1 + max equals the closed form (None when there is none)."""
        return None if self.formula is None else self.one_plus_max == self.formula

    @property
    def within_bound(self) -> bool | None:
        return None if self.bound_value is None else self.max_count <= self.bound_value

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "t": self.t,
            "max_count": self.max_count,
            "one_plus_max": self.one_plus_max,
            "witness": list(self.arg_tuple),
            "exhaustive": self.exhaustive,
            "sample_size": self.sample_size,
            "formula": _num_json(self.formula),
            "bound": _num_json(self.bound_value),
            "attained": self.attained,
        }


def _num_json(x):
    if x is None or isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


# -- N(t) --------------------------------------------------------------------


def _check_distinct(roots: Sequence[int]) -> None:
    if len(set(roots)) != len(roots):
        raise ValueError(f"roots must be distinct: {tuple(roots)}")


def brute_N(roots: Sequence[int | FieldElement], cs: CosetStructure) -> int:
    """Shifts beta putting every root + beta in one common coset."""
    rs = [r.value if isinstance(r, FieldElement) else int(r) for r in roots]
    if len(rs) < 2:
        raise ValueError("need at least two roots")
    _check_distinct(rs)
    return int(brute_N_many(np.array([rs]), cs)[0])


def brute_N_many(tuples: np.ndarray, cs: CosetStructure, threads: int = 1) -> np.ndarray:
    """Vectorised brute_N over the rows of an integer array."""
    fld = cs.field
    tuples = np.ascontiguousarray(tuples, dtype=np.int64)
    betas = np.arange(fld.order, dtype=np.int64)
    kern = fld.kernel
    if threads <= 1 or len(tuples) < 2048:
        return kern.count_common_coset(tuples, betas, cs.table)
    parts = np.array_split(tuples, threads)
    with ThreadPoolExecutor(threads) as ex:
        outs = list(ex.map(lambda blk: kern.count_common_coset(blk, betas, cs.table), parts))
    return np.concatenate(outs)


def _require_default(cs: CosetStructure) -> None:
    if cs.q != default_q(cs.field):
        raise ValueError("closed forms cover q=3 in characteristic 2 and q=2 for odd p")


def formula_N(roots: Sequence[int | FieldElement], cs: CosetStructure) -> Fraction:
    """Closed form for t = 2 and t = 3."""
    _require_default(cs)
    fld = cs.field
    rs = [r.value if isinstance(r, FieldElement) else int(r) for r in roots]
    _check_distinct(rs)
    n = fld.order
    t = len(rs)
    if t == 2:
        return Fraction(n - 4, 3) if fld.p == 2 else Fraction(n - 3, 2)
    if t != 3:
        raise ValueError(f"no closed form for t={t}")
    r1, r2, r3 = rs
    if fld.p == 2:
        ys = [fld.add(r2, r3), fld.add(r1, r3), fld.add(r1, r2)]
        v = chi3(fld.mul(fld.mul(ys[0], ys[1]), ys[2]), cs)
        total = Eisenstein(n - 11) - (-2) ** (fld.m // 2) * (v + v.conj())
        for i, j in itertools.permutations(range(3), 2):
            total = total - chi3(fld.mul(ys[i], fld.mul(ys[j], ys[j])), cs)
        if not total.is_rational():
            raise ArithmeticError(f"non-rational character sum {total}")
        return Fraction(total.a, 9)
    d = fld.sub
    s = (
        chi2(d(r1, r3), cs) * chi2(d(r2, r3), cs)
        + chi2(d(r1, r2), cs) * chi2(d(r3, r2), cs)
        + chi2(d(r3, r1), cs) * chi2(d(r2, r1), cs)
    )
    return Fraction(n - 6 - s, 4)


def formula_max_N(fld: FieldParams, t: int) -> int | None:
    """Closed form of 1 + max N(t) for t in {2, 3}; None otherwise."""
    n, m, p = fld.order, fld.m, fld.p
    if t == 2:
        return (n - 1) // 3 if p == 2 else (n - 1) // 2
    if t == 3:
        return formula_M(fld)
    return None


def tuple_count(roots: Sequence[int], cs: CosetStructure) -> TupleCount:
    fv = formula_N(roots, cs) if len(roots) in (2, 3) and cs.q == default_q(cs.field) else None
    return TupleCount(tuple(roots), brute_N(roots, cs), fv)


def _argmax_rows(tuples: np.ndarray, counts: np.ndarray) -> tuple[int, tuple[int, ...]]:
    k = int(np.argmax(counts))  # first hit is the lexicographically smallest row
    return int(counts[k]), tuple(int(v) for v in tuples[k])


def enumerate_tuples(n: int, t: int) -> np.ndarray:
    """All t-subsets of range(n) as sorted rows in lexicographic order."""
    return np.array(list(itertools.combinations(range(n), t)), dtype=np.int64).reshape(-1, t)


def sample_tuples(n: int, t: int, size: int, seed: int) -> np.ndarray:
    rng = random.Random(seed)
    return np.array([sorted(rng.sample(range(n), t)) for _ in range(size)], dtype=np.int64)


def max_N(
    fld: FieldParams,
    t: int,
    cs: CosetStructure | None = None,
    budget: int | None = None,
    *,
    samples: int = 10_000,
    seed: int = 0,
    threads: int = 1,
) -> MaxReport:
    """Maximum of N over t-subsets; exhaustive within the step budget, else sampled."""
    if t < 2:
        raise ValueError("t >= 2")
    cs = cs or make_cosets(fld)
    budget = default_budget() if budget is None else budget
    n = fld.order
    exhaustive = math.comb(n, t) * n <= budget
    tuples = enumerate_tuples(n, t) if exhaustive else sample_tuples(n, t, samples, seed)
    counts = brute_N_many(tuples, cs, threads)
    best, arg = _argmax_rows(tuples, counts)
    default = cs.q == default_q(fld)
    return MaxReport(
        fld.spec,
        t,
        best,
        arg,
        exhaustive,
        len(tuples),
        formula_max_N(fld, t) if default else None,
        bound_N(t, fld) if default else None,
    )


# -- a_j and the general bound -------------------------------------------------


def a_seq(j: int) -> int:
    """sum_h C(j, e + 3h), e = 2j mod 3, checked against the root-of-unity filter."""
    if j < 2:
        raise ValueError("a_j is defined for j >= 2")
    e = (2 * j) % 3
    direct = sum(math.comb(j, k) for k in range(e, j + 1, 3))
    acc = Eisenstein(0)
    for h in range(3):
        acc = acc + Eisenstein.zeta(-h * e) * (1 + Eisenstein.zeta(h)) ** j
    closed = acc.divide_exact(3)
    if closed != direct:
        raise ArithmeticError(f"a_{j}: binomial sum {direct} != closed form {closed}")
    return direct


def a_sum_identity(r: int) -> tuple[Fraction, Fraction]:
    """(sum_{j=2}^r a_j (j-1) C(r, j),  1 + (2r 3^{r-1} - 3^r)/3)."""
    lhs = Fraction(sum(a_seq(j) * (j - 1) * math.comb(r, j) for j in range(2, r + 1)))
    rhs = 1 + Fraction(2 * r * 3 ** (r - 1) - 3**r, 3)
    return lhs, rhs


def sqrt_upper(n: int) -> tuple[Fraction, bool]:
    """(value >= sqrt(n), exact?)."""
    r = math.isqrt(n)
    if r * r == n:
        return Fraction(r), True
    return Fraction(math.nextafter(math.sqrt(n), math.inf)), False


def bound_N(r: int, fld: FieldParams) -> Fraction:
    if r < 2:
        raise ValueError("r >= 2")
    n = fld.order
    root, _ = sqrt_upper(n)
    if fld.p == 2:
        return (n + root - r + 3 ** (r - 2) * (2 * r - 3) * root) / 3 ** (r - 1)
    return (n - r + (2 ** (r - 1) * (r - 2) + 1) * root) / 2 ** (r - 1)


# -- M and t0 ------------------------------------------------------------------


def formula_M(fld: FieldParams) -> int:
    n, m, p = fld.order, fld.m, fld.p
    if p == 2:
        if m % 2:
            raise FieldError("M is defined for GF(2^m) with m even")
        half = 2 ** (m // 2)
        return (n + half - 2) // 9 if (m // 2) % 2 == 0 else (n + 2 * half + 1) // 9
    if p % 4 == 1 or m % 2 == 0:
        return (n - 1) // 4
    return (n + 1) // 4


def _coset_pair_counts(cs: CosetStructure, plus: bool) -> tuple[int, tuple[int, int, int]]:
    """max over beta != 0 and cosets (i, j) of #{z in A_j : beta +/- z in A_i}."""
    fld, q = cs.field, cs.q
    tab = cs.table.astype(np.int64)
    xs = np.arange(fld.order, dtype=np.int64)
    best, arg = -1, (0, 0, 0)
    for beta in range(1, fld.order):
        if plus:
            other = _shift(fld, xs, beta)
        else:
            other = _shift(fld, _neg(fld, xs), beta)
        hj, hi = tab, tab[other]
        live = (hj >= 0) & (hi >= 0)
        cnt = np.bincount(hi[live] * q + hj[live], minlength=q * q)
        k = int(np.argmax(cnt))
        if cnt[k] > best:
            best, arg = int(cnt[k]), (beta, k // q, k % q)
    return best, arg


def _shift(fld: FieldParams, xs: np.ndarray, beta: int) -> np.ndarray:
    t = fld.tables
    if t is not None and t.kind != 3:
        return t.add_arrays(xs, np.int64(beta))
    return np.array([fld.add(int(x), beta) for x in xs], dtype=np.int64)


def _neg(fld: FieldParams, xs: np.ndarray) -> np.ndarray:
    return np.array([fld.neg(int(x)) for x in xs], dtype=np.int64)


def brute_M(cs: CosetStructure) -> MaxReport:
    """Representations of beta != 0 as a sum from two prescribed cosets.

    Char 2 counts z in A_j with beta + z in A_i, odd p counts beta - z in A_i.
    The witness is (beta, i, j).
    """
    best, arg = _coset_pair_counts(cs, plus=cs.field.p == 2)
    fld = cs.field
    return MaxReport(fld.spec, 0, best, arg, True, fld.order - 1, formula_M(fld) if cs.q == default_q(fld) else None)


def t0(k: int, cs: CosetStructure) -> int:
    """Smallest degree guaranteed to split within k attempts (k in {1, 2})."""
    if k == 1:
        return cs.ell + 1
    if k == 2:
        return 1 + formula_M(cs.field)
    raise ValueError("t0 is defined for 1 or 2 attempts")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def verify_t0_one(cs: CosetStructure) -> list[Check]:
    """Pigeonhole: every coset has exactly ell elements, and a coset itself defeats c = z."""
    sizes = [len(a) for a in cs.members]
    out = [Check("coset sizes equal ell", all(s == cs.ell for s in sizes), f"sizes={sizes} ell={cs.ell}")]
    if cs.ell >= 2:
        sigma = product_from_roots(cs.field, cs.members[0])
        res = split_once(sigma, Polynomial.z(cs.field), cs)
        out.append(Check("degree-ell root set in A_0 defeats c=z", res.status == Status.FAILURE))
    return out


def verify_t0_two(cs: CosetStructure) -> list[Check]:
    """No (M+1) roots in one coset survive a second linear test; M roots can."""
    fld = cs.field
    M = formula_M(fld)
    best, (beta, i, j) = _coset_pair_counts(cs, plus=True)
    out = [Check("max |{z in A_j : z+beta in A_i}| equals M", best == M, f"brute={best} M={M}")]
    if best >= 2:
        roots = [z for z in cs.members[j] if cs.index(fld.add(z, beta)) == i]
        sigma = product_from_roots(fld, roots)
        r1 = split_once(sigma, Polynomial.z(fld), cs)
        r2 = split_once(sigma, Polynomial.linear(fld, beta), cs)
        out.append(
            Check(
                "witness of degree M defeats two attempts",
                r1.status == Status.FAILURE and r2.status == Status.FAILURE,
                f"roots={roots} beta={beta}",
            )
        )
    return out


# -- linear tests for degree-s factors ----------------------------------------


@dataclass
class LiftedCharacter:
    """chi' on the big field against chi o norm on the small field.

    ``epsilon`` is the exponent with chi'(x) = chi(N(x))**epsilon; which
    nontrivial small character the lift matches depends on the chosen
    generators and embedding.
    """

    small: FieldParams
    big: FieldParams
    q: int
    epsilon: int
    direct: np.ndarray  # coset index in the big field
    via_norm: np.ndarray  # epsilon * coset of preimage(N(x)) in the small field
    mismatches: int


def lifted_character(small: FieldParams, big: FieldParams, q: int | None = None) -> LiftedCharacter:
    q = q or default_q(small)
    s = big.m // small.m
    emb = embed_subfield(small, big)
    cb, cs = CosetStructure(big, q), CosetStructure(small, q)
    via = np.full(big.order, -1, dtype=np.int32)
    raw = np.full(big.order, -1, dtype=np.int32)
    for x in range(1, big.order):
        nx = relative_norm(FieldElement(big, x), s).value
        raw[x] = cs.index(emb.preimage(nx))
    h_gen = int(raw[big.alpha])
    if h_gen % q == 0:
        raise FieldError("norm of the generator is a q-th power")
    eps = pow(h_gen, -1, q)
    live = raw >= 0
    via[live] = (raw[live] * eps) % q
    direct = cb.table.astype(np.int32)
    return LiftedCharacter(small, big, q, eps, direct, via, int(np.count_nonzero(direct != via)))


def degree_s_pairs(small: FieldParams, big: FieldParams) -> np.ndarray:
    """Pairs (z1, z2) of big-field elements of exact degree s over the small
    field with distinct minimal polynomials; one row per unordered pair."""
    qm = small.order
    s = big.m // small.m
    orbit_id = np.full(big.order, -1, dtype=np.int64)
    reps = []
    for x in range(big.order):
        if orbit_id[x] >= 0:
            continue
        orb, y = [x], big.pow(x, qm)
        while y != x:
            orb.append(y)
            y = big.pow(y, qm)
        for y in orb:
            orbit_id[y] = x
        if len(orb) == s:
            reps.append(orb)
    elems = [y for orb in reps for y in orb]
    rows = [(a, b) for a, b in itertools.combinations(elems, 2) if orbit_id[a] != orbit_id[b]]
    return np.array(rows, dtype=np.int64).reshape(-1, 2)


@dataclass
class NAReport:
    report: MaxReport
    lifted: LiftedCharacter
    two_way_agree: bool
    pairs: int

    @property
    def n_a(self) -> int:
        return self.report.one_plus_max


def brute_NA(small: FieldParams, s: int, budget: int | None = None, q: int | None = None) -> NAReport:
    """1 + max over root pairs of #{beta in small : chi'(z1+beta) = chi'(z2+beta)}.

    Counted once with the big-field coset table and once through the
    relative norm; both counts must agree pair by pair.
    """
    if s < 2:
        raise ValueError("s >= 2")
    budget = default_budget() if budget is None else budget
    big = make_field(small.p, small.m * s)
    pairs = degree_s_pairs(small, big)
    if len(pairs) * small.order > budget:
        raise ValueError(f"tower sweep needs {len(pairs) * small.order} steps, budget {budget}")
    lc = lifted_character(small, big, q)
    emb = embed_subfield(small, big)
    betas = np.array([emb.image(b) for b in range(small.order)], dtype=np.int64)
    kern = big.kernel
    c1 = kern.count_common_coset(pairs, betas, lc.direct)
    c2 = kern.count_common_coset(pairs, betas, lc.via_norm)
    best, arg = _argmax_rows(pairs, c1)
    rep = MaxReport(big.spec, 2, best, arg, True, len(pairs), None, bound_NA(s, small))
    return NAReport(rep, lc, bool(np.array_equal(c1, c2)), len(pairs))


def bound_NA(s: int, fld: FieldParams) -> Fraction:
    n = fld.order
    root, _ = sqrt_upper(n)
    if fld.p == 2:
        return Fraction(n, 3) * (1 + (4 * s - 2) / root + Fraction(1, n))
    return Fraction(n, 2) * (1 + (2 * s - 1) / root)


def linear_sufficient(s: int, fld: FieldParams) -> bool:
    return linear_tests_sufficient(s, fld)


# -- attempt statistics ----------------------------------------------------------


@dataclass
class AttemptStats:
    field: str
    t: int
    q: int
    strategy: str
    trials: int
    mean: float
    max: int
    predicted: float
    histogram: dict[int, int] = dc_field(default_factory=dict)

    @property
    def rel_error(self) -> float:
        return abs(self.mean - self.predicted) / self.predicted

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "t": self.t,
            "q": self.q,
            "strategy": self.strategy,
            "trials": self.trials,
            "mean": self.mean,
            "max": self.max,
            "predicted": self.predicted,
            "rel_error": self.rel_error,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def predicted_attempts(q: int, t: int) -> float:
    """1 + 1/(q^{t-1} - 1): geometric with failure probability q^{1-t}."""
    return 1 + 1 / (q ** (t - 1) - 1)


def first_split_attempts(sigma: Polynomial, cs: CosetStructure, strategy: Strategy, rng: random.Random) -> int:
    if strategy == Strategy.CLASSIC:
        t = int(sigma.degree)
        k = 0
        while True:
            k += 1
            c = random_monic(sigma.field, rng.randint(1, t - 1), rng)
            if split_once(sigma, c, cs).status != Status.FAILURE:
                return k
    from .cz import AttemptTrace

    trace = AttemptTrace()
    split_node_improved(sigma, cs, strategy == Strategy.COSET, rng, trace)
    return trace.total_attempts


def expected_attempts_sim(
    fld: FieldParams,
    t: int,
    strategy: Strategy | str = Strategy.IMPROVED,
    trials: int = 10_000,
    seed: int = 1,
    q: int | None = None,
) -> AttemptStats:
    """Mean attempts to the first split of random fully split squarefree sigma."""
    strategy = Strategy.parse(strategy) if isinstance(strategy, str) else strategy
    if trials < 1:
        raise ValueError("trials >= 1")
    if t > fld.order - 1:
        raise ValueError(f"t={t} exceeds the {fld.order - 1} nonzero elements")
    if t < 2:
        raise ValueError("t >= 2")
    q = q or default_q(fld)
    cs = CosetStructure(fld, q)
    rng = random.Random(seed)
    hist: dict[int, int] = {}
    for _ in range(trials):
        sigma = product_from_roots(fld, rng.sample(range(1, fld.order), t))
        k = first_split_attempts(sigma, cs, strategy, rng)
        hist[k] = hist.get(k, 0) + 1
    total = sum(k * v for k, v in hist.items())
    return AttemptStats(fld.spec, t, q, strategy.value, trials, total / trials, max(hist), predicted_attempts(q, t), hist)
