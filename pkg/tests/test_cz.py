import itertools
import random

import pytest

from czsplit.characters import CosetStructure, make_cosets
from czsplit.cz import (
    InvariantViolation,
    SplitProblem,
    SplitValidationError,
    Status,
    Strategy,
    distinct_degree,
    edf,
    edf_classic,
    edf_direct_degree_s,
    edf_improved,
    factor,
    linear_tests_sufficient,
    qth_split,
    split_once,
    squarefree_decomposition,
)
from czsplit.gf import FieldError, embed_subfield, make_field
from czsplit.oracle import expected_attempts_sim
from czsplit.poly import Polynomial, gcd, is_irreducible, parse_poly, product_from_roots, random_monic

GF2, GF3, GF4, GF7 = make_field(2), make_field(3), make_field(2, 2), make_field(7)
GF9, GF16, GF256 = make_field(3, 2), make_field(2, 4), make_field(2, 8)


def roots_poly(fld, roots):
    return product_from_roots(fld, roots)


def lin(fld, r):
    """Monic z - r."""
    return Polynomial(fld, (fld.neg(r), 1))


def multiset(fs):
    return sorted(f.coeffs for f in fs)


# -- split_once -------------------------------------------------------------


def test_split_once_gf4_singleton_cosets():
    w = GF4.alpha
    sigma = Polynomial(GF4, (1, 1, 1))
    out = split_once(sigma, Polynomial.z(GF4), make_cosets(GF4))
    assert out.status == Status.SPLIT
    assert multiset(out.parts) == multiset([lin(GF4, w), lin(GF4, GF4.pow(w, 2))])


def test_split_once_failure_reports_coset():
    a3 = GF16.pow(GF16.alpha, 3)
    sigma = roots_poly(GF16, [1, a3])
    out = split_once(sigma, Polynomial.z(GF16), make_cosets(GF16))
    assert out.status == Status.FAILURE and out.observed_coset == 0 and out.parts == ()


def test_split_once_linear_factor_of_sigma():
    sigma = roots_poly(GF7, [3, 5])
    out = split_once(sigma, lin(GF7, 3), make_cosets(GF7))
    assert out.status == Status.ALREADY_FACTOR
    assert multiset(out.parts) == multiset([lin(GF7, 3), lin(GF7, 5)])


def test_split_once_nonlinear_common_factor():
    sigma = roots_poly(GF7, [1, 2, 4])
    c = roots_poly(GF7, [2, 6])
    out = split_once(sigma, c, make_cosets(GF7))
    assert out.status == Status.ALREADY_FACTOR
    assert multiset(out.parts) == multiset([lin(GF7, 2), roots_poly(GF7, [1, 4])])


def test_split_once_parts_are_coprime_and_multiply_back():
    cs = make_cosets(GF256)
    rng = random.Random(2)
    for _ in range(50):
        sigma = roots_poly(GF256, rng.sample(range(1, 256), 6))
        out = split_once(sigma, Polynomial.linear(GF256, rng.randrange(256)), cs)
        if out.status == Status.FAILURE:
            continue
        prod = Polynomial(GF256, (1,))
        for p_ in out.parts:
            assert p_.is_monic() and p_.degree >= 1
            prod = prod * p_
        assert prod == sigma
        for a, b in itertools.combinations(out.parts, 2):
            assert gcd(a, b).is_one()


def test_split_once_preconditions():
    cs = make_cosets(GF16)
    with pytest.raises(ValueError):
        split_once(Polynomial(GF16, (1, 1)), Polynomial.z(GF16), cs)
    with pytest.raises(ValueError):
        split_once(roots_poly(GF16, [1, 2]), Polynomial(GF16, (3,)), cs)
    with pytest.raises(FieldError):
        split_once(roots_poly(GF7, [1, 2]), Polynomial.z(GF7), cs)


def test_failure_means_one_common_coset():
    cs = make_cosets(GF16)
    for roots in itertools.combinations(range(1, 16), 3):
        out = split_once(roots_poly(GF16, roots), Polynomial.z(GF16), cs)
        same = len({cs.index(r) for r in roots}) == 1
        assert (out.status == Status.FAILURE) == same
        if same:
            assert out.observed_coset == cs.index(roots[0])


# -- equal-degree splitting ---------------------------------------------------


def test_edf_improved_gf16_four_roots():
    a = GF16.alpha
    roots = [1, a, GF16.pow(a, 2), GF16.pow(a, 3)]
    fs, trace = edf_improved(SplitProblem(roots_poly(GF16, roots), validate=True))
    assert multiset(fs) == multiset(lin(GF16, r) for r in roots)
    assert trace.total_attempts == len(trace.attempts) >= 1


def test_edf_improved_gf7_splits_at_once():
    fs, trace = edf_improved(SplitProblem(parse_poly("z^2-1", GF7)))
    assert multiset(fs) == multiset([lin(GF7, 1), lin(GF7, 6)])
    assert trace.total_attempts == 1
    assert trace.attempts[0].test_poly == Polynomial.z(GF7)


def test_edf_degenerate_input():
    f = Polynomial.linear(GF16, GF16.alpha)
    fs, trace = edf_improved(SplitProblem(f))
    assert fs == [f] and trace.total_attempts == 0


def test_trace_last_attempt_per_node_succeeds():
    rng = random.Random(4)
    for strat in (Strategy.IMPROVED, Strategy.COSET, Strategy.CLASSIC):
        sigma = roots_poly(GF256, rng.sample(range(1, 256), 9))
        fs, trace = edf(SplitProblem(sigma, strategy=strat), seed=3)
        assert len(fs) == 9
        for node in trace.by_node():
            assert all(r.outcome.status == Status.FAILURE for r in node[:-1])
            assert node[-1].outcome.status != Status.FAILURE


def test_seed_zero_walks_betas_in_encoding_order():
    # both roots are cubes, so z fails and so does z+1 whenever the shifted roots share a coset
    cs = make_cosets(GF16)
    sigma = roots_poly(GF16, cs.members[0][:2])
    _, trace = edf_improved(SplitProblem(sigma))
    tests = [r.test_poly for r in trace.attempts]
    assert tests[0] == Polynomial.z(GF16)
    assert [t.coeffs[0] for t in tests[1:]] == list(range(1, len(tests)))


def test_coset_restriction_draws_from_the_observed_coset():
    cs = make_cosets(GF256)
    roots = list(cs.members[1][:5])
    _, trace = edf_improved(SplitProblem(roots_poly(GF256, roots), strategy=Strategy.COSET))
    first = trace.by_node()[0]
    assert first[0].outcome.observed_coset == 1
    assert all(cs.index(r.test_poly.coeffs[0]) == 1 for r in first[1:])
    assert trace.coset_restricted


def test_coset_restriction_odd_characteristic_uses_negated_coset():
    F = make_field(101)
    cs = make_cosets(F)
    roots = list(cs.members[0][:4])
    _, trace = edf_improved(SplitProblem(roots_poly(F, roots), strategy=Strategy.COSET))
    first = trace.by_node()[0]
    negs = {F.neg(y) for y in cs.members[first[0].outcome.observed_coset]}
    assert all(r.test_poly.coeffs[0] in negs for r in first[1:])


@pytest.mark.parametrize("fld", [GF16, GF7], ids=lambda f: f.spec)
@pytest.mark.parametrize("strategy", [Strategy.IMPROVED, Strategy.COSET])
def test_attempts_never_exceed_ell_on_all_pairs(fld, strategy):
    cs = make_cosets(fld)
    for pair in itertools.combinations(range(1, fld.order), 2):
        _, trace = edf_improved(SplitProblem(roots_poly(fld, pair), strategy=strategy))
        assert trace.total_attempts <= cs.ell


def test_strategies_agree():
    rng = random.Random(11)
    for fld in (GF16, GF7, GF9, GF256, make_field(101)):
        sigma = roots_poly(fld, rng.sample(range(1, fld.order), min(6, fld.order - 1)))
        results = {s: multiset(edf(SplitProblem(sigma, strategy=s), seed=5)[0]) for s in Strategy}
        assert len(set(map(tuple, results.values()))) == 1


def test_classic_seeds_give_same_factors():
    sigma = roots_poly(GF16, [1, 3, 5, 7, 9])
    f1, t1 = edf_classic(SplitProblem(sigma), seed=1)
    f2, t2 = edf_classic(SplitProblem(sigma), seed=2)
    assert multiset(f1) == multiset(f2)
    assert [r.test_poly for r in t1.attempts] != [r.test_poly for r in t2.attempts]


def test_classic_mean_attempts_t2():
    st = expected_attempts_sim(GF256, 2, Strategy.CLASSIC, trials=10_000, seed=3)
    assert abs(st.mean - 1.5) <= 0.05 * 1.5


def test_validation_flag():
    with pytest.raises(SplitValidationError):
        SplitProblem(roots_poly(GF16, [0, 1]), validate=True).check()
    with pytest.raises(SplitValidationError):
        SplitProblem(roots_poly(GF16, [1, 1, 2]), validate=True).check()
    with pytest.raises(SplitValidationError):
        SplitProblem(Polynomial(GF2, (1, 1, 1)), s=1, validate=True).check()
    with pytest.raises(SplitValidationError):
        edf_improved(SplitProblem(roots_poly(GF16, [1, 1, 2]), validate=True))
    SplitProblem(Polynomial(GF2, (1, 1, 1)), s=2, validate=True).check()


def test_prop1_cap_raises_instead_of_looping(monkeypatch):
    import czsplit.cz as cz

    calls = []

    def always_fail(sigma, c, cs, exponent=None):
        calls.append(c)
        return cz.SplitOutcome(Status.FAILURE, observed_coset=0)

    monkeypatch.setattr(cz, "split_once", always_fail)
    with pytest.raises(InvariantViolation):
        edf_improved(SplitProblem(roots_poly(GF16, [1, 2])))
    assert len(calls) == make_cosets(GF16).ell


# -- odd m in characteristic 2 -----------------------------------------------


@pytest.mark.parametrize("m", [1, 3, 5])
def test_lift_for_odd_m(m):
    F = make_field(2, m)
    rng = random.Random(m)
    for _ in range(5):
        roots = rng.sample(range(1, F.order), min(F.order - 1, 4))
        sigma = roots_poly(F, roots)
        fs, trace = edf_improved(SplitProblem(sigma))
        assert all(f.field == F for f in fs)
        assert multiset(fs) == multiset(lin(F, r) for r in roots)
        if trace.attempts:
            assert trace.attempts[0].sigma.field == make_field(2, 2 * m)


def test_lift_recombines_conjugates_for_quadratics():
    # over GF(8), irreducible quadratics split over GF(64) into conjugate linear pairs
    F = make_field(2, 3)
    quads = [Polynomial(F, (a, b, 1)) for a in range(1, 8) for b in range(8)]
    quads = [q for q in quads if is_irreducible(q)][:3]
    sigma = quads[0] * quads[1] * quads[2]
    fs, _ = edf_direct_degree_s(SplitProblem(sigma, s=2, validate=True))
    assert multiset(fs) == multiset(quads)


# -- direct degree-s ----------------------------------------------------------


def irreducibles(fld, s):
    out = []
    for k in range(fld.order**s):
        coeffs = [(k // fld.order**i) % fld.order for i in range(s)] + [1]
        f = Polynomial(fld, tuple(coeffs))
        if is_irreducible(f):
            out.append(f)
    return out


def test_direct_gf4_two_quadratics():
    q = irreducibles(GF4, 2)
    assert len(q) == 6  # (16 - 4) / 2
    sigma = q[0] * q[3]
    fs, trace = edf_direct_degree_s(SplitProblem(sigma, s=2, strategy=Strategy.DIRECT, validate=True))
    assert multiset(fs) == multiset([q[0], q[3]])
    assert all(is_irreducible(f) for f in fs)
    assert all(r.test_poly.degree == 1 for r in trace.attempts)


def test_direct_all_pairs_over_gf16_use_linear_tests():
    qs = irreducibles(GF16, 2)
    assert linear_tests_sufficient(2, GF16)
    for a, b in itertools.combinations(qs[:24], 2):
        fs, trace = edf_direct_degree_s(SplitProblem(a * b, s=2))
        assert multiset(fs) == multiset([a, b])
        assert trace.total_attempts <= 13


def test_direct_fallback_when_linear_tests_not_guaranteed():
    assert not linear_tests_sufficient(2, GF4)
    assert not linear_tests_sufficient(3, GF9)
    qs = irreducibles(GF4, 3)
    rng = random.Random(0)
    for _ in range(10):
        a, b, c = rng.sample(qs, 3)
        fs, _ = edf_direct_degree_s(SplitProblem(a * b * c, s=3))
        assert multiset(fs) == multiset([a, b, c])


def test_linear_sufficiency_thresholds():
    assert linear_tests_sufficient(2, GF16)  # 6/4 < 2
    assert not linear_tests_sufficient(3, GF16)  # 10/4
    assert not linear_tests_sufficient(2, make_field(3, 2))  # 3/3 is not < 1
    assert linear_tests_sufficient(2, make_field(3, 4))  # 3/9


def test_conjugate_roots_share_cosets():
    big = make_field(2, 8)
    emb = embed_subfield(GF16, big)
    cs = make_cosets(big)
    for z1 in range(1, 256, 5):
        if emb.contains(z1):
            continue
        z2 = big.pow(z1, 16)
        for b in range(16):
            beta = emb.image(b)
            assert cs.index(big.add(z1, beta)) == cs.index(big.add(z2, beta))


# -- general q ----------------------------------------------------------------


def test_qth_split_q5():
    cs = CosetStructure(GF256, 5)
    assert len(cs.roots_of_unity) == 5
    rng = random.Random(8)
    for _ in range(20):
        roots = rng.sample(range(1, 256), rng.randint(2, 10))
        fs, _ = qth_split(SplitProblem(roots_poly(GF256, roots), q=5))
        assert multiset(fs) == multiset(lin(GF256, r) for r in roots)


def test_qth_split_q3_matches_improved():
    sigma = roots_poly(GF16, [2, 3, 7, 11])
    a = qth_split(SplitProblem(sigma, q=3), seed=4)
    b = edf_improved(SplitProblem(sigma), seed=4)
    assert a[0] == b[0]
    assert [r.test_poly for r in a[1].attempts] == [r.test_poly for r in b[1].attempts]


def test_qth_split_rejects_bad_q():
    with pytest.raises(FieldError):
        qth_split(SplitProblem(roots_poly(GF16, [1, 2]), q=7))
    with pytest.raises(ValueError):
        qth_split(SplitProblem(roots_poly(GF16, [1, 2]), q=15))


def test_q5_success_rate():
    st = expected_attempts_sim(GF256, 2, trials=10_000, seed=9, q=5)
    rate = st.trials / (st.mean * st.trials)
    assert abs(rate - 0.8) <= 0.05 * 0.8


# -- pipeline -----------------------------------------------------------------


def test_squarefree_examples():
    assert squarefree_decomposition(Polynomial(GF2, (1, 0, 1))) == [(Polynomial(GF2, (1, 1)), 2)]
    assert squarefree_decomposition(Polynomial(GF2, (0, 0, 1))) == [(Polynomial.z(GF2), 2)]
    f = lin(GF7, 1) * lin(GF7, 2) ** 3
    assert squarefree_decomposition(f) == [(lin(GF7, 1), 1), (lin(GF7, 2), 3)]
    with pytest.raises(ValueError):
        squarefree_decomposition(Polynomial(GF7, (3,)))


def test_squarefree_pth_powers():
    # (z+1)^2 (z+2)^3 (z+3)^6 over GF(3) mixes pth powers with ordinary repeats
    f = lin(GF3, 2) ** 2 * lin(GF3, 1) ** 3 * Polynomial.z(GF3) ** 6
    dec = squarefree_decomposition(f)
    prod = Polynomial(GF3, (1,))
    for g, k in dec:
        prod = prod * g**k
    assert prod == f
    assert [k for _, k in dec] == [2, 3, 6]


def test_distinct_degree_examples():
    f = Polynomial(GF2, (1, 1, 1)) * Polynomial(GF2, (1, 1))
    assert distinct_degree(f) == [(Polynomial(GF2, (1, 1)), 1), (Polynomial(GF2, (1, 1, 1)), 2)]
    g = roots_poly(GF16, [1, 2, 3])
    assert distinct_degree(g) == [(g, 1)]
    with pytest.raises(SplitValidationError):
        distinct_degree(lin(GF7, 1) ** 2)


def test_distinct_degree_gf4_one_two_three():
    rng = random.Random(6)
    parts = [rng.choice(irreducibles(GF4, s)) for s in (1, 2, 3)]
    f = parts[0] * parts[1] * parts[2]
    assert distinct_degree(f) == [(parts[0], 1), (parts[1], 2), (parts[2], 3)]


def test_factor_examples():
    r = factor(parse_poly("z^3+z", GF2))
    assert [(g.coeffs, k) for g, k in r.factors] == [((0, 1), 1), ((1, 1), 2)]
    q = irreducibles(GF16, 3)[5]
    assert [(g, k) for g, k in factor(q).factors] == [(q, 1)]
    rng = random.Random(7)
    f = Polynomial(GF9, tuple(rng.randrange(9) for _ in range(10)) + (5,))
    r = factor(f, seed=7)
    assert r.reconstruct() == f and r.leading == 5
    assert all(is_irreducible(g) for g, _ in r.factors)


@pytest.mark.parametrize("fld", [GF2, GF3, GF4], ids=lambda f: f.spec)
def test_factor_exhaustive_small(fld):
    n = fld.order
    for d in range(1, 5):
        for k in range(n**d):
            f = Polynomial(fld, tuple((k // n**i) % n for i in range(d)) + (1,))
            r = factor(f)
            assert r.reconstruct() == f
            assert all(is_irreducible(g) and g.is_monic() for g, _ in r.factors)


def test_factor_is_deterministic_under_seed():
    f = random_monic(GF256, 12, 1)
    a, b = factor(f, seed=3), factor(f, seed=3)
    assert a.factors == b.factors
    assert [r.test_poly for r in a.trace.attempts] == [r.test_poly for r in b.trace.attempts]


def test_factor_rejects_constants():
    with pytest.raises(ValueError):
        factor(Polynomial(GF7, (3,)))
