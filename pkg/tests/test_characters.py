import pytest
from hypothesis import given, strategies as st

from czsplit.characters import (
    CosetStructure,
    Eisenstein,
    chi,
    chi2,
    chi3,
    coset_index,
    gauss_sum_cubic,
    indicator,
    indicator_by_characters,
    jacobi_like_sum,
    make_cosets,
    pair_sum,
    total_sum,
)
from czsplit.gf import FieldError, embed_subfield, make_field
from czsplit.oracle import lifted_character

W = Eisenstein(0, 1)
ints = st.integers(-50, 50)
eis = st.builds(Eisenstein, ints, ints)


def test_eisenstein_basics():
    assert W * W == Eisenstein(-1, -1)
    assert W**3 == 1
    assert 1 + W + W * W == 0
    assert W.conj() == W * W
    assert Eisenstein(3, 2).conj() == Eisenstein(1, -2)
    assert Eisenstein.parse(str(Eisenstein(-4, 7))) == Eisenstein(-4, 7)
    assert Eisenstein.parse("5") == 5
    assert Eisenstein(9, -3).divide_exact(3) == Eisenstein(3, -1)
    with pytest.raises(ValueError):
        Eisenstein(1, 1).divide_exact(2)


@given(eis, eis, eis)
def test_eisenstein_ring(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * x.conj()).is_rational() and (x * x.conj()).a == x.norm()


def test_coset_structure():
    F = make_field(2, 4)
    cs = make_cosets(F)
    assert cs.q == 3 and cs.ell == 5
    assert F.pow(cs.omega, 3) == 1 and cs.omega != 1
    assert sorted(sum(cs.members, ())) == list(range(1, 16))
    with pytest.raises(FieldError):
        CosetStructure(F, 7)
    with pytest.raises(FieldError):
        make_cosets(make_field(2, 3))  # 3 does not divide 7


def test_coset_index_examples():
    F = make_field(2, 4)
    cs = make_cosets(F)
    a = F.alpha
    assert coset_index(1, cs) == 0
    assert coset_index(a, cs) == 1
    assert coset_index(F.pow(a, 3), cs) == 0
    assert coset_index(0, cs) is None
    assert chi(F.pow(a, 2), cs) == 2


def test_coset_table_matches_exponentiation(field):
    for q in (2, 3, 5):
        if (field.order - 1) % q:
            continue
        cs = CosetStructure(field, q)
        tab = cs.table
        assert all(tab[x] == cs.index(x) for x in range(1, field.order))
        assert tab[0] == -1


def test_chi_examples():
    F = make_field(2, 4)
    cs = make_cosets(F)
    assert chi3(1, cs) == Eisenstein(1, 0)
    assert chi3(0, cs) == Eisenstein(0, 0)
    assert chi3(F.pow(F.alpha, 2), cs) == Eisenstein(-1, -1)
    cs7 = make_cosets(make_field(7))
    assert chi2(2, cs7) == 1 and chi2(0, cs7) == 0 and chi2(3, cs7) == -1
    with pytest.raises(ValueError):
        chi2(1, cs)


@pytest.mark.parametrize("pm", [(2, 2), (2, 4), (2, 6), (2, 8), (3, 2), (7, 1), (11, 1), (5, 3)])
def test_characters_are_multiplicative(pm):
    F = make_field(*pm)
    cs = make_cosets(F)
    val = chi3 if cs.q == 3 else chi2
    vals = [val(x, cs) for x in range(F.order)]
    step = 1 if F.order <= 64 else 7
    for x in range(1, F.order, step):
        assert vals[x] ** cs.q == 1
        for y in range(1, F.order):
            assert vals[F.mul(x, y)] == vals[x] * vals[y]


@pytest.mark.parametrize("pm", [(2, 4), (2, 6), (7, 1), (11, 1), (3, 2), (5, 1), (13, 1)])
def test_orthogonality(pm):
    cs = make_cosets(make_field(*pm))
    assert total_sum(cs) == 0
    assert all(pair_sum(b, cs) == -1 for b in range(1, cs.field.order))


def test_pair_sum_examples():
    assert pair_sum(1, make_cosets(make_field(2, 4))) == Eisenstein(-1, 0)
    assert pair_sum(3, make_cosets(make_field(7))) == -1
    with pytest.raises(ValueError):
        pair_sum(0, make_cosets(make_field(7)))


@pytest.mark.parametrize("m, expected", [(2, 2), (4, -4), (6, 8), (8, -16), (10, 32)])
def test_cubic_gauss_sum(m, expected):
    g = gauss_sum_cubic(make_cosets(make_field(2, m)))
    assert g == Eisenstein(expected, 0)


def test_gauss_sum_needs_even_m():
    with pytest.raises(ValueError):
        gauss_sum_cubic(make_cosets(make_field(7)))


def test_jacobi_sum_norm():
    # |J(chi, chi)|^2 = n for nontrivial chi with chi^2 nontrivial
    for m in (4, 6, 8):
        cs = make_cosets(make_field(2, m))
        assert jacobi_like_sum(1, cs).norm() == 2**m


def test_indicator():
    F = make_field(2, 4)
    cs = make_cosets(F)
    assert indicator(F.alpha, 1, cs) == 1
    assert indicator(F.alpha, 0, cs) == 0
    for x in range(1, 16):
        assert sum(indicator(x, h, cs) for h in range(3)) == 1
        for h in range(3):
            assert indicator_by_characters(x, h, cs) == indicator(x, h, cs)
    cs7 = make_cosets(make_field(7))
    assert all(indicator_by_characters(x, h, cs7) == indicator(x, h, cs7) for x in range(1, 7) for h in (0, 1))
    with pytest.raises(ValueError):
        indicator(0, 0, cs)


@pytest.mark.parametrize("small, big", [((2, 2), (2, 4)), ((2, 4), (2, 8)), ((3, 2), (3, 4)), ((2, 2), (2, 6))])
def test_lifted_character_is_a_character_of_the_norm(small, big):
    """chi' = chi^eps o N on the whole big field, for one fixed eps."""
    S, B = make_field(*small), make_field(*big)
    lc = lifted_character(S, B)
    assert lc.mismatches == 0
    # eps from first principles: N(alpha) = alpha^((|B|-1)/(|S|-1)) must land in coset 1/eps
    e = embed_subfield(S, B)
    n_alpha = e.preimage(B.pow(B.alpha, (B.order - 1) // (S.order - 1)))
    ell = (S.order - 1) // lc.q
    h = next(k for k in range(lc.q) if S.pow(n_alpha, ell) == S.pow(S.alpha, k * ell))
    assert (h * lc.epsilon) % lc.q == 1


def test_lift_conjugation_in_gf256():
    # with the default generators the lift from GF(16) is the conjugate character
    assert lifted_character(make_field(2, 4), make_field(2, 8)).epsilon == 2
