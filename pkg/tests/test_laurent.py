import pytest
from hypothesis import given, strategies as st

from koppelman.laurent import (LaurentPoly, Semigroup, member, parse_laurent, pullback_monomial, residue,
                               semigroup_representation)


def test_residue_examples():
    assert residue(LaurentPoly.monomial(-1)) == 1
    assert residue(parse_laurent("tau**3 + 5*tau**-2")) == 0


@pytest.mark.parametrize("c", [2, 4, 6])
def test_moment_integrand_residue(c):
    for k in range(0, 2 * c):
        for m in range(0, 2 * c):
            assert residue(LaurentPoly.monomial(k + m - c)) == (1 if k + m == c - 1 else 0)


def test_membership_examples():
    S = Semigroup(2, 3)
    assert not member(S, 1)
    assert member(S, 0)
    S = Semigroup(3, 5)
    assert not member(S, 7)
    assert member(S, 8)


@pytest.mark.parametrize("r,s,gaps", [(2, 3, [1]), (2, 5, [1, 3]), (3, 4, [1, 2, 5]), (3, 5, [1, 2, 4, 7])])
def test_gaps(r, s, gaps):
    assert Semigroup(r, s).gaps() == gaps


def test_pullback_examples():
    assert pullback_monomial((2, 3), 1, 0) == LaurentPoly.monomial(3)
    assert pullback_monomial((2, 3), 0, 0) == LaurentPoly.monomial(0)
    assert pullback_monomial((2, 3), 1, 1) == LaurentPoly.monomial(5)


def test_invalid_semigroups():
    with pytest.raises(ValueError):
        Semigroup(2, 4)
    with pytest.raises(ValueError):
        Semigroup(3, 2)
    with pytest.raises(ValueError):
        member(Semigroup(2, 3), -1)


@given(st.sampled_from([(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)]), st.integers(0, 60))
def test_representation_matches_membership(rs, k):
    S = Semigroup(*rs)
    rep = semigroup_representation(S, k)
    assert (rep is not None) == member(S, k)
    if rep is not None:
        i, j = rep
        assert rs[1] * i + rs[0] * j == k


@given(st.sampled_from([(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)]), st.integers(0, 60))
def test_everything_from_conductor_on_is_a_member(rs, k):
    S = Semigroup(*rs)
    if k >= S.conductor:
        assert member(S, k)


@given(st.dictionaries(st.integers(-5, 5), st.integers(-4, 4), max_size=4),
       st.dictionaries(st.integers(-5, 5), st.integers(-4, 4), max_size=4))
def test_product_is_exact(a, b):
    p, q = LaurentPoly(a), LaurentPoly(b)
    tau = 0.7 + 0.2j
    assert abs((p * q)(tau) - p(tau) * q(tau)) < 1e-9 * (1 + abs(p(tau) * q(tau)))


def test_parse_round_trip():
    p = parse_laurent("1 + 2*tau - tau**-3")
    assert p[0] == 1 and p[1] == 2 and p[-3] == -1
    with pytest.raises(ValueError):
        parse_laurent("tau**x")
