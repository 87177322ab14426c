import pytest
from hypothesis import given, strategies as st

from ramify.errors import DependentGenerators, InsufficientPrecision
from ramify.field_core import LaurentSeries, field, format_series, parse_series
from ramify.artin_schreier import (ASGenerator, Defect, break_of,
                                   independent_pair, normalized_pair,
                                   reduce_K, witt_S, witt_coefficients, wp)

from .bruteforce import df_K_bruteforce

F2 = field(2)
F3 = field(3)
F4 = field(2, 2)
F9 = field(3, 2)


def s(fld, text):
    return parse_series(fld, text)


# --- wp ----------------------------------------------------------------------

def test_wp_examples():
    assert wp(LaurentSeries.zero(F2)) == LaurentSeries.zero(F2)
    assert wp(s(F2, 't^-1')) == s(F2, 't^-2 + t^-1')
    # (t^-1 + 1)^3 - (t^-1 + 1) over F_3: cross terms vanish, the -a
    # contributes -t^-1, constant 1^3 - 1 = 0
    assert wp(s(F3, 't^-1 + 1')) == s(F3, 't^-3 + 2*t^-1')


@given(st.integers(min_value=-8, max_value=4), st.integers(min_value=-8, max_value=4),
       st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=8))
def test_wp_additive(e1, e2, c1, c2):
    a = LaurentSeries.monomial(F9, F9.from_index(c1), e1)
    b = LaurentSeries.monomial(F9, F9.from_index(c2), e2)
    assert wp(a + b) == wp(a) + wp(b)


# --- Witt polynomial ---------------------------------------------------------

def test_witt_coefficients():
    assert witt_coefficients(2) == {1: 1}            # S = X1*X2
    assert witt_coefficients(3) == {1: 2, 2: 2}      # 2*X1^2*X2 + 2*X1*X2^2
    # integer identity check at p = 5: (X^5 + Y^5 - (X+Y)^5)/5 evaluated at 1,1
    total = sum(witt_coefficients(5).values()) % 5
    assert total == ((1 + 1 - 2 ** 5) // 5) % 5


def test_witt_S_matches_definition():
    # evaluate both sides at concrete series over F_3
    a = s(F3, 't^-1 + 1')
    b = s(F3, '2*t^-2')
    direct = a.frobenius() + b.frobenius() - (a + b).frobenius()
    # direct is (a^p + b^p - (a+b)^p); dividing the integer polynomial by p
    # before reduction is what witt_S encodes, so check via recomposition:
    # p * S(a, b) == 0 mod p always; instead verify S(a,0) = 0 and symmetry
    assert direct == LaurentSeries.zero(F3)  # Frobenius is additive mod p
    assert witt_S(a, LaurentSeries.zero(F3)) == LaurentSeries.zero(F3)
    assert witt_S(a, b) == witt_S(b, a)


def test_witt_S_p2_is_product():
    a = s(F2, 't^-3 + t^-1')
    b = s(F2, 't^-2 + 1')
    assert witt_S(a, b) == a * b


# --- reduce_K ----------------------------------------------------------------

def test_reduce_examples():
    g = reduce_K(s(F2, 't^-2'))
    assert format_series(g.value) == 't^-1' and g.df == Defect.finite(-1)
    g = reduce_K(s(F2, 't^-3'))
    assert format_series(g.value) == 't^-3' and g.df == Defect.finite(-3)
    g = reduce_K(s(F2, '1 + t'))
    assert format_series(g.value) == '1' and g.df == Defect.zero()
    assert reduce_K(s(F2, 't^-4 + t^-2')).df == Defect.infinite()


def test_break_examples():
    assert break_of(s(F2, 't^-3')) == 3
    assert break_of(s(F2, 't^-4')) == 1
    assert break_of(s(F3, 't^2')) == 'trivial'
    assert break_of(s(F3, '1')) == 'unramified'


def test_reduce_idempotent(rng):
    for fld in (F2, F3, F4, F9):
        for _ in range(30):
            terms = {rng.randint(-12, 3): fld.from_index(rng.randrange(fld.q))
                     for _ in range(rng.randint(1, 5))}
            g = reduce_K(LaurentSeries.from_terms(fld, terms))
            again = reduce_K(g.value)
            assert again.df == g.df
            assert again.value == g.value


def test_reduce_coset_soundness(rng):
    for fld in (F2, F3, F9):
        for _ in range(40):
            terms = {rng.randint(-12, 3): fld.from_index(rng.randrange(fld.q))
                     for _ in range(rng.randint(1, 5))}
            kappa = LaurentSeries.from_terms(fld, terms)
            g = reduce_K(kappa)
            assert reduce_K(g.value - kappa).df == Defect.infinite()


def test_reduce_matches_bruteforce(rng):
    for fld in (F2, F3):
        for _ in range(25):
            terms = {rng.randint(-12, 2): fld.from_index(rng.randrange(fld.q))
                     for _ in range(rng.randint(1, 5))}
            kappa = LaurentSeries.from_terms(fld, terms)
            assert reduce_K(kappa).df == df_K_bruteforce(kappa, 12)


def test_reduce_matches_bruteforce_extension(rng):
    for _ in range(10):
        terms = {rng.randint(-8, 2): F4.from_index(rng.randrange(4))
                 for _ in range(rng.randint(1, 4))}
        kappa = LaurentSeries.from_terms(F4, terms)
        assert reduce_K(kappa).df == df_K_bruteforce(kappa, 8)


def test_df_ultrametric(rng):
    for _ in range(60):
        terms1 = {rng.randint(-10, 1): F3.from_index(rng.randrange(3))
                  for _ in range(rng.randint(1, 4))}
        terms2 = {rng.randint(-10, 1): F3.from_index(rng.randrange(3))
                  for _ in range(rng.randint(1, 4))}
        k1 = LaurentSeries.from_terms(F3, terms1)
        k2 = LaurentSeries.from_terms(F3, terms2)
        d1 = reduce_K(k1).df.as_valuation()
        d2 = reduce_K(k2).df.as_valuation()
        d12 = reduce_K(k1 + k2).df.as_valuation()
        assert d12 >= min(d1, d2)
        if d1 != d2:
            assert d12 == min(d1, d2)


def test_reduce_insufficient_precision():
    # t^-3 folds onto t^-1, which collides with the unknown region
    with pytest.raises(InsufficientPrecision):
        reduce_K(parse_series(F3, 't^-3 + O(t^-1)'))
    # with the unknown region starting at 0 the fold target is determined
    assert reduce_K(parse_series(F3, 't^-3 + O(t^0)')).df == Defect.finite(-1)
    # a surviving constant cannot be certified without the constant term
    with pytest.raises(InsufficientPrecision):
        reduce_K(parse_series(F3, 't + O(t^2)').truncate(0))
    # a coprime-to-p leading term certifies the defect even when the tail
    # is unknown
    g = reduce_K(parse_series(F3, 't^-4 + O(t^0)'))
    assert g.df == Defect.finite(-4)


# --- independent_pair ---------------------------------------------------------

def test_independent_examples():
    ok, pair = independent_pair(s(F3, 't^-1'), s(F3, 't^-5'))
    assert ok and format_series(pair[0].value) == 't^-1'
    assert format_series(pair[1].value) == 't^-5'

    ok, pair = independent_pair(s(F3, 't^-1'), s(F3, '2*t^-1'))
    assert not ok and pair is None

    ok, pair = independent_pair(s(F4, 't^-1'), s(F4, 'g*t^-1'))
    assert ok
    # all three nontrivial combinations stay ramified with the same break
    for a, b in ((1, 0), (0, 1), (1, 1)):
        combo = pair[0].value.scale(a) + pair[1].value.scale(b)
        assert reduce_K(combo).df == Defect.finite(-1)


def test_pair_ordering_swaps():
    ok, pair = independent_pair(s(F3, 't^-5'), s(F3, 't^-1'))
    assert ok and pair[0].break_ == 1 and pair[1].break_ == 5


def test_pair_renormalizes_equal_leading():
    # leading coefficients agree over F_4 only after scaling by 1; the fold
    # drops the second break from 3 to 1
    k1 = s(F4, 't^-3')
    k2 = s(F4, 't^-3 + g*t^-1')
    ok, pair = independent_pair(k1, k2)
    assert ok
    assert (pair[0].break_, pair[1].break_) == (1, 3)
    assert format_series(pair[0].value) == 'g*t^-1'


def test_dependent_via_unramified_combo():
    # kappa2 - 2*kappa1 = 1, which is unramified over F_3
    ok, pair = independent_pair(s(F3, 't^-1'), s(F3, '2*t^-1 + 1'))
    assert not ok
    with pytest.raises(DependentGenerators):
        normalized_pair(s(F3, 't^-1'), s(F3, '2*t^-1 + 1'))
