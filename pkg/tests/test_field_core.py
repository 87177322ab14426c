import math

import pytest
from hypothesis import given, strategies as st

from ramify.errors import InsufficientPrecision
from ramify.field_core import (DEFAULT_PRECISION, FqElem, LaurentSeries,
                               default_modulus, ff_wp_solve, field, format_fq,
                               format_series, frobenius_inv, ls_p_power_split,
                               parse_fq, parse_series)

F2 = field(2)
F3 = field(3)
F4 = field(2, 2)
F9 = field(3, 2)
F25 = field(5, 2)

FIELDS = [F2, F3, F4, F9, F25, field(5), field(7)]


def series(fld, text, prec=None):
    return parse_series(fld, text, prec)


# --- field construction -----------------------------------------------------

def test_default_moduli():
    assert default_modulus(2, 2) == (1, 1, 1)       # g^2 = g + 1
    assert default_modulus(3, 2) == (1, 0, 1)       # g^2 = -1
    assert F4.gen * F4.gen == F4.gen + F4.one


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        field(2, 2, modulus=(1, 0, 1))  # x^2+1 = (x+1)^2 over F_2


def test_unsupported_characteristic():
    with pytest.raises(ValueError):
        field(17)
    with pytest.raises(ValueError):
        field(4)


@pytest.mark.parametrize('fld', FIELDS, ids=str)
def test_xq_equals_x(fld):
    for c in fld.elements():
        assert c ** fld.q == c


@pytest.mark.parametrize('fld', FIELDS, ids=str)
def test_field_axioms_exhaustive_small(fld):
    elems = list(fld.elements())
    for a in elems[:6]:
        for b in elems[:6]:
            assert a + b == b + a
            assert a * b == b * a
            if b:
                assert (a / b) * b == a
    for a in elems:
        if a:
            assert a * a.inverse() == fld.one


# --- wp solving and Frobenius ------------------------------------------------

def test_ff_wp_solve_examples():
    # wp kills all of F_3, canonical answer is the least solution
    assert ff_wp_solve(F3.elem(0)) == F3.elem(0)
    # x^2 + x only takes the value 0 on F_2
    assert ff_wp_solve(F2.elem(1)) is None
    # exhaustive search over F_4 gives g (and g^2); least in index order is g
    sols = [w for w in F4.elements() if w.frobenius() - w == F4.one]
    assert sols and ff_wp_solve(F4.one) == min(sols, key=lambda w: w.index())
    assert ff_wp_solve(F4.one) == F4.gen


@pytest.mark.parametrize('fld', [F2, F3, F4, F9, F25], ids=str)
def test_ff_wp_solve_exhaustive(fld):
    for c in fld.elements():
        w = ff_wp_solve(c)
        if w is None:
            assert all(x.frobenius() - x != c for x in fld.elements())
        else:
            assert w.frobenius() - w == c


def test_frobenius_inv_examples():
    for c in F2.elements():
        assert frobenius_inv(c) == c
    assert frobenius_inv(F4.gen) == F4.gen ** 2
    assert frobenius_inv(F9.elem(2)) == F9.elem(2)  # 2^3 = 8 = 2 in F_9


@pytest.mark.parametrize('fld', [F4, F9, F25], ids=str)
def test_frobenius_inv_is_inverse(fld):
    for c in fld.elements():
        assert frobenius_inv(c) ** fld.p == c


# --- Laurent series ---------------------------------------------------------

def random_series(draw_field):
    exps = st.lists(st.integers(min_value=-12, max_value=8), max_size=5)
    coeffs = st.lists(st.integers(min_value=0, max_value=24), min_size=5, max_size=5)
    return st.tuples(exps, coeffs).map(
        lambda ec: LaurentSeries.from_terms(
            draw_field, {e: draw_field.from_index(c % draw_field.q)
                         for e, c in zip(ec[0], ec[1])}))


@given(random_series(F9), random_series(F9))
def test_valuation_homomorphism(a, b):
    prod = a * b
    if not a.is_known_zero() and not b.is_known_zero():
        assert prod.valuation() == a.valuation() + b.valuation()
    else:
        assert prod.is_known_zero()


@given(random_series(F3), random_series(F3), random_series(F3))
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == LaurentSeries.zero(F3)


@given(random_series(F4))
def test_frobenius_is_pth_power(a):
    assert a.frobenius() == a * a  # p = 2


def test_precision_propagation():
    a = series(F3, 't^-2 + O(t^1)')
    b = series(F3, 't^-1 + t^2')
    s = a + b
    assert s.prec == 1
    assert s.terms[-2] == F3.one
    prod = a * b
    # v(a) + prec(b) = inf, v(b) + prec(a) = -1 + 1 = 0
    assert prod.prec == 0
    assert -3 in prod.terms and 0 not in prod.terms


def test_zero_to_precision_valuation():
    z = LaurentSeries.zero(F3, prec=2)
    assert z.valuation() == math.inf
    with pytest.raises(InsufficientPrecision):
        z.require_valuation()
    assert LaurentSeries.zero(F3).valuation() == math.inf


def test_truncate_default():
    a = series(F3, 't^-1 + t + t^3')
    t = a.truncate()
    assert t.prec == DEFAULT_PRECISION
    assert 3 not in t.terms and 1 in t.terms


def test_coeff_beyond_precision_raises():
    a = series(F3, 't^-1 + O(t^0)')
    with pytest.raises(InsufficientPrecision):
        a.coeff(0)
    assert a.coeff(-1) == F3.one


# --- p-th power split -------------------------------------------------------

def test_split_examples():
    c = ls_p_power_split(F3, series(F3, 't^-5'))
    assert format_series(c[1]) == 't^-2'
    assert c[0].is_known_zero() and c[2].is_known_zero()

    c = ls_p_power_split(F2, series(F2, 't^-1 + 1'))
    assert format_series(c[0]) == '1'
    assert format_series(c[1]) == 't^-1'

    c = ls_p_power_split(F9, series(F9, '2*t^2'))
    assert format_series(c[2]) == '2'


@pytest.mark.parametrize('fld', [F2, F3, F4, F9, F25], ids=str)
def test_split_recomposition(fld, rng):
    for _ in range(40):
        terms = {rng.randint(-15, 10): fld.from_index(rng.randrange(fld.q))
                 for _ in range(rng.randint(0, 5))}
        a = LaurentSeries.from_terms(fld, terms)
        parts = ls_p_power_split(fld, a)
        recomposed = LaurentSeries.zero(fld)
        for j, cj in enumerate(parts):
            recomposed = recomposed + cj.frobenius().shift(j)
        assert recomposed == a


def test_split_precision_rule():
    a = series(F3, 't^-5 + O(t^4)')
    parts = ls_p_power_split(F3, a)
    # ceil((4 - j)/3) for j = 0,1,2
    assert [c.prec for c in parts] == [2, 1, 1]


# --- text format ------------------------------------------------------------

def test_format_examples():
    assert format_series(series(F3, 't^-5+2*t^-1+1')) == 't^-5 + 2*t^-1 + 1'
    assert format_series(LaurentSeries.zero(F3)) == '0'
    assert format_series(LaurentSeries.zero(F3, prec=2)) == 'O(t^2)'
    assert format_fq(F4.gen ** 2) == 'g+1'
    assert parse_fq(F4, '(g+1)') == F4.gen ** 2


@pytest.mark.parametrize('fld', [F3, F4, F9, F25], ids=str)
def test_roundtrip_random(fld, rng):
    for _ in range(60):
        terms = {rng.randint(-9, 9): fld.from_index(rng.randrange(fld.q))
                 for _ in range(rng.randint(0, 4))}
        prec = rng.choice([math.inf, math.inf, 5, 0, -2])
        s = LaurentSeries.from_terms(fld, terms, prec)
        assert parse_series(fld, format_series(s)) == s


def test_parse_negative_coefficients():
    assert parse_series(F3, '-t^-1 + 2') == parse_series(F3, '2*t^-1 + 2')
    assert parse_series(F3, '1 - t') == parse_series(F3, '1 + 2*t')
