import math
from fractions import Fraction

import pytest

from ramify.errors import (InsufficientPrecision, PreconditionViolated,
                           WindowTooSmall)
from ramify.field_core import LaurentSeries, field, parse_series
from ramify.artin_schreier import Defect, reduce_K, wp
from ramify.cp_ext import (CpExtension, ExtElement, ext_valuation,
                           hasse_herbrand, reduce_LK_oracle, witt_term, wp_ext)
from ramify.harness import random_ext_element, random_instance

F2 = field(2)
F3 = field(3)
F9 = field(3, 2)

EXT31 = CpExtension(parse_series(F3, 't^-1'))   # p=3, b=1
EXT23 = CpExtension(parse_series(F2, 't^-3'))   # p=2, b=3
EXT21 = CpExtension(parse_series(F2, 't^-1'))


def test_extension_requires_ramified_base():
    with pytest.raises(PreconditionViolated):
        CpExtension(parse_series(F3, 't^2'))
    # non-reduced input is reduced on the way in
    assert CpExtension(parse_series(F2, 't^-4')).b == 1


def test_ext_valuation_examples():
    assert EXT31.monomial(1, 1, 0).valuation() == 3
    assert EXT31.monomial(1, 0, 1).valuation() == -1
    assert EXT31.monomial(1, -1, 2).valuation() == -5
    assert EXT23.monomial(1, -5, 1).valuation() == -13
    assert ext_valuation(EXT31.zero()) == math.inf


def test_ext_valuation_precision():
    e = ExtElement(EXT31, (LaurentSeries.zero(F3),
                           parse_series(F3, 'O(t^0)'),
                           LaurentSeries.zero(F3)))
    with pytest.raises(InsufficientPrecision):
        e.valuation()


def test_hasse_herbrand():
    ext = EXT23  # b = 3, p = 2
    for x in (0, 1, Fraction(5, 2), 3):
        assert hasse_herbrand(ext, x) == Fraction(x)
    assert hasse_herbrand(EXT31, 5, 'psi') == 13       # 1 + 3*(5-1)
    assert hasse_herbrand(ext, 7) == 3 + Fraction(4, 2)
    for x in (Fraction(1, 3), 2, Fraction(17, 4), 40):
        assert hasse_herbrand(ext, hasse_herbrand(ext, x, 'psi'), 'phi') == Fraction(x)
    with pytest.raises(PreconditionViolated):
        hasse_herbrand(ext, -1)


def test_wp_ext_examples():
    y = EXT31.monomial(1, 0, 1)
    assert wp_ext(y) == ExtElement.from_K(EXT31, EXT31.beta)
    # p=2: wp(mu*y) = wp(mu)*y + mu^2*beta
    mu = parse_series(F2, 't^-1')
    e = ExtElement(EXT21, (LaurentSeries.zero(F2), mu))
    expect = ExtElement(EXT21, (mu * mu * EXT21.beta, wp(mu)))
    assert wp_ext(e) == expect


def test_wp_ext_restricts_to_base_wp(rng):
    for _ in range(20):
        terms = {rng.randint(-6, 3): F9.from_index(rng.randrange(9))
                 for _ in range(rng.randint(1, 4))}
        a = LaurentSeries.from_terms(F9, terms)
        ext = CpExtension(parse_series(F9, 't^-2'))
        assert wp_ext(ExtElement.from_K(ext, a)) == ExtElement.from_K(ext, wp(a))


def test_oracle_spec_cases():
    _, d = reduce_LK_oracle(EXT31, EXT31.monomial(1, 1, 1))
    assert d == Defect.infinite()
    out, d = reduce_LK_oracle(EXT31, EXT31.monomial(1, -1, 2))
    assert d == Defect.finite(-5)
    assert out == EXT31.monomial(1, -1, 2)  # already reduced
    _, d = reduce_LK_oracle(EXT31, EXT31.monomial(1, -4, 1))
    assert d == Defect.finite(-11)


def test_oracle_k_elements_are_trivial():
    e = ExtElement.from_K(EXT31, parse_series(F3, 't^-7 + 2'))
    _, d = reduce_LK_oracle(EXT31, e)
    assert d == Defect.infinite()


def test_oracle_residue_test_at_break():
    # level -b carries the residue obstruction: c*y survives iff c is not
    # in wp(F_q)
    c = F3.elem(1)  # 1 not in wp(F_3) = {0}
    _, d = reduce_LK_oracle(EXT31, EXT31.monomial(c, 0, 1))
    assert d == Defect.finite(-1)
    _, d = reduce_LK_oracle(CpExtension(parse_series(F9, 't^-1')),
                            CpExtension(parse_series(F9, 't^-1')).monomial(1, 0, 1))
    assert d == Defect.infinite()  # 1 = wp(omega) is solvable in F_9


def test_oracle_explicit_window_too_small():
    with pytest.raises(WindowTooSmall):
        reduce_LK_oracle(EXT31, EXT31.monomial(1, -4, 1), window=3)


def test_oracle_membership_and_monotone(rng):
    for fld, brk in ((F3, 2), (F2, 1), (F9, 1)):
        base = reduce_K(LaurentSeries.monomial(fld, 1, -brk))
        ext = CpExtension(base)
        for _ in range(25):
            e = random_ext_element(rng, ext)
            out, d = reduce_LK_oracle(ext, e)
            _, d2 = reduce_LK_oracle(ext, out - e)
            assert d2 == Defect.infinite()
            if d.is_finite:
                assert out.valuation() == d.value
                ev = e.drop_K_part().valuation()
                assert d.value >= (ev if ev is not math.inf else d.value)


def test_oracle_ultrametric(rng):
    ext = EXT31
    for _ in range(40):
        e1 = random_ext_element(rng, ext, depth=10)
        e2 = random_ext_element(rng, ext, depth=10)
        v1 = reduce_LK_oracle(ext, e1)[1].as_valuation()
        v2 = reduce_LK_oracle(ext, e2)[1].as_valuation()
        v12 = reduce_LK_oracle(ext, e1 + e2)[1].as_valuation()
        assert v12 >= min(v1, v2)
        if v1 != v2:
            assert v12 == min(v1, v2)


def test_graded_map_levels(rng):
    # wp sends a monomial at level -n (n != b, coprime to p) to level -psi(n)
    # modulo K
    for ext in (EXT31, EXT23, CpExtension(parse_series(F9, 't^-2'))):
        for _ in range(30):
            i = rng.randint(1, ext.p - 1)
            a = rng.randint(-4, 2)
            n = i * ext.b - ext.p * a
            if n <= 0 or n == ext.b:
                continue
            img = wp_ext(ext.monomial(1, a, i)).drop_K_part()
            assert img.valuation() == -hasse_herbrand(ext, n, 'psi')


def test_witt_term_valuation(rng):
    # v_L(S(y, beta)) = -(p^2 - p + 1) * b
    for ext in (EXT31, EXT23, CpExtension(parse_series(F3, 't^-5'))):
        st = witt_term(ext)
        p, b = ext.p, ext.b
        assert st.valuation() == -(p * p - p + 1) * b
