"""The Weierstrass-map calculus over K = F_q((t)).

wp(x) = x^p - x is F_p-linear in characteristic p.  For kappa in K the coset
kappa + K^wp determines a degree-p Artin-Schreier extension K(x), x^p - x =
kappa, and the additive group valuation

    df(kappa) = max{ v(x) : x in kappa + K^wp }

controls its ramification: df is infinite iff kappa lies in K^wp, zero iff the
extension is unramified, and otherwise a negative integer coprime to p whose
negative is the ramification break.

reduce_K computes df constructively and returns a canonical representative of
maximal valuation: every negative exponent divisible by p is eliminated
(c*t^(pn) differs from c^(1/p)*t^n by an element of K^wp), positive exponents
are dropped (M_K is contained in K^wp), and a surviving constant is killed
exactly when it lies in wp(F_q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DependentGenerators, InsufficientPrecision
from .field_core import (INF, FqElem, LaurentSeries, ff_wp_solve, frobenius_inv)

_FINITE = 'finite'
_ZERO = 'zero'
_INFINITE = 'infinite'


@dataclass(frozen=True)
class Defect:
    """A group-valuation value: Finite(n) with n < 0, Zero, or Infinite."""

    kind: str
    value: int | None = None

    @staticmethod
    def finite(n: int) -> 'Defect':
        return Defect(_FINITE, n)

    @staticmethod
    def zero() -> 'Defect':
        return Defect(_ZERO)

    @staticmethod
    def infinite() -> 'Defect':
        return Defect(_INFINITE)

    @property
    def is_finite(self) -> bool:
        return self.kind == _FINITE

    @property
    def is_zero(self) -> bool:
        return self.kind == _ZERO

    @property
    def is_infinite(self) -> bool:
        return self.kind == _INFINITE

    def as_valuation(self):
        """The defect as an extended integer (Zero -> 0, Infinite -> inf)."""
        if self.kind == _FINITE:
            return self.value
        return 0 if self.kind == _ZERO else math.inf

    def __repr__(self):
        if self.kind == _FINITE:
            return f'Defect({self.value})'
        return 'Defect(0)' if self.kind == _ZERO else 'Defect(inf)'


@dataclass(frozen=True)
class ASGenerator:
    """A reduced Artin-Schreier generator together with its defect."""

    value: LaurentSeries
    df: Defect
    reduced: bool = True

    @property
    def field(self):
        return self.value.field

    @property
    def break_(self) -> int:
        if not self.df.is_finite:
            raise ValueError("generator has no finite break")
        return -self.df.value

    def __repr__(self):
        return f'ASGenerator({self.value!r}, df={self.df!r})'


def wp(a: LaurentSeries) -> LaurentSeries:
    """The Weierstrass map a -> a^p - a."""
    return a.frobenius() - a


def witt_coefficients(p: int) -> dict[int, int]:
    """Coefficients of S(X1, X2) = (X1^p + X2^p - (X1+X2)^p)/p as a mod-p map.

    Returned as {k: c_k} with S = sum_k c_k X1^k X2^(p-k), 1 <= k <= p-1; the
    integer division by p happens before reduction, so the values are exact.
    """
    out = {}
    for k in range(1, p):
        c = (-math.comb(p, k) // p) % p
        out[k] = c
    return out


def witt_S(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Evaluate the Witt polynomial S at two series over the same field."""
    fld = a.field
    p = fld.p
    acc = LaurentSeries.zero(fld)
    for k, c in witt_coefficients(p).items():
        if c:
            acc = acc + (a ** k) * (b ** (p - k)) * c
    return acc


def reduce_K(kappa: LaurentSeries | ASGenerator) -> ASGenerator:
    """Reduce kappa modulo K^wp to a representative of maximal valuation.

    Deterministic: the lowest exponent is eliminated first at every step, so
    the representative is canonical.  Raises InsufficientPrecision when the
    surviving constant term is not determined by the known coefficients.
    """
    if isinstance(kappa, ASGenerator):
        return kappa if kappa.reduced else reduce_K(kappa.value)
    fld = kappa.field
    p = fld.p
    work = {e: c for e, c in kappa.terms.items() if e <= 0}
    survivors: dict[int, FqElem] = {}
    const = fld.zero
    while work:
        n = min(work)
        c = work.pop(n)
        if not c:
            continue
        if n == 0:
            const = const + c
        elif n % p == 0:
            # c*t^n = wp(d*t^(n/p)) + d*t^(n/p) with d^p = c
            m = n // p
            if m >= kappa.prec:
                continue  # the folded term merges with unknown coefficients
            d = frobenius_inv(c)
            prev = work.get(m)
            work[m] = d if prev is None else prev + d
        else:
            survivors[n] = c
    if survivors:
        v = min(survivors)
        if const:
            survivors[0] = const
        prec = INF if kappa.prec >= 1 else kappa.prec
        return ASGenerator(LaurentSeries(fld, survivors, prec), Defect.finite(v))
    if kappa.prec < 1:
        raise InsufficientPrecision(
            f"reduction needs the constant term; series known only to O(t^{kappa.prec})")
    if const:
        omega = ff_wp_solve(const)
        if omega is None:
            return ASGenerator(LaurentSeries(fld, {0: const}), Defect.zero())
    return ASGenerator(LaurentSeries.zero(fld), Defect.infinite())


def break_of(kappa: LaurentSeries | ASGenerator):
    """Ramification break of K(x)/K for wp(x) = kappa.

    Returns a positive integer coprime to p, or 'unramified' (defect zero) or
    'trivial' (kappa in K^wp).
    """
    gen = reduce_K(kappa)
    if gen.df.is_finite:
        return -gen.df.value
    return 'unramified' if gen.df.is_zero else 'trivial'


def independent_pair(k1: LaurentSeries | ASGenerator,
                     k2: LaurentSeries | ASGenerator):
    """Test F_p-independence of two generators and normalize the pair.

    Returns (True, (beta1, beta2)) with breaks u1 <= u2 and, in the equal
    break case, leading coefficients that are F_p-independent (the smaller
    generator is folded into the larger one until that holds:
    kappa2 <- kappa2 - a*kappa1 for the unique a in F_p matching the leading
    coefficients).  Returns (False, None) when some nontrivial combination
    fails to have a finite defect.
    """
    g1 = reduce_K(k1)
    g2 = reduce_K(k2)
    if not (g1.df.is_finite and g2.df.is_finite):
        return False, None
    while True:
        if g1.break_ > g2.break_:
            g1, g2 = g2, g1
        if g1.break_ < g2.break_:
            return True, (g1, g2)
        c1 = g1.value.leading_coeff()
        c2 = g2.value.leading_coeff()
        ratio = c2 / c1
        if not ratio.in_prime_field():
            return True, (g1, g2)
        lam = ratio.coords[0]
        g2 = reduce_K(g2.value - g1.value.scale(lam))
        if not g2.df.is_finite:
            return False, None


def normalized_pair(k1, k2) -> tuple[ASGenerator, ASGenerator]:
    """independent_pair, raising DependentGenerators on failure."""
    ok, pair = independent_pair(k1, k2)
    if not ok:
        raise DependentGenerators(
            "generators span F_p-dependent cosets of K/K^wp "
            "(some combination is trivial or unramified)")
    return pair
