"""Arithmetic in a ramified C_p-extension L = K(y), wp(y) = beta, and the
generic reduction engine for the relative group valuation

    df(ell) = max{ v_L(x) : x in ell + L^wp + K }.

Elements of L are polynomials in y of degree < p with Laurent-series
coefficients; the relation y^p = y + beta is rewritten eagerly, which makes

    v_L(sum a_i y^i) = min_i (p*v(a_i) - i*b)

a closed formula (the candidates are pairwise incongruent mod p because the
break b is coprime to p, so the minimum is attained once).

reduce_LK_oracle is deliberately dumb: it enumerates monomials c*t^a*y^i in a
window, applies wp to them, and eliminates the leading term of the input by
F_p-linear algebra over the actual computed images (wp is only F_p-linear, so
coefficients in F_q are handled coordinate-wise over an F_p-basis).  A term is
declared irreducible only when no monomial in the window maps onto its level;
the classical certificates (leading valuation above -b is trivial, the level
-b residue test, the two congruence conditions) then agree with the outcome
but are not trusted for it.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (InsufficientPrecision, PreconditionViolated, WindowTooSmall)
from .field_core import INF, FieldSpec, FqElem, LaurentSeries, ff_wp_solve
from .artin_schreier import ASGenerator, Defect, reduce_K, witt_coefficients

DEFAULT_MAX_DOUBLINGS = 4


class CpExtension:
    """L = K(y) with wp(y) = beta reduced, break b = -v(beta) coprime to p."""

    def __init__(self, beta: LaurentSeries | ASGenerator):
        gen = reduce_K(beta)
        if not gen.df.is_finite:
            raise PreconditionViolated(
                "base generator reduces to a trivial or unramified class; "
                "no ramified C_p-extension")
        self.gen = gen
        self.beta = gen.value
        self.field: FieldSpec = gen.field
        self.p: int = self.field.p
        self.b: int = gen.break_
        self._beta_pows = [LaurentSeries.one(self.field)]
        self._ypb_pows = None

    def beta_pow(self, i: int) -> LaurentSeries:
        while len(self._beta_pows) <= i:
            self._beta_pows.append(self._beta_pows[-1] * self.beta)
        return self._beta_pows[i]

    def _y_plus_beta_pow(self, i: int) -> 'ExtElement':
        # (y + beta)^i for i < p, degree i, no rewrite needed
        if self._ypb_pows is None:
            self._ypb_pows = [ExtElement.from_K(self, LaurentSeries.one(self.field))]
        while len(self._ypb_pows) <= i:
            prev = self._ypb_pows[-1]
            zero = LaurentSeries.zero(self.field)
            coeffs = list(prev.coeffs)
            shifted = [zero] + coeffs[:-1]              # y * prev
            scaled = [c * self.beta for c in coeffs]     # beta * prev
            self._ypb_pows.append(ExtElement(self, tuple(
                a + b for a, b in zip(shifted, scaled))))
        return self._ypb_pows[i]

    def zero(self) -> 'ExtElement':
        return ExtElement.from_K(self, LaurentSeries.zero(self.field))

    def monomial(self, coeff, exp: int, ydeg: int) -> 'ExtElement':
        """The element coeff * t^exp * y^ydeg, 0 <= ydeg < p."""
        zero = LaurentSeries.zero(self.field)
        coeffs = [zero] * self.p
        coeffs[ydeg] = LaurentSeries.monomial(self.field, coeff, exp)
        return ExtElement(self, tuple(coeffs))

    def __repr__(self):
        return f'CpExtension(beta={self.beta!r}, b={self.b})'


class ExtElement:
    """An element of L as coefficients (a_0, ..., a_{p-1}) of 1, y, ..., y^{p-1}."""

    __slots__ = ('ext', 'coeffs')

    def __init__(self, ext: CpExtension, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != ext.p:
            raise ValueError("expected p coefficient series")
        self.ext = ext
        self.coeffs = coeffs

    @staticmethod
    def from_K(ext: CpExtension, a: LaurentSeries) -> 'ExtElement':
        zero = LaurentSeries.zero(ext.field)
        return ExtElement(ext, (a,) + (zero,) * (ext.p - 1))

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            other = ExtElement.from_K(self.ext, other)
        return ExtElement(self.ext, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            other = ExtElement.from_K(self.ext, other)
        return ExtElement(self.ext, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return ExtElement(self.ext, tuple(-a for a in self.coeffs))

    def scale(self, k) -> 'ExtElement':
        """Multiply by a scalar from K (LaurentSeries, FqElem or int)."""
        if isinstance(k, LaurentSeries):
            return ExtElement(self.ext, tuple(a * k for a in self.coeffs))
        return ExtElement(self.ext, tuple(a.scale(k) for a in self.coeffs))

    def drop_K_part(self) -> 'ExtElement':
        zero = LaurentSeries.zero(self.ext.field)
        return ExtElement(self.ext, (zero,) + self.coeffs[1:])

    def is_known_zero(self) -> bool:
        return all(a.is_known_zero() for a in self.coeffs)

    def valuation(self):
        """v_L as an extended integer; raises if truncation hides the minimum."""
        b = self.ext.b
        p = self.ext.p
        known = []
        bound = INF
        for i, a in enumerate(self.coeffs):
            if a.terms:
                known.append(p * min(a.terms) - i * b)
            if a.prec is not INF:
                bound = min(bound, p * a.prec - i * b)
        if known and min(known) < bound:
            return min(known)
        if not known and bound is INF:
            return INF
        raise InsufficientPrecision(
            f"v_L undetermined: known terms start at {min(known) if known else 'nowhere'}, "
            f"truncation interferes from level {bound}")

    def leading(self):
        """(level, ydeg, exponent, coefficient) of the minimal-valuation term."""
        v = self.valuation()
        if v is INF:
            raise ValueError("zero element has no leading term")
        b, p = self.ext.b, self.ext.p
        for i, a in enumerate(self.coeffs):
            for e, c in a.terms.items():
                if p * e - i * b == v:
                    return v, i, e, c
        raise AssertionError("unreachable")

    def __eq__(self, other):
        return (isinstance(other, ExtElement) and other.ext is self.ext
                and other.coeffs == self.coeffs)

    def __repr__(self):
        parts = []
        for i, a in enumerate(self.coeffs):
            if a.is_known_zero() and a.prec is INF:
                continue
            ypart = '' if i == 0 else (' * y' if i == 1 else f' * y^{i}')
            parts.append(f'({a!r}){ypart}')
        return ' + '.join(parts) if parts else '0'


def ext_valuation(e: ExtElement):
    """v_L(e) via the min formula; InsufficientPrecision when undetermined."""
    return e.valuation()


def wp_ext(e: ExtElement) -> ExtElement:
    """wp(e) = e^p - e, rewriting y^p -> y + beta.

    e^p = sum_i a_i^p (y + beta)^i because Frobenius is additive and the
    coefficients are p-th powers of series (computed exactly).
    """
    ext = e.ext
    acc = ext.zero()
    for i, a in enumerate(e.coeffs):
        if a.is_known_zero() and a.prec is INF:
            continue
        acc = acc + ext._y_plus_beta_pow(i).scale(a.frobenius())
    return acc - e


def witt_term(ext: CpExtension) -> ExtElement:
    """S(y, beta) as an element of L (degree p-1 in y)."""
    zero = LaurentSeries.zero(ext.field)
    coeffs = [zero] * ext.p
    for k, c in witt_coefficients(ext.p).items():
        coeffs[k] = ext.beta_pow(ext.p - k).scale(c)
    return ExtElement(ext, tuple(coeffs))


def hasse_herbrand(ext: CpExtension, x, direction: str = 'phi') -> Fraction:
    """The Hasse-Herbrand transfer for a C_p-extension with break b.

    phi(x) = x for x <= b and b + (x-b)/p above; psi is its inverse.
    """
    x = Fraction(x)
    if x < 0:
        raise PreconditionViolated("Hasse-Herbrand functions are defined for x >= 0")
    b, p = ext.b, ext.p
    if direction == 'phi':
        return x if x <= b else b + Fraction(x - b, p)
    if direction == 'psi':
        return x if x <= b else b + p * (x - b)
    raise ValueError("direction must be 'phi' or 'psi'")


# ---------------------------------------------------------------------------
# the oracle
# ---------------------------------------------------------------------------

def _slot_of_level(ext: CpExtension, level: int):
    """The unique (ydeg, exponent) with p*exponent - ydeg*b == level, or None.

    ydeg is determined by level mod p (b is invertible mod p); ydeg == 0 means
    the level is occupied by K alone.
    """
    p, b = ext.p, ext.b
    i = (-level * pow(b, -1, p)) % p
    e = (level + i * b) // p
    return i, e


def _wp_leading_level(ext: CpExtension, i: int, a: int) -> int:
    """Leading v_L of wp(c t^a y^i) modulo K, computed from term valuations.

    The image terms are C(i,k) c^p beta^(i-k) t^(pa) y^k for k = 1..i plus the
    subtracted monomial itself; their levels are pairwise incongruent mod p
    except for an a == 0 coincidence that never attains the minimum, so the
    minimum of the candidate levels is exact (no binomial coefficient
    vanishes mod p for i < p).
    """
    p, b = ext.p, ext.b
    cands = [p * (p * a - (i - k) * b) - k * b for k in range(1, i + 1)]
    cands.append(p * a - i * b)
    return min(cands)


def _solve_fp(columns: list[FqElem], target: FqElem):
    """Solve sum_k lam_k * columns[k] = target with lam_k in F_p, or None."""
    fld = target.field
    p, f = fld.p, fld.f
    n = len(columns)
    rows = [[col.coords[r] for col in columns] + [target.coords[r]] for r in range(f)]
    piv_cols = []
    r = 0
    for c in range(n):
        sel = None
        for rr in range(r, f):
            if rows[rr][c]:
                sel = rr
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for rr in range(f):
            if rr != r and rows[rr][c]:
                m = rows[rr][c]
                rows[rr] = [(x - m * y) % p for x, y in zip(rows[rr], rows[r])]
        piv_cols.append(c)
        r += 1
    lam = [0] * n
    for rr in range(r, f):
        if rows[rr][n]:
            return None
    for rr, c in enumerate(piv_cols):
        lam[c] = rows[rr][n]
    return lam


def reduce_LK_oracle(ext: CpExtension, e: ExtElement, window: int | None = None,
                     max_doublings: int = DEFAULT_MAX_DOUBLINGS):
    """Reduce e modulo wp(L) + K; returns (representative, defect).

    The defect is Finite(n) with n = v_L of the representative, or Infinite
    when e lies in wp(L) + K.  An explicit window is used as given (raising
    WindowTooSmall if it cannot cover the reduction); the default window
    2*|v_L(e)| + p*b is doubled automatically up to max_doublings.
    """
    if window is not None:
        return _reduce_LK(ext, e, window)
    v = e.drop_K_part().valuation() if not e.drop_K_part().is_known_zero() else 0
    base = 2 * abs(min(v, 0) if v is not INF else 0) + ext.p * ext.b
    for attempt in range(max_doublings + 1):
        try:
            return _reduce_LK(ext, e, base * (2 ** attempt))
        except WindowTooSmall:
            if attempt == max_doublings:
                raise
    raise AssertionError("unreachable")


def _reduce_LK(ext: CpExtension, e: ExtElement, window: int):
    p, b = ext.p, ext.b
    fld = ext.field
    basis = fld.fp_basis()

    # Known slots of e, K-part deleted (it is free modulo K).  Truncation in
    # any y^i coefficient (i >= 1) bars certification at or above its level.
    slots: dict[tuple[int, int], FqElem] = {}
    unknown_from = INF
    for i in range(1, p):
        a = e.coeffs[i]
        for exp, c in a.terms.items():
            slots[(i, exp)] = c
        if a.prec is not INF:
            unknown_from = min(unknown_from, p * a.prec - i * b)

    def subtract(vec: ExtElement):
        for i in range(1, p):
            for exp, c in vec.coeffs[i].terms.items():
                level = p * exp - i * b
                if level >= unknown_from:
                    continue
                key = (i, exp)
                s = slots.get(key, fld.zero) - c
                if s:
                    slots[key] = s
                else:
                    slots.pop(key, None)

    # Every monomial level in [-window, -1] below -b, mapped to the slot whose
    # wp-image leads there.  Distinct slots lead at distinct levels.
    image_of: dict[int, tuple[int, int]] = {}
    for i in range(1, p):
        # p*a - i*b in [-window, -b-1]
        a_lo = -((window - i * b) // p)
        a_hi = (i * b - b - 1) // p
        for a in range(a_lo, a_hi + 1):
            lead = _wp_leading_level(ext, i, a)
            if lead in image_of:
                raise AssertionError(f"duplicate eliminator at level {lead}")
            image_of[lead] = (i, a)

    def result_element():
        per_coeff: list[dict] = [{} for _ in range(p)]
        for (i, exp), c in slots.items():
            per_coeff[i][exp] = c
        coeffs = []
        for i in range(p):
            if unknown_from is INF:
                prec = INF
            else:
                prec = -((-(unknown_from + i * b)) // p)  # ceil
            coeffs.append(LaurentSeries(fld, per_coeff[i], prec))
        return ExtElement(ext, tuple(coeffs))

    while True:
        if not slots:
            if unknown_from > -1:
                return result_element(), Defect.infinite()
            raise InsufficientPrecision(
                f"residual is zero only up to level {unknown_from}")
        level = min(p * exp - i * b for (i, exp) in slots)
        if level >= unknown_from:
            raise InsufficientPrecision(
                f"leading level {level} is not below the truncation level {unknown_from}")
        if level > -b:
            # everything of valuation above -b lies in wp(L) + K
            return result_element(), Defect.infinite()
        i, exp = _slot_of_level(ext, level)
        c = slots.get((i, exp))
        if c is None:
            raise AssertionError("leading slot lost")
        if level == -b:
            # residue test at the break: c*y is hit by wp(w*y) = wp(w)*y + w^p*beta
            w = ff_wp_solve(c)
            if w is None:
                return result_element(), Defect.finite(level)
            del slots[(i, exp)]
            continue
        hit = image_of.get(level)
        if hit is None:
            if -level > window:
                raise WindowTooSmall(
                    f"level {level} outside elimination window {window}")
            # basis exhausted: nothing in the window maps onto this level
            return result_element(), Defect.finite(level)
        j, m = hit
        vecs = [wp_ext(ext.monomial(ck, m, j)) for ck in basis]
        cols = [vec.coeffs[i].coeff(exp) for vec in vecs]
        lam = _solve_fp(cols, c)
        if lam is None:
            raise AssertionError("full-rank elimination failed")
        for lam_k, vec in zip(lam, vecs):
            if lam_k:
                subtract(vec.scale(lam_k))
        if (i, exp) in slots:
            raise AssertionError("leading term survived its elimination")
