"""Exact arithmetic in F_q and in truncated Laurent series over F_q.

A field F_q (q = p^f, p prime, 2 <= p <= 13) is described by a FieldSpec
carrying the defining irreducible modulus over F_p.  Elements are coefficient
tuples in the power basis 1, g, ..., g^(f-1), where g is a root of the
modulus.  All arithmetic is exact.

Laurent series over F_q are sparse: a map exponent -> coefficient (no zero
values stored) plus an absolute precision ``prec``.  Terms at exponents >= prec
are unknown; exact series carry prec = math.inf.  Precision propagates through
every operation (min rule for addition, the v(a)+prec(b) / v(b)+prec(a) rule
for multiplication).  Operations never guess unknown terms: callers that need
an undetermined valuation get InsufficientPrecision.

The text format round-trips exactly: "t^-5 + 2*t^-1 + 1" over a prime field,
"g^2*t^-1 + (g+1)" over an extension field, with a trailing "O(t^N)" marker
when the precision is finite.
"""

from __future__ import annotations

import functools
import math
import re

from .errors import InsufficientPrecision

INF = math.inf

_SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)

#: Precision used by LaurentSeries.truncate() when no explicit bound is given.
DEFAULT_PRECISION = 2


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (dense little-endian coefficient lists)
# ---------------------------------------------------------------------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_divmod(prod, mod, p)[1]


def _poly_divmod(a, b, p):
    a = list(a)
    deg_b = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    quo = [0] * max(0, len(a) - deg_b)
    while len(_poly_trim(a)) - 1 >= deg_b and a:
        shift = len(a) - 1 - deg_b
        c = (a[-1] * inv_lead) % p
        quo[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
    return _poly_trim(quo), _poly_trim(a)


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    return a


def _poly_pow_xq(k, mod, p):
    """x^(p^k) reduced mod the given polynomial."""
    r = [0, 1]
    r = _poly_divmod(r, mod, p)[1]
    for _ in range(k):
        # raise to the p-th power by repeated squaring on the exponent p
        e = p
        base = r
        acc = [1]
        while e:
            if e & 1:
                acc = _poly_mulmod(acc, base, mod, p)
            base = _poly_mulmod(base, base, mod, p)
            e >>= 1
        r = acc
    return r


def _is_irreducible(mod, p):
    f = len(mod) - 1
    if f < 1 or mod[-1] != 1:
        return False
    if f == 1:
        return True
    # x^(p^f) == x mod m, and gcd(x^(p^(f/l)) - x, m) == 1 for primes l | f
    xqf = _poly_pow_xq(f, mod, p)
    if _poly_trim([(a - b) % p for a, b in _zip_pad(xqf, [0, 1])]):
        return False
    for ell in _prime_divisors(f):
        xqk = _poly_pow_xq(f // ell, mod, p)
        diff = _poly_trim([(a - b) % p for a, b in _zip_pad(xqk, [0, 1])])
        g = _poly_gcd(mod, diff, p)
        if len(g) - 1 >= 1:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def default_modulus(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree f over F_p.

    Candidates are enumerated by the base-p integer encoding of the non-leading
    coefficients, so the choice is deterministic (e.g. x^2+x+1 for F_4).
    """
    if f == 1:
        return (0, 1)
    for k in range(p ** f):
        coeffs = []
        n = k
        for _ in range(f):
            coeffs.append(n % p)
            n //= p
        cand = coeffs + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# F_q
# ---------------------------------------------------------------------------

class FieldSpec:
    """The field F_q, q = p^f, with a fixed irreducible modulus over F_p.

    Instances are interned through :func:`field`; identity comparison is safe
    for FieldSpecs obtained that way.
    """

    __slots__ = ('p', 'f', 'q', 'modulus', '_red_rows', '_wp_map',
                 'zero', 'one', 'gen')

    def __init__(self, p: int, f: int, modulus: tuple[int, ...]):
        if p not in _SUPPORTED_PRIMES:
            raise ValueError(f"characteristic {p} not supported (prime, 2..13)")
        if f < 1:
            raise ValueError("extension degree must be >= 1")
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        modulus = tuple(c % p for c in modulus[:-1]) + (1,)
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = modulus
        # reduction rows: x^(f+k) mod modulus, k = 0..f-2
        rows = []
        cur = [(-c) % p for c in modulus[:-1]]  # x^f
        rows.append(tuple(cur))
        for _ in range(f - 2):
            cur = [0] + cur
            lead = cur.pop()
            if lead:
                head = rows[0]
                cur = [(a + lead * b) % p for a, b in zip(cur, head)]
            rows.append(tuple(cur))
        self._red_rows = tuple(rows)
        self._wp_map = None
        self.zero = FqElem(self, (0,) * f)
        self.one = FqElem(self, (1,) + (0,) * (f - 1))
        self.gen = FqElem(self, ((0, 1) + (0,) * (f - 2)) if f > 1 else (1,))

    def elem(self, value) -> FqElem:
        """Coerce an int, coefficient sequence or FqElem into this field."""
        if isinstance(value, FqElem):
            if value.field is not self:
                raise ValueError("element from a different field")
            return value
        if isinstance(value, int):
            return FqElem(self, (value % self.p,) + (0,) * (self.f - 1))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) != self.f:
            raise ValueError("wrong number of coordinates")
        return FqElem(self, coords)

    def from_index(self, k: int) -> FqElem:
        """Element whose coordinates are the base-p digits of k (0 <= k < q)."""
        coords = []
        for _ in range(self.f):
            coords.append(k % self.p)
            k //= self.p
        return FqElem(self, tuple(coords))

    def elements(self):
        """All q elements, in canonical (index) order."""
        for k in range(self.q):
            yield self.from_index(k)

    def fp_basis(self) -> list[FqElem]:
        """The power basis 1, g, ..., g^(f-1) of F_q over F_p."""
        out = []
        for i in range(self.f):
            coords = [0] * self.f
            coords[i] = 1
            out.append(FqElem(self, tuple(coords)))
        return out

    def _wp_preimages(self):
        if self._wp_map is None:
            table = {}
            for w in self.elements():  # index order => least preimage wins
                c = w.frobenius() - w
                table.setdefault(c, w)
            self._wp_map = table
        return self._wp_map

    def __repr__(self):
        if self.f == 1:
            return f"F_{self.p}"
        return f"F_{self.q}(p={self.p}, modulus={list(self.modulus)})"


@functools.lru_cache(maxsize=None)
def _make_field(p, f, modulus):
    return FieldSpec(p, f, modulus)


def field(p: int, f: int = 1, modulus=None) -> FieldSpec:
    """Interned constructor for F_{p^f}; modulus defaults to the least irreducible."""
    if modulus is None:
        modulus = default_modulus(p, f)
    return _make_field(p, f, tuple(modulus))


class FqElem:
    """An element of F_q as a coordinate tuple over F_p; immutable."""

    __slots__ = ('field', 'coords')

    def __init__(self, fld: FieldSpec, coords: tuple[int, ...]):
        self.field = fld
        self.coords = coords

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        return (isinstance(other, FqElem) and other.field is self.field
                and other.coords == self.coords)

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def index(self) -> int:
        """Canonical ordering key: coordinates read as base-p digits."""
        k = 0
        for c in reversed(self.coords):
            k = k * self.field.p + c
        return k

    def __add__(self, other):
        other = self.field.elem(other)
        p = self.field.p
        return FqElem(self.field, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field.elem(other)
        p = self.field.p
        return FqElem(self.field, tuple((a - b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        p = self.field.p
        return FqElem(self.field, tuple((-a) % p for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.field.p
            k = other % p
            return FqElem(self.field, tuple((a * k) % p for a in self.coords))
        other = self.field.elem(other)
        fld = self.field
        p, f = fld.p, fld.f
        if f == 1:
            return FqElem(fld, ((self.coords[0] * other.coords[0]) % p,))
        prod = [0] * (2 * f - 1)
        for i, ai in enumerate(self.coords):
            if ai:
                for j, bj in enumerate(other.coords):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for k in range(f - 2, -1, -1):
            c = prod[f + k]
            if c:
                row = fld._red_rows[k]
                for idx in range(f):
                    prod[k + idx] = (prod[k + idx] + c * row[idx]) % p
        return FqElem(fld, tuple(prod[:f]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def inverse(self) -> FqElem:
        if not self:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        return self * self.field.elem(other).inverse()

    def frobenius(self) -> FqElem:
        return self ** self.field.p

    def in_prime_field(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        return format_fq(self)


# ---------------------------------------------------------------------------
# field-level operations
# ---------------------------------------------------------------------------

def frobenius_inv(c: FqElem) -> FqElem:
    """The unique d with d^p = c, i.e. c^(q/p)."""
    d = c
    for _ in range(c.field.f - 1):
        d = d.frobenius()
    return d


def ff_wp_solve(c: FqElem):
    """Solve w^p - w = c in F_q; returns the least solution in index order, or None.

    The preimage table is built once per field by exhausting F_q, so the
    deterministic-least contract is immediate.
    """
    return c.field._wp_preimages().get(c)


# ---------------------------------------------------------------------------
# Laurent series
# ---------------------------------------------------------------------------

class LaurentSeries:
    """Sparse truncated Laurent series over F_q; immutable after construction.

    Invariants: stored coefficients are nonzero and all stored exponents are
    < prec.  valuation() is the least stored exponent, or math.inf when no
    terms are known (exactly zero when prec is also math.inf).
    """

    __slots__ = ('field', 'terms', 'prec')

    def __init__(self, fld: FieldSpec, terms, prec=INF):
        if prec == INF:
            prec = INF  # normalize to the singleton so identity checks hold
        clean = {}
        for e, c in terms.items():
            if not isinstance(c, FqElem):
                c = fld.elem(c)
            if c and e < prec:
                clean[e] = c
        self.field = fld
        self.terms = clean
        self.prec = prec

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(fld: FieldSpec, prec=INF) -> 'LaurentSeries':
        return LaurentSeries(fld, {}, prec)

    @staticmethod
    def one(fld: FieldSpec) -> 'LaurentSeries':
        return LaurentSeries(fld, {0: fld.one})

    @staticmethod
    def monomial(fld: FieldSpec, coeff, exp: int, prec=INF) -> 'LaurentSeries':
        return LaurentSeries(fld, {exp: fld.elem(coeff)}, prec)

    @staticmethod
    def from_terms(fld: FieldSpec, pairs, prec=INF) -> 'LaurentSeries':
        terms = {}
        for e, c in (pairs.items() if isinstance(pairs, dict) else pairs):
            c = fld.elem(c)
            if e in terms:
                c = terms[e] + c
            terms[e] = c
        return LaurentSeries(fld, terms, prec)

    # -- inspection ----------------------------------------------------

    def is_known_zero(self) -> bool:
        """No known terms (zero up to precision; exactly zero iff prec is inf)."""
        return not self.terms

    def valuation(self):
        """Least stored exponent, or math.inf when no terms are known."""
        return min(self.terms) if self.terms else INF

    def vbound(self):
        """A lower bound for the true valuation: valuation, or prec if no terms."""
        return min(self.terms) if self.terms else self.prec

    def require_valuation(self) -> int:
        """Valuation as an int; raises unless it is determined by known terms."""
        if self.terms:
            return min(self.terms)
        if self.prec is INF:
            raise InsufficientPrecision("valuation of the zero series is infinite")
        raise InsufficientPrecision(
            f"series is zero up to O(t^{self.prec}); valuation undetermined")

    def leading_coeff(self) -> FqElem:
        return self.terms[min(self.terms)]

    def coeff(self, exp: int) -> FqElem:
        if exp >= self.prec:
            raise InsufficientPrecision(f"coefficient at t^{exp} is beyond O(t^{self.prec})")
        return self.terms.get(exp, self.field.zero)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        fld = self.field
        if isinstance(other, (int, FqElem)):
            other = LaurentSeries.monomial(fld, other, 0)
        prec = min(self.prec, other.prec)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            terms[e] = c if s is None else s + c
        return LaurentSeries(fld, terms, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.field, {e: -c for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        if isinstance(other, (int, FqElem)):
            other = LaurentSeries.monomial(self.field, other, 0)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, FqElem)):
            return self.scale(other)
        fld = self.field
        prec = min(self.vbound() + other.prec, other.vbound() + self.prec)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < prec:
                    c = c1 * c2
                    s = terms.get(e)
                    terms[e] = c if s is None else s + c
        return LaurentSeries(fld, terms, prec)

    def scale(self, c) -> 'LaurentSeries':
        c = self.field.elem(c)
        if not c:
            return LaurentSeries.zero(self.field, self.prec)
        return LaurentSeries(self.field, {e: v * c for e, v in self.terms.items()}, self.prec)

    def shift(self, k: int) -> 'LaurentSeries':
        """Multiply by t^k."""
        prec = self.prec if self.prec is INF else self.prec + k
        return LaurentSeries(self.field, {e + k: c for e, c in self.terms.items()}, prec)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of series are not supported")
        acc = LaurentSeries.one(self.field)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def frobenius(self) -> 'LaurentSeries':
        """The p-th power; exact exponent-wise map in characteristic p."""
        p = self.field.p
        prec = self.prec if self.prec is INF else p * self.prec
        return LaurentSeries(self.field,
                             {p * e: c.frobenius() for e, c in self.terms.items()},
                             prec)

    def truncate(self, prec: int | None = None) -> 'LaurentSeries':
        if prec is None:
            prec = DEFAULT_PRECISION
        return LaurentSeries(self.field, self.terms, min(self.prec, prec))

    # -- comparison / display -------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, LaurentSeries) and other.field is self.field
                and other.prec == self.prec and other.terms == self.terms)

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return format_series(self)


# ---------------------------------------------------------------------------
# p-th power split
# ---------------------------------------------------------------------------

def ls_p_power_split(fld: FieldSpec, a: LaurentSeries) -> tuple[LaurentSeries, ...]:
    """Write a = sum_j c_j^p t^j, j = 0..p-1, splitting exponents by residue class.

    Realizes the decomposition of K along the basis 1, t, ..., t^(p-1) of K
    over K^p.  Each c_j carries precision ceil((prec(a) - j) / p).
    """
    p = fld.p
    buckets: list[dict] = [{} for _ in range(p)]
    for e, c in a.terms.items():
        j = e % p
        buckets[j][(e - j) // p] = frobenius_inv(c)
    out = []
    for j in range(p):
        if a.prec is INF:
            prec = INF
        else:
            prec = -((-(a.prec - j)) // p)  # ceil((prec - j) / p)
        out.append(LaurentSeries(fld, buckets[j], prec))
    return tuple(out)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def format_fq(c: FqElem) -> str:
    fld = c.field
    if fld.f == 1:
        return str(c.coords[0])
    parts = []
    for i in range(fld.f - 1, -1, -1):
        a = c.coords[i]
        if not a:
            continue
        if i == 0:
            parts.append(str(a))
        else:
            gpow = 'g' if i == 1 else f'g^{i}'
            parts.append(gpow if a == 1 else f'{a}*{gpow}')
    return '+'.join(parts) if parts else '0'


def _format_coeff_for_series(c: FqElem) -> str:
    s = format_fq(c)
    return f'({s})' if '+' in s else s


def format_series(s: LaurentSeries) -> str:
    parts = []
    one = s.field.one
    for e, c in s.items():
        if e == 0:
            parts.append(_format_coeff_for_series(c))
            continue
        tpart = 't' if e == 1 else f't^{e}'
        if c == one:
            parts.append(tpart)
        else:
            parts.append(f'{_format_coeff_for_series(c)}*{tpart}')
    if s.prec is not INF:
        parts.append(f'O(t^{s.prec})')
    if not parts:
        return '0'
    return ' + '.join(parts)


_G_MONO_RE = re.compile(r'^(?:(\d+)\*)?g(?:\^(\d+))?$')
_O_RE = re.compile(r'^O\(t(?:\^(-?\d+))?\)$')
_TERM_RE = re.compile(r'^(?:(?P<coeff>\([^()]*\)|[^t]*?)\*?)?(?P<t>t(?:\^(?P<exp>-?\d+))?)?$')


def parse_fq(fld: FieldSpec, text: str) -> FqElem:
    """Parse an F_q scalar: an integer, or a polynomial in g like "g^2+2*g+1"."""
    text = text.strip().replace(' ', '')
    if text.startswith('(') and text.endswith(')'):
        text = text[1:-1]
    if not text:
        raise ValueError("empty field element")
    total = fld.zero
    for sign, chunk in _split_signed(text):
        if chunk.isdigit():
            val = fld.elem(int(chunk))
        else:
            m = _G_MONO_RE.match(chunk)
            if not m:
                raise ValueError(f"cannot parse field element term {chunk!r}")
            if fld.f == 1:
                raise ValueError("'g' is only defined for extension fields")
            mult = int(m.group(1)) if m.group(1) else 1
            exp = int(m.group(2)) if m.group(2) else 1
            val = (fld.gen ** exp) * mult
        total = total + (val if sign > 0 else -val)
    return total


def _split_signed(text: str):
    """Split at top-level +/- signs, keeping parenthesised groups intact."""
    chunks = []
    depth = 0
    cur = ''
    sign = 1
    for i, ch in enumerate(text):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch in '+-' and depth == 0 and cur and text[i - 1] not in '^*+-(':
            chunks.append((sign, cur))
            sign = 1 if ch == '+' else -1
            cur = ''
            continue
        if ch in '+-' and depth == 0 and not cur:
            if ch == '-':
                sign = -sign
            continue
        cur += ch
    if cur:
        chunks.append((sign, cur))
    return chunks


def parse_series(fld: FieldSpec, text: str, prec=None) -> LaurentSeries:
    """Parse the series text format; inverse of format_series.

    A trailing "O(t^N)" sets the precision; an explicit ``prec`` argument
    overrides it.  Without either, the series is exact.
    """
    text = text.strip().replace(' ', '')
    if not text:
        raise ValueError("empty series")
    terms: dict[int, FqElem] = {}
    found_prec = INF
    for sign, chunk in _split_signed(text):
        if chunk == '0':
            continue
        om = _O_RE.match(chunk)
        if om:
            found_prec = int(om.group(1)) if om.group(1) else 1
            continue
        m = _TERM_RE.match(chunk)
        if not m or (not m.group('coeff') and not m.group('t')):
            raise ValueError(f"cannot parse series term {chunk!r}")
        coeff_text = m.group('coeff')
        c = parse_fq(fld, coeff_text) if coeff_text else fld.one
        if m.group('t'):
            e = int(m.group('exp')) if m.group('exp') else 1
        else:
            e = 0
        if sign < 0:
            c = -c
        prev = terms.get(e)
        terms[e] = c if prev is None else prev + c
    if prec is not None:
        found_prec = prec
    return LaurentSeries(fld, terms, found_prec)
