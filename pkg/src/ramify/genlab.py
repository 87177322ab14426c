"""Generator packages for the four groups, with symbolic Galois verification.

Works in M = K(x1, x2), wp(x_i) = kappa_i, represented as polynomials in
x1, x2 of degree < p in each variable with Laurent-series coefficients; the
relations x_i^p = x_i + kappa_i are rewritten eagerly so the monomial basis
stays finite.  The third generator x3 is never materialized as a field
element: only wp(x3) = s(x1, x2) + kappa3 and the action rows (sigma_i - 1)x3
are, which is all the break computation ever needs.

The extra summand of s(x1, x2) on top of -kappa2*x1 is, per group:
quaternion: kappa1*x1 + kappa2*x2; dihedral: kappa1*x1; Heisenberg: 0;
modular: S(x1, kappa1).  Galois closure is certified by exhibiting, for
i = 1, 2, the explicit w with wp(w) = (sigma_i - 1) s(x1, x2); the witness is
the action row (sigma_i - 1)x3 itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import WrongCharacteristic
from .field_core import FieldSpec, LaurentSeries, format_series
from .artin_schreier import ASGenerator, reduce_K, normalized_pair, witt_coefficients
from .classify import GroupKind


class MContext:
    """The field M = K(x1, x2) with its two defining generators."""

    def __init__(self, kappa1: LaurentSeries, kappa2: LaurentSeries):
        self.field: FieldSpec = kappa1.field
        self.p = self.field.p
        self.kappa = (kappa1, kappa2)
        self._shift_pows = None  # (x_v + kappa_v)^k expansions, per variable

    def zero(self) -> 'SymbolicMElement':
        return SymbolicMElement(self, {})

    def const(self, c) -> 'SymbolicMElement':
        if isinstance(c, (int,)):
            c = LaurentSeries.monomial(self.field, c, 0)
        elif not isinstance(c, LaurentSeries):
            c = LaurentSeries.monomial(self.field, c, 0)
        return SymbolicMElement(self, {(0, 0): c})

    def x(self, var: int) -> 'SymbolicMElement':
        key = (1, 0) if var == 1 else (0, 1)
        return SymbolicMElement(self, {key: LaurentSeries.one(self.field)})

    def _x_plus_kappa_pow(self, var: int, k: int) -> 'SymbolicMElement':
        if self._shift_pows is None:
            self._shift_pows = ({0: self.const(1)}, {0: self.const(1)})
        cache = self._shift_pows[var - 1]
        if k not in cache:
            base = self.x(var) + self.const(self.kappa[var - 1])
            cur = cache[max(cache)]
            for kk in range(max(cache) + 1, k + 1):
                cur = cur * base
                cache[kk] = cur
        return cache[k]


class SymbolicMElement:
    """Element of M as a map (i, j) -> coefficient of x1^i x2^j, 0 <= i,j < p."""

    __slots__ = ('ctx', 'coeffs')

    def __init__(self, ctx: MContext, coeffs):
        clean = {}
        for key, c in coeffs.items():
            if not c.is_known_zero():
                clean[key] = c
        self.ctx = ctx
        self.coeffs = clean

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
        return SymbolicMElement(self.ctx, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SymbolicMElement(self.ctx, {k: -c for k, c in self.coeffs.items()})

    def scale(self, s) -> 'SymbolicMElement':
        if not isinstance(s, LaurentSeries):
            return SymbolicMElement(self.ctx, {k: c.scale(s) for k, c in self.coeffs.items()})
        return SymbolicMElement(self.ctx, {k: c * s for k, c in self.coeffs.items()})

    def __mul__(self, other):
        ctx = self.ctx
        p = ctx.p
        raw: dict = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                c = c1 * c2
                prev = raw.get(key)
                raw[key] = c if prev is None else prev + c
        # rewrite x_v^(p+k) = x_v^k (x_v + kappa_v); degrees stay below 2p-1,
        # so one pass per variable suffices
        out = ctx.zero()
        for (i, j), c in raw.items():
            term = SymbolicMElement(ctx, {(i % p if i < p else i - p,
                                           j % p if j < p else j - p): c})
            if i >= p:
                term = term * SymbolicMElement(ctx, {(1, 0): LaurentSeries.one(ctx.field),
                                                     (0, 0): ctx.kappa[0]})
            if j >= p:
                term = term * SymbolicMElement(ctx, {(0, 1): LaurentSeries.one(ctx.field),
                                                     (0, 0): ctx.kappa[1]})
            out = out + term
        return out

    def frobenius(self) -> 'SymbolicMElement':
        """p-th power: coefficients to the p, x_v^(pi) = (x_v + kappa_v)^i."""
        ctx = self.ctx
        out = ctx.zero()
        for (i, j), c in self.coeffs.items():
            term = ctx.const(c.frobenius())
            if i:
                term = term * ctx._x_plus_kappa_pow(1, i)
            if j:
                term = term * ctx._x_plus_kappa_pow(2, j)
            out = out + term
        return out

    def wp(self) -> 'SymbolicMElement':
        return self.frobenius() - self

    def substitute_shift(self, var: int, amount: int = 1) -> 'SymbolicMElement':
        """x_var -> x_var + amount (amount an integer mod p); degree is stable."""
        ctx = self.ctx
        out: dict = {}
        for (i, j), c in self.coeffs.items():
            deg = i if var == 1 else j
            for k in range(deg + 1):
                mult = (math.comb(deg, k) * amount ** (deg - k)) % ctx.p
                if not mult:
                    continue
                key = (k, j) if var == 1 else (i, k)
                add = c.scale(mult)
                prev = out.get(key)
                out[key] = add if prev is None else prev + add
        return SymbolicMElement(ctx, out)

    def is_known_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, SymbolicMElement)
                and other.ctx.field is self.ctx.field
                and (self - other).is_known_zero())

    def to_dict(self) -> dict:
        return {f'x1^{i}*x2^{j}': format_series(c)
                for (i, j), c in sorted(self.coeffs.items())}

    def __repr__(self):
        if not self.coeffs:
            return '0'
        parts = []
        for (i, j), c in sorted(self.coeffs.items()):
            mono = []
            if i:
                mono.append('x1' if i == 1 else f'x1^{i}')
            if j:
                mono.append('x2' if j == 1 else f'x2^{j}')
            head = '*'.join(mono)
            parts.append(f'({c!r})' + (f'*{head}' if head else ''))
        return ' + '.join(parts)


def galois_action(e: SymbolicMElement, i: int) -> SymbolicMElement:
    """(sigma_i - 1)e, where sigma_i sends x_i to x_i + 1 and fixes the other."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    return e.substitute_shift(i) - e


def witt_symbolic(ctx: MContext, second: LaurentSeries) -> SymbolicMElement:
    """S(x1, c) for a base-field series c, as an element of K(x1)."""
    p = ctx.p
    out = ctx.zero()
    for k, coef in witt_coefficients(p).items():
        c = (second ** (p - k)).scale(coef)
        out = out + SymbolicMElement(ctx, {(k, 0): c})
    return out


@dataclass
class GeneratorData:
    """A group's generator package: wp(x3) = s_term + kappa3 plus the action table."""

    group: GroupKind
    kappas: tuple[ASGenerator, ASGenerator, ASGenerator]
    ctx: MContext
    s_term: SymbolicMElement
    action: dict  # (i, j) -> SymbolicMElement, the (sigma_i - 1)x_j table

    def to_dict(self) -> dict:
        return {
            'group': self.group.value,
            'kappa1': format_series(self.kappas[0].value),
            'kappa2': format_series(self.kappas[1].value),
            'kappa3': format_series(self.kappas[2].value),
            's_term': self.s_term.to_dict(),
            'action': {f'sigma{i}-x{j}': repr(e) for (i, j), e in sorted(self.action.items())},
        }

    def pretty(self) -> str:
        lines = [f"group: {self.group.value}",
                 f"wp(x1) = {self.kappas[0].value!r}",
                 f"wp(x2) = {self.kappas[1].value!r}",
                 f"wp(x3) = {self.s_term!r} + ({self.kappas[2].value!r})"]
        for (i, j), e in sorted(self.action.items()):
            lines.append(f"(sigma{i}-1)x{j} = {e!r}")
        return '\n'.join(lines)


def build_generators(group, kappa1, kappa2, kappa3) -> GeneratorData:
    """Assemble s(x1, x2) and the full action table for the given group.

    The pair (kappa1, kappa2) is normalized first (raises DependentGenerators
    if it is not independent); kappa3 is auto-reduced.
    """
    if isinstance(group, str):
        group = GroupKind.parse(group)
    g1, g2 = normalized_pair(kappa1, kappa2)
    g3 = reduce_K(kappa3)
    p = g1.field.p
    group.check_characteristic(p)
    ctx = MContext(g1.value, g2.value)
    x1, x2 = ctx.x(1), ctx.x(2)
    k1c, k2c = ctx.const(g1.value), ctx.const(g2.value)
    one = ctx.const(1)

    s_term = -(k2c * x1)
    if group is GroupKind.Q8:
        s_term = s_term + k1c * x1 + k2c * x2
    elif group is GroupKind.D8:
        s_term = s_term + k1c * x1
    elif group is GroupKind.MOD:
        s_term = s_term + witt_symbolic(ctx, g1.value)
    # HEIS adds nothing

    action: dict = {}
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if (i, j) in ((1, 3), (2, 3)):
                continue
            action[(i, j)] = one if i == j else ctx.zero()
    row13 = -x2
    if group in (GroupKind.Q8, GroupKind.D8):
        row13 = row13 + x1
    elif group is GroupKind.MOD:
        row13 = row13 + witt_symbolic(ctx, LaurentSeries.one(ctx.field))
    action[(1, 3)] = row13
    action[(2, 3)] = x2 if group is GroupKind.Q8 else ctx.zero()
    return GeneratorData(group=group, kappas=(g1, g2, g3), ctx=ctx,
                         s_term=s_term, action=action)


def verify_galois(gd: GeneratorData):
    """Certify that adjoining x3 stays Galois over K.

    For i = 1, 2 it checks wp((sigma_i - 1)x3) == (sigma_i - 1)(s_term +
    kappa3) as exact symbolic elements, exhibiting the action row as the
    preimage witness.  Returns (True, witnesses) or (False, offending
    differences); never raises.
    """
    witnesses = {}
    offending = {}
    kappa3 = gd.ctx.const(gd.kappas[2].value)
    target = gd.s_term + kappa3
    for i in (1, 2):
        row = gd.action[(i, 3)]
        lhs = row.wp()
        rhs = galois_action(target, i)
        if lhs == rhs:
            witnesses[i] = row
        else:
            offending[i] = lhs - rhs
    if offending:
        return False, offending
    return True, witnesses


def commutator_check(gd: GeneratorData) -> bool:
    """(sigma_1 sigma_2 - sigma_2 sigma_1) x3 == 1, from the action rows."""
    a1 = gd.action[(1, 3)]
    a2 = gd.action[(2, 3)]
    delta = galois_action(a2, 1) - galois_action(a1, 2)
    return delta == gd.ctx.const(1)


def verify_witt_identities(kappa1) -> bool:
    """Two exact identities in L = K(x1): Tr S(x1, 1) = 1 and
    (sigma_1 - 1) S(x1, kappa1) = wp(S(x1, 1))."""
    g1 = reduce_K(kappa1)
    fld = g1.field
    ctx = MContext(g1.value, LaurentSeries.zero(fld))
    s_one = witt_symbolic(ctx, LaurentSeries.one(fld))
    trace = ctx.zero()
    for k in range(fld.p):
        trace = trace + s_one.substitute_shift(1, k)
    if trace != ctx.const(1):
        return False
    s_kappa = witt_symbolic(ctx, g1.value)
    return galois_action(s_kappa, 1) == s_one.wp()
