"""Break bounds and break sequences for the four nonabelian groups of order p^3.

Two independent routes compute the same quantity and are cross-checked on
every call:

* bound_BG evaluates the closed-form lower bound B_G directly from the
  decomposition parameters (r, s, t, e, omega), and
* ubar3 walks the auxiliary-extension ladder: break data t_0..t_4 of the
  pieces of the third-level generator over the intermediate fields, lifted to
  the biquadratic/bicyclic level M by s_i = p*t_i - (p-1)*l, then converted to
  an upper break.

The closed-form relative defects of the two degree-p work horses
(df_beta2_y1 for beta2*y1, df_dm_term for -beta2*y1 + S(y1, beta1)) are what
the brute-force oracle in cp_ext is tested against.

Conventions: upper breaks are exact rationals with denominator dividing p^2;
lower breaks are positive integers coprime to p; u1 = l1 and
u_i - u_{i-1} = (l_i - l_{i-1}) / p^(i-1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (DegenerateTower, NonIntegralLower, PreconditionViolated,
                     SelfCheckFailed, WrongCharacteristic)
from .field_core import LaurentSeries
from .artin_schreier import ASGenerator, Defect, reduce_K, normalized_pair
from .decomp import DecompData, Q8Prep, decompose, q8_prepare


class GroupKind(enum.Enum):
    Q8 = 'q8'
    D8 = 'd8'
    HEIS = 'heis'
    MOD = 'mod'

    @staticmethod
    def parse(name: str) -> 'GroupKind':
        try:
            return GroupKind(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown group {name!r}; expected one of "
                             f"{[g.value for g in GroupKind]}") from None

    def check_characteristic(self, p: int):
        if self in (GroupKind.Q8, GroupKind.D8) and p != 2:
            raise WrongCharacteristic(f"{self.value} requires p = 2")
        if self is GroupKind.HEIS and p == 2:
            raise WrongCharacteristic("heis requires p > 2")
        # MOD exists for every p; at p = 2 it coincides with D8.


class SubgroupChoice(enum.Enum):
    """Which index-p subgroup carries the middle lower break when u2 != u1.

    SIGMA1P_SIGMA2 is the unswapped labelling (y_i = x_i); SIGMA1_FULL is the
    swapped one (y1 = x2, y2 = x1).  Irrelevant when u2 == u1.
    """

    SIGMA1_FULL = 'sigma1'
    SIGMA1P_SIGMA2 = 'sigma1p-sigma2'

    @staticmethod
    def parse(name: str) -> 'SubgroupChoice':
        for c in SubgroupChoice:
            if c.value == name.strip().lower():
                return c
        raise ValueError(f"unknown subgroup choice {name!r}")


@dataclass(frozen=True)
class BreakSequence:
    upper: tuple[Fraction, Fraction, Fraction]
    lower: tuple[int, int, int]
    multiplicities: tuple[tuple[Fraction, int], ...]

    @staticmethod
    def from_upper(p: int, upper) -> 'BreakSequence':
        upper = tuple(Fraction(u) for u in upper)
        lower = upper_lower_convert(p, upper)
        mults = []
        for u in upper:
            if mults and mults[-1][0] == u:
                mults[-1] = (u, mults[-1][1] + 1)
            else:
                mults.append((u, 1))
        return BreakSequence(upper, lower, tuple(mults))


@dataclass
class ClassificationResult:
    group: GroupKind
    choice: SubgroupChoice
    bound: Fraction            # B_G
    u3: Fraction
    sequence: BreakSequence
    hasse_arf_integral: bool
    trace: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'group': self.group.value,
            'choice': self.choice.value,
            'B': _rat(self.bound),
            'u3': _rat(self.u3),
            'upper': [_rat(u) for u in self.sequence.upper],
            'lower': list(self.sequence.lower),
            'multiplicities': [[_rat(u), m] for u, m in self.sequence.multiplicities],
            'hasse_arf_integral': self.hasse_arf_integral,
            'trace': self.trace,
        }


def _rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f'{x.numerator}/{x.denominator}'


# ---------------------------------------------------------------------------
# closed-form relative defects
# ---------------------------------------------------------------------------

def df_beta2_y1(d: DecompData, u1: int) -> Defect:
    """df over K(y1) of beta2*y1: -max{p s + u1, p r - (p-2) u1}."""
    p = d.field.p
    cands = []
    if d.s is not None:
        cands.append(p * d.s + u1)
    if d.r is not None:
        cands.append(p * d.r - (p - 2) * u1)
    if not cands:
        raise DegenerateTower("beta2 has no beta1-power component")
    return Defect.finite(-max(cands))


def df_dm_term(d: DecompData, u1: int) -> Defect:
    """df over K(y1) of -beta2*y1 + S(y1, beta1).

    Branches on whether mu_{p-1} is congruent to -1 mod M_K: the generic value
    -max{(p^2-p+1) u1, p s + u1, p r - (p-2) u1} degenerates there to
    -max{(p^2-2p+2) u1, p t + u1, p r - (p-2) u1}.
    """
    p = d.field.p
    cands = []
    if d.r is not None:
        cands.append(p * d.r - (p - 2) * u1)
    if d.mu_last_is_minus_one:
        cands.append((p * p - 2 * p + 2) * u1)
        if d.t is not None:
            cands.append(p * d.t + u1)
    else:
        cands.append((p * p - p + 1) * u1)
        if d.s is not None:
            cands.append(p * d.s + u1)
    return Defect.finite(-max(cands))


# ---------------------------------------------------------------------------
# break transfer
# ---------------------------------------------------------------------------

def lift_break(a: int, l: int, p: int) -> int:
    """Break over M of the C_p-extension cut out by an L-reduced generator.

    For M/L a ramified C_p-extension with break l and a generator of defect
    -a over L with a > l, the break over M is p*a - (p-1)*l.  Refuses a <= l,
    where only an upper bound is available.
    """
    if a <= l:
        raise PreconditionViolated(f"lift_break needs a > l (got a={a}, l={l})")
    if a % p == 0:
        raise PreconditionViolated("a must be coprime to p")
    return p * a - (p - 1) * l


def upper_lower_convert(p: int, upper) -> tuple[int, int, int]:
    """(u1,u2,u3) -> (l1,l2,l3): l1 = u1, l_i = l_{i-1} + p^(i-1)(u_i - u_{i-1})."""
    u1, u2, u3 = (Fraction(u) for u in upper)
    if not (u1 <= u2 <= u3):
        raise PreconditionViolated("upper breaks must be nondecreasing")
    lower = []
    prev_l, prev_u = Fraction(0), Fraction(0)
    for i, u in enumerate((u1, u2, u3)):
        l = prev_l + p ** i * (u - prev_u)
        if l.denominator != 1 or l <= 0 or l % p == 0:
            raise NonIntegralLower(
                f"lower break {l} is not a positive integer coprime to {p}")
        lower.append(int(l))
        prev_l, prev_u = l, u
    return tuple(lower)


def lower_upper_convert(p: int, lower) -> tuple[Fraction, Fraction, Fraction]:
    """Inverse of upper_lower_convert."""
    l1, l2, l3 = lower
    if not (0 < l1 <= l2 <= l3):
        raise PreconditionViolated("lower breaks must be positive and nondecreasing")
    u1 = Fraction(l1)
    u2 = u1 + Fraction(l2 - l1, p)
    u3 = u2 + Fraction(l3 - l2, p * p)
    return u1, u2, u3


# ---------------------------------------------------------------------------
# Theorem-level bounds, two ways
# ---------------------------------------------------------------------------

def _swapped(u1: int, u2: int, choice: SubgroupChoice) -> bool:
    return u2 != u1 and choice is SubgroupChoice.SIGMA1_FULL


def bound_BG(group: GroupKind, d: DecompData, prep: Q8Prep | None,
             u1: int, u2: int, choice: SubgroupChoice) -> Fraction:
    """The closed-form lower bound B_G for the third upper break."""
    p = d.field.p
    group.check_characteristic(p)
    if group is GroupKind.D8:
        return Fraction(2 * u2 if _swapped(u1, u2, choice) else u1 + u2)
    if group is GroupKind.HEIS:
        cands = []
        if d.s is not None:
            cands.append(Fraction(d.s + u1))
        if d.r is not None:
            cands.append(d.r + Fraction(u1, p))
        if not cands:
            raise DegenerateTower("no bound candidates for heis")
        return max(cands)
    if group is GroupKind.MOD:
        if _swapped(u1, u2, choice):
            return Fraction(p * u2)
        if d.mu_last_is_minus_one:
            cands = [(p - 1) * u1 + Fraction(u1, p)]
            if d.t is not None:
                cands.append(Fraction(d.t + u1))
        else:
            cands = [Fraction(p * u1)]
            if d.s is not None:
                cands.append(Fraction(d.s + u1))
        if d.r is not None:
            cands.append(d.r + Fraction(u1, p))
        return max(cands)
    if group is GroupKind.Q8:
        if prep is None:
            raise PreconditionViolated("Q8 needs the quaternion preparation")
        if u2 != u1 or not prep.omega_cubed_is_one:
            return Fraction(2 * u2)
        cands = [Fraction(3 * u1, 2)]
        if prep.e is not None:
            cands.append(Fraction(2 * u1 - 2 * prep.e))
        return max(cands)
    raise AssertionError("unreachable")


def ubar3(group: GroupKind, d: DecompData, prep: Q8Prep | None,
          u1: int, u2: int, choice: SubgroupChoice):
    """Third upper break of the kappa3-free tower, via the auxiliary ladder.

    Returns (ubar3, ladder) where the ladder records every intermediate value.
    Must agree with bound_BG; classify() enforces that.
    """
    p = d.field.p
    group.check_characteristic(p)
    l2 = p * u2 - (p - 1) * u1
    ladder: dict = {'l2': l2, 'branch': None}

    def t0():
        cands = []
        if d.s is not None:
            cands.append(p * d.s + u1)
        if d.r is not None:
            cands.append(p * d.r - (p - 2) * u1)
        if not cands:
            raise DegenerateTower("empty ladder for t0")
        return max(cands)

    if group is GroupKind.HEIS:
        ladder['branch'] = 'heis'
        ladder['t0'] = -df_beta2_y1(d, u1).value
        ladder['s0'] = lift_break(ladder['t0'], l2, p)
        lbar3 = ladder['s0']
    elif group in (GroupKind.D8, GroupKind.MOD) and not _swapped(u1, u2, choice):
        ladder['branch'] = 'dm-unswapped' + ('-minus1' if d.mu_last_is_minus_one else '')
        ladder['t1'] = -df_dm_term(d, u1).value
        ladder['s1'] = lift_break(ladder['t1'], l2, p)
        lbar3 = ladder['s1']
    elif group in (GroupKind.D8, GroupKind.MOD):
        ladder['branch'] = 'dm-swapped'
        ladder['t0'] = t0()
        ladder['t2'] = (p * p - p + 1) * u2
        ladder['s0'] = lift_break(ladder['t0'], l2, p)
        ladder['s2'] = lift_break(ladder['t2'], u1, p)
        if ladder['s0'] >= ladder['s2']:
            raise SelfCheckFailed("expected s0 < s2 in the swapped branch")
        lbar3 = ladder['s2']
    else:  # Q8
        if prep is None:
            raise PreconditionViolated("Q8 needs the quaternion preparation")
        ladder['t4'] = -prep.v_s2
        ladder['s4'] = ladder['t4']
        if prep.v_s1 is None:
            ladder['branch'] = 'q8-s1-zero'
            lbar3 = ladder['s4']
        else:
            ladder['branch'] = 'q8'
            ladder['t3'] = -prep.v_s1
            ladder['s3'] = lift_break(ladder['t3'], l2, p)
            lbar3 = max(ladder['s3'], ladder['s4'])
    ladder['lbar3'] = lbar3
    ub = u2 + Fraction(lbar3 - l2, p * p)
    ladder['ubar3'] = _rat(ub)
    return ub, ladder


def compose_with_kappa3(ub3: Fraction, kappa3) -> tuple[Fraction, 'BreakSequence', dict]:
    """Fold the base-field tail kappa3 into the third break.

    u3 = max(ubar3, b3) when kappa3 has a finite break b3, else u3 = ubar3.
    The two candidates are never equal (ubar3 is non-integral or divisible by
    p; b3 is coprime to p); that disjointness is asserted.
    """
    info: dict = {}
    gen = reduce_K(kappa3) if not isinstance(kappa3, ASGenerator) else kappa3
    info['kappa3_df'] = repr(gen.df)
    ub3 = Fraction(ub3)
    if gen.df.is_finite:
        b3 = -gen.df.value
        if Fraction(b3) == ub3:
            raise SelfCheckFailed(f"ubar3 == b3 == {b3}; the types should be disjoint")
        u3 = max(ub3, Fraction(b3))
        info['b3'] = b3
    else:
        u3 = ub3
        info['b3'] = None
    return u3, info


def classify(group, beta1, beta2, kappa3,
             choice: SubgroupChoice = SubgroupChoice.SIGMA1P_SIGMA2) -> ClassificationResult:
    """End-to-end classification of the degree-p^3 tower's upper breaks.

    Pipeline: normalize the generator pair, decompose, build the quaternion
    preparation when needed, evaluate the bound by both routes (they must
    agree exactly), then fold in kappa3 and assemble the break sequence.
    """
    if isinstance(group, str):
        group = GroupKind.parse(group)
    if isinstance(choice, str):
        choice = SubgroupChoice.parse(choice)
    b1, b2 = normalized_pair(beta1, beta2)
    p = b1.field.p
    group.check_characteristic(p)
    u1, u2 = b1.break_, b2.break_
    d = decompose(b1, b2)
    prep = q8_prepare(b1, b2) if group is GroupKind.Q8 else None
    bound = bound_BG(group, d, prep, u1, u2, choice)
    ub, ladder = ubar3(group, d, prep, u1, u2, choice)
    if bound != ub:
        raise SelfCheckFailed(
            f"bound_BG = {bound} but the ladder gives ubar3 = {ub}")
    u3, compose_info = compose_with_kappa3(ub, kappa3)
    seq = BreakSequence.from_upper(p, (u1, u2, u3))
    trace = {
        'p': p, 'q': b1.field.q,
        'u1': u1, 'u2': u2,
        'beta1': repr(b1.value), 'beta2': repr(b2.value),
        'r': d.r, 's': d.s, 't': d.t,
        'mu_last_is_minus_one': d.mu_last_is_minus_one,
        'ladder': ladder,
        'B': _rat(bound),
        'notes': list(d.notes),
    }
    if prep is not None:
        trace['q8'] = {
            'm': prep.m,
            'omega': repr(prep.omega) if prep.omega is not None else None,
            'omega_cubed_is_one': prep.omega_cubed_is_one,
            'e': prep.e,
            'epsilon_truncated': prep.epsilon_truncated,
            'v_s1': prep.v_s1, 'v_s2': prep.v_s2,
        }
    trace.update(compose_info)
    return ClassificationResult(
        group=group, choice=choice, bound=bound, u3=u3, sequence=seq,
        hasse_arf_integral=(Fraction(u3).denominator == 1), trace=trace)
