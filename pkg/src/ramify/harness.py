"""Randomized instance generation and the oracle-vs-closed-form self-test.

Shared by the test suite and the CLI ``selftest`` command.  Everything is
driven by an explicit random.Random so runs are reproducible from a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .field_core import FieldSpec, LaurentSeries, field
from .artin_schreier import ASGenerator, independent_pair, reduce_K
from .cp_ext import CpExtension, ExtElement, reduce_LK_oracle, witt_term
from .decomp import decompose, q8_prepare
from .classify import (GroupKind, SubgroupChoice, bound_BG, df_beta2_y1,
                       df_dm_term, ubar3)


def random_fq(rng: random.Random, fld: FieldSpec, nonzero: bool = False):
    while True:
        c = fld.from_index(rng.randrange(fld.q))
        if c or not nonzero:
            return c


def coprime_breaks(p: int, lo: int, hi: int) -> list[int]:
    return [u for u in range(lo, hi + 1) if u % p != 0]


def random_reduced_generator(rng: random.Random, fld: FieldSpec, brk: int,
                             extra_terms: int = 2, allow_constant: bool = True) -> ASGenerator:
    """A canonically reduced generator with break exactly ``brk``.

    Leading term at t^-brk plus a few terms at higher coprime-to-p exponents,
    optionally a constant; passing through reduce_K keeps the contract honest.
    """
    p = fld.p
    if brk <= 0 or brk % p == 0:
        raise ValueError("break must be positive and coprime to p")
    terms = {-brk: random_fq(rng, fld, nonzero=True)}
    pool = [-e for e in coprime_breaks(p, 1, brk - 1)]
    rng.shuffle(pool)
    for e in pool[:rng.randint(0, extra_terms)]:
        terms[e] = random_fq(rng, fld, nonzero=True)
    if allow_constant and rng.random() < 0.3:
        terms[0] = random_fq(rng, fld)
    return reduce_K(LaurentSeries.from_terms(fld, terms))


def random_pair(rng: random.Random, fld: FieldSpec, u1: int, u2: int,
                max_tries: int = 50):
    """A normalized independent pair with breaks exactly (u1, u2), or None.

    Equal breaks require a leading-coefficient ratio outside F_p, which is
    impossible over the prime field; such requests return None quickly.
    """
    if u1 == u2 and fld.f == 1:
        return None
    for _ in range(max_tries):
        g1 = random_reduced_generator(rng, fld, u1)
        g2 = random_reduced_generator(rng, fld, u2)
        ok, pair = independent_pair(g1, g2)
        if ok and pair[0].break_ == u1 and pair[1].break_ == u2:
            return pair
    return None


def random_instance(rng: random.Random, fld: FieldSpec, umax: int = 25):
    """A normalized pair with random breaks u1 <= u2 <= umax."""
    breaks = coprime_breaks(fld.p, 1, umax)
    while True:
        u1, u2 = sorted((rng.choice(breaks), rng.choice(breaks)))
        pair = random_pair(rng, fld, u1, u2)
        if pair is not None:
            return pair


def engineered_minus_one_instance(rng: random.Random, fld: FieldSpec,
                                  umax: int = 9):
    """A pair whose decomposition has mu_{p-1} in -1 + M_K.

    Built over a monomial beta1 as beta2 = (-1 + tau)^p beta1^(p-1) + lower
    beta1-powers, tau in M_K (possibly zero), so the greedy split recovers the
    -1 residue exactly.
    """
    p = fld.p
    u1 = rng.choice(coprime_breaks(p, 1, max(1, umax // max(1, p - 1))))
    beta1 = LaurentSeries.monomial(fld, random_fq(rng, fld, nonzero=True), -u1)
    minus_one = LaurentSeries.monomial(fld, -1, 0)
    if rng.random() < 0.6:
        tau = LaurentSeries.monomial(fld, random_fq(rng, fld, nonzero=True),
                                     rng.randint(1, 2))
    else:
        tau = LaurentSeries.zero(fld)
    mu_last = minus_one + tau
    beta2 = mu_last.frobenius() * (beta1 ** (p - 1))
    # optionally salt other residue classes (keeps mu_{p-1} intact)
    for i in range(1, p - 1):
        if rng.random() < 0.4:
            m = rng.randint(-2, 0)
            if p * m - i * u1 < 0:
                mono = LaurentSeries.monomial(fld, random_fq(rng, fld, nonzero=True), m)
                beta2 = beta2 + mono.frobenius() * (beta1 ** i)
    ok, pair = independent_pair(reduce_K(beta1), reduce_K(beta2))
    if not ok or pair[0].break_ != u1:
        return None
    d = decompose(*pair)
    if not d.mu_last_is_minus_one:
        return None
    return pair


def random_ext_element(rng: random.Random, ext: CpExtension, depth: int = 12) -> ExtElement:
    """A random element of L with a handful of terms of valuation >= -depth."""
    fld = ext.field
    p = ext.p
    coeffs = [dict() for _ in range(p)]
    for _ in range(rng.randint(1, 4)):
        i = rng.randrange(p)
        a = rng.randint(-(depth // p) - 1, 1)
        if p * a - i * ext.b < -depth:
            continue
        coeffs[i][a] = random_fq(rng, fld, nonzero=True)
    return ExtElement(ext, tuple(LaurentSeries(fld, c) for c in coeffs))


# ---------------------------------------------------------------------------
# self-test
# ---------------------------------------------------------------------------

@dataclass
class SelfTestReport:
    p: int
    q: int
    trials: int
    seed: int
    checks: dict
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {'p': self.p, 'q': self.q, 'trials': self.trials, 'seed': self.seed,
                'checks': self.checks, 'failures': self.failures, 'ok': self.ok}


def groups_for(p: int) -> list[GroupKind]:
    if p == 2:
        return [GroupKind.Q8, GroupKind.D8, GroupKind.MOD]
    return [GroupKind.HEIS, GroupKind.MOD]


def run_selftest(p: int, f: int = 1, trials: int = 100, seed: int = 0,
                 umax: int = 25) -> SelfTestReport:
    """Oracle agreement, parameter congruences and dual-route equality.

    Per trial: draw a normalized pair, compare df_beta2_y1 and df_dm_term to
    the brute-force reduction oracle, check the (r, s) congruences, and check
    bound_BG == ubar3 for every group/choice combination valid at p.
    """
    fld = field(p, f)
    rng = random.Random(seed)
    checks = {'oracle_beta2_y1': 0, 'oracle_dm_term': 0,
              'parameter_congruences': 0, 'dual_route': 0}
    failures = []
    for trial in range(trials):
        b1, b2 = random_instance(rng, fld, umax)
        u1, u2 = b1.break_, b2.break_
        d = decompose(b1, b2)
        ext = CpExtension(b1)
        tag = f'trial {trial}: beta1={b1.value!r}, beta2={b2.value!r}'

        closed = df_beta2_y1(d, u1)
        e = ext.monomial(1, 0, 1).scale(b2.value)  # beta2 * y
        _, got = reduce_LK_oracle(ext, e)
        if got != closed:
            failures.append(f'{tag}: beta2*y oracle {got} != closed {closed}')
        else:
            checks['oracle_beta2_y1'] += 1

        closed = df_dm_term(d, u1)
        e = witt_term(ext) - ext.monomial(1, 0, 1).scale(b2.value)
        _, got = reduce_LK_oracle(ext, e)
        if got != closed:
            failures.append(f'{tag}: dm-term oracle {got} != closed {closed}')
        else:
            checks['oracle_dm_term'] += 1

        ok = True
        if d.s is not None and (d.s + u1) % p != 0:
            ok = False
            failures.append(f'{tag}: s = {d.s} not congruent to -u1 mod p')
        if d.r is not None and (d.r % p == 0 or (d.r + u1) % p == 0):
            ok = False
            failures.append(f'{tag}: r = {d.r} hits a forbidden class mod p')
        if max(x for x in (d.r, d.s) if x is not None) != u2:
            ok = False
            failures.append(f'{tag}: max(r, s) != u2 = {u2}')
        if ok:
            checks['parameter_congruences'] += 1

        ok = True
        prep = q8_prepare(b1, b2) if p == 2 else None
        for group in groups_for(p):
            for choice in SubgroupChoice:
                b = bound_BG(group, d, prep, u1, u2, choice)
                ub, _ = ubar3(group, d, prep, u1, u2, choice)
                if b != ub:
                    ok = False
                    failures.append(
                        f'{tag}: {group.value}/{choice.value} bound {b} != ladder {ub}')
        if ok:
            checks['dual_route'] += 1
    return SelfTestReport(p=p, q=fld.q, trials=trials, seed=seed,
                          checks=checks, failures=failures)
