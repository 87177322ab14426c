"""Decomposition of the larger generator over powers of the smaller one.

Given a normalized pair (beta1, beta2) of reduced generators with breaks
u1 <= u2 (both coprime to p), beta2 is rewritten modulo K^wp as

    beta2 = mu_0^p + sum_{i=1}^{p-1} mu_i^p beta1^i

by a greedy peel: the class of the leading exponent n mod p picks the unique
i with n == -i*u1 (mod p); a p-th root against the leading coefficient of
beta1^i peels one monomial of mu_i; exponents divisible by p are folded
upward (c t^(pn) == c^(1/p) t^n mod K^wp) and positive exponents are dropped.
The residual valuation strictly increases, so this terminates, and the result
satisfies: mu_0 is a constant outside wp(F_q) or zero, and every nonzero
mu_i^p beta1^i has negative valuation.

From the mu_i the scalar parameters feeding the break bounds are read off:

    r = -v(sum_{i=1}^{p-2} mu_i^p beta1^i),   s = -v(mu_{p-1}^p beta1^{p-1}),

the epsilon / t data of the mu_{p-1} = -1 (mod M_K) branch, and at p = 2 the
quaternion parameters (m, omega, epsilon, e).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (InsufficientPrecision, NonCoprimeValuation,
                     PreconditionViolated, WrongCharacteristic)
from .field_core import INF, FqElem, LaurentSeries, ff_wp_solve, frobenius_inv
from .artin_schreier import ASGenerator, reduce_K, normalized_pair
from .cp_ext import CpExtension, ExtElement, wp_ext


@dataclass
class DecompData:
    """Output of decompose: the mu_i plus every derived scalar parameter."""

    beta1: ASGenerator
    beta2: ASGenerator
    u1: int
    u2: int
    mu: tuple[LaurentSeries, ...]
    r: int | None
    s: int | None
    t: int | None
    epsilon: LaurentSeries
    e: int | None
    mu_last_is_minus_one: bool
    omega: FqElem | None = None   # leading residue of mu, p = 2 equal-break case
    m: int | None = None          # p = 2: u2 = u1 + 2m
    notes: list = dc_field(default_factory=list)

    @property
    def field(self):
        return self.beta1.field


def decompose(beta1, beta2) -> DecompData:
    """Express beta2 over the K^p-basis of beta1-powers; see module docstring.

    Expects a pair already ordered/normalized (u1 <= u2, independent leading
    coefficients when the breaks agree); raises PreconditionViolated
    otherwise.  Raw series are reduced on the way in.
    """
    b1 = reduce_K(beta1)
    b2 = reduce_K(beta2)
    if not (b1.df.is_finite and b2.df.is_finite):
        raise PreconditionViolated("both generators must have finite defect")
    fld = b1.field
    p = fld.p
    u1, u2 = b1.break_, b2.break_
    if u1 % p == 0 or u2 % p == 0:
        raise NonCoprimeValuation("breaks must be coprime to p")
    if u1 > u2:
        raise PreconditionViolated("expected u1 <= u2; order the pair first")

    if b1.value.prec < 1 or b2.value.prec < 1:
        raise InsufficientPrecision("generators must be known through their constant terms")

    u1_inv = pow(u1, -1, p)
    beta1_pow = [LaurentSeries.one(fld)]
    for _ in range(p - 1):
        beta1_pow.append(beta1_pow[-1] * b1.value)
    lead1 = b1.value.leading_coeff()

    mu_terms: list[dict[int, FqElem]] = [{} for _ in range(p)]
    work = dict(b2.value.terms)
    const = fld.zero
    while work:
        n = min(work)
        c = work[n]
        if not c or n > 0:
            del work[n]
            continue
        if n == 0:
            const = const + c
            del work[n]
            continue
        if n % p == 0:
            del work[n]
            d = frobenius_inv(c)
            m = n // p
            prev = work.get(m)
            work[m] = d if prev is None else prev + d
            continue
        i = ((-n) * u1_inv) % p
        m = (n + i * u1) // p
        cprime = frobenius_inv(c / (lead1 ** i))
        prev = mu_terms[i].get(m)
        mu_terms[i][m] = cprime if prev is None else prev + cprime
        peel = LaurentSeries.monomial(fld, cprime, m).frobenius() * beta1_pow[i]
        for e2, c2 in peel.terms.items():
            if e2 > 0:
                continue
            s = work.get(e2, fld.zero) - c2
            if s:
                work[e2] = s
            else:
                work.pop(e2, None)
        # the leading term cancels exactly
        if n in work:
            raise AssertionError("peel failed to cancel the leading term")

    mu = [LaurentSeries(fld, terms) for terms in mu_terms]
    if const:
        omega0 = ff_wp_solve(const)
        if omega0 is None:
            mu[0] = LaurentSeries.monomial(fld, frobenius_inv(const), 0)
    notes = []

    if u1 == u2:
        c = mu[1].coeff(0) if not mu[1].is_known_zero() else fld.zero
        if mu[1].is_known_zero() or mu[1].valuation() < 0 or c.in_prime_field():
            raise PreconditionViolated(
                "equal-break pair is not normalized: mu_1 must be a unit "
                "outside F_p + M_K (run independent_pair first)")

    r_sum = LaurentSeries.zero(fld)
    for i in range(1, p - 1):
        if not mu[i].is_known_zero():
            r_sum = r_sum + mu[i].frobenius() * beta1_pow[i]
    r = -r_sum.valuation() if not r_sum.is_known_zero() else None

    last = mu[p - 1]
    if not last.is_known_zero():
        s = -(last.frobenius() * beta1_pow[p - 1]).valuation()
    else:
        s = None

    eps = last + fld.one  # mu_{p-1} + 1; relevant when it sits in M_K
    minus_one = (not last.is_known_zero()) and eps.vbound() > 0
    t = None
    if minus_one and not eps.is_known_zero():
        t = -(eps.frobenius() * beta1_pow[p - 1]).valuation()
    if not minus_one:
        eps = LaurentSeries.zero(fld)

    data = DecompData(beta1=b1, beta2=b2, u1=u1, u2=u2, mu=tuple(mu),
                      r=r, s=s, t=t, epsilon=eps,
                      e=(eps.valuation() if not eps.is_known_zero() else None),
                      mu_last_is_minus_one=minus_one, notes=notes)

    if p == 2:
        data.m = (u2 - u1) // 2
        muval = mu[1]
        if data.m == 0:
            omega = muval.coeff(0)
            tail = muval - omega
            data.omega = omega
            data.epsilon = tail
            data.e = tail.valuation() if not tail.is_known_zero() else None
        else:
            data.omega = None
            data.epsilon = LaurentSeries.zero(fld)
            data.e = None
    return data


@dataclass
class Q8Prep:
    """Quaternion preparation: the two pieces of the third-level generator.

    s1 lives in L = K(x1) and is materialized; s2 lives in the biquadratic
    field and is carried as a valuation descriptor only.
    """

    s1: ExtElement
    v_s1: int | None          # None encodes s1 == 0
    s2_desc: str
    v_s2: int
    mu: LaurentSeries
    mu0: LaurentSeries
    m: int
    omega: FqElem | None
    epsilon: LaurentSeries
    e: int | None
    omega_cubed_is_one: bool | None
    epsilon_truncated: bool
    decomp: DecompData


def q8_prepare(kappa1, kappa2) -> Q8Prep:
    """Build the quaternion data for p = 2; see Q8Prep.

    For distinct breaks (m > 0):
        s1 = (1 + mu^2 + mu^3) kappa1 x1 + mu0^2 (1 + mu) x1,
        s2 = (mu^2 kappa1 + mu0^2) X,          X = x2 - mu x1,
    and for equal breaks (m = 0), after folding mu^3 kappa1 x1 through
    wp(mu x1 X + mu X):
        s1 = (1 + mu^2 + mu^4) kappa1 x1 + mu0^2 (1 + mu + mu^2) x1,
        s2 = wp(mu) x1 X + wp(mu) X + mu0^2 X,
    with mu = omega + epsilon.  When v(epsilon) = e >= u1/2 the tail moves
    kappa2 by an element of K^wp only, so epsilon is truncated to zero (the
    truncation is recorded).  All valuations are measured, not assumed.
    """
    g1 = reduce_K(kappa1)
    if g1.field.p != 2:
        raise WrongCharacteristic("quaternion preparation needs p = 2")
    d = decompose(g1, kappa2)
    fld = d.field
    u1 = d.u1
    mu = d.mu[1]
    mu0 = d.mu[0]
    m = d.m
    ext = CpExtension(d.beta1)
    kap1 = d.beta1.value
    zero = LaurentSeries.zero(fld)
    one = LaurentSeries.one(fld)
    truncated = False
    omega_cubed = None

    if m > 0:
        coeff = (one + mu * mu + mu * mu * mu) * kap1 + mu0 * mu0 * (one + mu)
        s1 = ExtElement(ext, (zero, coeff))
        # X = x2 - mu x1 satisfies wp(X) = -wp(mu) x1 + mu0^2 over L
        wpX = ExtElement(ext, (mu0 * mu0, -(mu.frobenius() - mu)))
        v_mx = wpX.valuation()
        if v_mx % 2 == 0:
            raise AssertionError("wp(X) should have odd valuation over L")
        v_M_X = v_mx  # v_M(X) = -break(L(X)/L) = v_L(wp(X))
        inner = mu * mu * kap1 + mu0 * mu0
        v_s2 = 4 * inner.valuation() + v_M_X
        prep = Q8Prep(s1=s1, v_s1=(s1.valuation() if not s1.is_known_zero() else None),
                      s2_desc="(mu^2*kappa1 + mu0^2) * X", v_s2=v_s2,
                      mu=mu, mu0=mu0, m=m, omega=None, epsilon=zero, e=None,
                      omega_cubed_is_one=None, epsilon_truncated=False, decomp=d)
        return prep

    # equal breaks
    omega = d.omega
    eps = d.epsilon
    e = d.e
    if e is not None and 2 * e >= u1:
        # (omega + eps)^2 kappa1 == omega^2 kappa1 mod M_K, and M_K < K^wp
        eps = zero
        e = None
        truncated = True
        d.notes.append("epsilon truncated to 0 (e >= u1/2 moves kappa2 by K^wp only)")
    mu_eff = LaurentSeries.monomial(fld, omega, 0) + eps
    omega_cubed = (omega ** 3) == fld.one
    omp = fld.one + omega + omega * omega          # 1 + omega + omega^2
    wpe = eps.frobenius() - eps                    # epsilon + epsilon^2 in char 2
    coeff = (kap1.scale(omp * omp) + (mu0 * mu0).scale(omp)
             + wpe * wpe * kap1 + wpe * (mu0 * mu0))
    s1 = ExtElement(ext, (zero, coeff))
    # s2 = wp(mu) x1 X + wp(mu) X + mu0^2 X with v_M(x1) = -2u1 and
    # v_M(X) = v_L(wp(X)) measured below
    wp_mu = mu_eff.frobenius() - mu_eff
    wpX = ExtElement(ext, (mu0 * mu0, -wp_mu))
    v_M_X = wpX.valuation()
    cands = [4 * wp_mu.valuation() + (-2 * u1) + v_M_X,
             4 * wp_mu.valuation() + v_M_X]
    if not mu0.is_known_zero():
        cands.append(4 * (mu0 * mu0).valuation() + v_M_X)
    v_s2 = min(cands)
    return Q8Prep(s1=s1, v_s1=(s1.valuation() if not s1.is_known_zero() else None),
                  s2_desc="wp(mu)*x1*X + wp(mu)*X + mu0^2*X", v_s2=v_s2,
                  mu=mu_eff, mu0=mu0, m=0, omega=omega, epsilon=eps, e=e,
                  omega_cubed_is_one=omega_cubed, epsilon_truncated=truncated,
                  decomp=d)
