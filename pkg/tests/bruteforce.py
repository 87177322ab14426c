"""Independent brute-force computation of the base-field group valuation.

Reduces kappa against the F_p-span of wp-images of all monomials in an
exponent window by plain Gaussian elimination; shares no code with
ramify.artin_schreier.reduce_K beyond the field arithmetic.  Working at a
finite exponent cutoff is harmless because every candidate valuation of a
nontrivial coset is <= 0.
"""

from ramify.field_core import LaurentSeries
from ramify.artin_schreier import Defect, wp


def df_K_bruteforce(kappa: LaurentSeries, window: int) -> Defect:
    fld = kappa.field
    p = fld.p
    cutoff = p * p * window + 1
    basis = fld.fp_basis()

    def vec_of(series):
        out = {}
        for e, c in series.terms.items():
            if e >= cutoff:
                continue
            for idx in range(fld.f):
                if c.coords[idx]:
                    out[(e, idx)] = c.coords[idx]
        return out

    def leading(vec):
        return min(vec) if vec else None

    def sub_scaled(vec, other, factor):
        for key, val in other.items():
            s = (vec.get(key, 0) - factor * val) % p
            if s:
                vec[key] = s
            else:
                vec.pop(key, None)

    echelon = {}

    def insert(vec):
        while vec:
            piv = leading(vec)
            row = echelon.get(piv)
            if row is None:
                inv = pow(vec[piv], -1, p)
                echelon[piv] = {k: (v * inv) % p for k, v in vec.items()}
                return
            sub_scaled(vec, row, vec[piv])

    for a in range(-window, cutoff):
        for c in basis:
            img = wp(LaurentSeries.monomial(fld, c, a))
            v = vec_of(img)
            if v:
                insert(dict(v))

    target = vec_of(kappa)
    while target:
        piv = leading(target)
        row = echelon.get(piv)
        if row is None:
            break
        sub_scaled(target, row, target[piv])
    if not target:
        return Defect.infinite()
    exps = {e for (e, _) in target}
    v = min(exps)
    if v < 0:
        return Defect.finite(v)
    if v == 0:
        return Defect.zero()
    # only exponents above zero survive the window; they lie in wp(M_K)
    return Defect.infinite()
