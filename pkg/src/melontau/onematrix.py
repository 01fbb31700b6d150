"""The Hermitian one-matrix layer.

Conventions (used consistently everywhere):

    Z(t; N) = < exp( -N sum_{p>=0} t_p Tr M^p ) >   over the normalized
    Gaussian with <M_ij M_kl> = d_il d_jk / N,  so that

      * the whole t_0 dependence is the exact prefactor exp(-N^2 t_0),
      * d/dt_p Z = -N < Tr M^p ... >  uniformly, including p = 0,
      * the coefficient of prod t_p^{a_p} is
        (-N)^{|a|} / prod a_p! * < prod (Tr M^p)^{a_p} >.

The quartic-deformed ensemble used for the free energy / planar two-point /
orthogonal-polynomial checks inserts (-N t4 / 4 * Tr M^4) per vertex order,
which weighs a connected diagram by exactly N^{2-2g}.

Two independent constructions of Z are kept: trace-word moments (symbolic in
N) and, at concrete size, the eigenvalue route N! det[m_{i+j}(t)] built from
one-dimensional deformed Gaussian moments; they are cross-checked in tests.

Virasoro constraints are derived from invariance of the measure under
M -> M + eps M^{n+1}:

    L_n Z = sum_{d=0}^{n} N^-2 d_{t_d} d_{t_{n-d}} Z + d_{t_{n+2}} Z
            + sum_{p>=1} p t_p d_{t_{p+n}} Z  = 0        (n >= -1).
"""

from fractions import Fraction
from itertools import permutations
from math import comb, factorial

from .diffops import DiffOp
from .series import Monomial, Series, TruncSpec
from .wick import NPoly, hermitian_moment


def time_multisets(p_max, max_deg, max_weight=None):
    """Yield exponent dicts {p: a_p} for p >= 1 within the caps."""
    def rec(p, deg_left, weight_left, acc):
        if p < 1:
            yield dict(acc)
            return
        yield from rec(p - 1, deg_left, weight_left, acc)
        cap = deg_left
        if weight_left is not None:
            cap = min(cap, weight_left // p)
        for a in range(1, cap + 1):
            acc[p] = a
            yield from rec(p - 1, deg_left - a,
                           None if weight_left is None else weight_left - a * p,
                           acc)
            del acc[p]
    yield from rec(p_max, max_deg, max_weight, {})


def _t0_factor(trunc, colour, nsize=None):
    """exp(-N^2 t_0) as a series (concrete size if nsize given)."""
    s = Series(trunc)
    for k in range(trunc.max_time_deg + 1):
        coeff = Fraction((-1) ** k, factorial(k))
        times = (((colour, 0), k),) if k else ()
        if nsize is None:
            s.add_term(coeff, hn=4 * k, times=times)
        else:
            s.add_term(coeff * Fraction(nsize) ** (2 * k), times=times)
    return s


def z1mm_series(trunc, colour=1, nsize=None, engine="auto"):
    """Deformed Gaussian 1MM partition function under the truncation.

    Symbolic in N by default; at a concrete size (nsize) dispatches to the
    eigenvalue/Hankel route, which stays cheap when the truncation keeps
    high-weight words.
    """
    if nsize is not None:
        return z1mm_hankel(trunc, colour, nsize)
    out = Series(trunc)
    for alpha in time_multisets(trunc.p_max, trunc.max_time_deg,
                                trunc.max_time_weight):
        word = []
        for p, a in alpha.items():
            word.extend([p] * a)
        tot = sum(a for a in alpha.values())
        mom = hermitian_moment(word, engine=engine)
        if mom.is_zero():
            continue
        denom = 1
        for a in alpha.values():
            denom *= factorial(a)
        extra = Monomial(hn=2 * tot,
                         times=tuple(((colour, p), a)
                                     for p, a in sorted(alpha.items())))
        out = out + mom.to_series(trunc, extra=extra,
                                  coeff=Fraction((-1) ** tot, denom))
    return out.mul(_t0_factor(trunc, colour))


def onedim_gaussian_moment(m, nweight):
    """int x^m e^{-nweight x^2/2} dx / int e^{...} = (m-1)!! nweight^{-m/2}."""
    if m % 2:
        return Fraction(0)
    df = 1
    for j in range(1, m, 2):
        df *= j
    return Fraction(df, nweight ** (m // 2))


def z1mm_hankel(trunc, colour, nsize):
    """Z at concrete size via N! det[m_{i+j}(t)] / (Gaussian point)."""
    if nsize < 1:
        raise ValueError("size must be >= 1")

    def mtilde(k):
        s = Series(trunc)
        for alpha in time_multisets(trunc.p_max, trunc.max_time_deg,
                                    trunc.max_time_weight):
            shift = sum(p * a for p, a in alpha.items())
            g = onedim_gaussian_moment(k + shift, nsize)
            if not g:
                continue
            coeff = g
            for p, a in alpha.items():
                coeff *= Fraction((-nsize) ** a, factorial(a))
            s.add_term(coeff,
                       times=tuple(((colour, p), a)
                                   for p, a in sorted(alpha.items())))
        return s

    entries = {}
    for i in range(nsize):
        for j in range(nsize):
            if (i + j) not in entries:
                entries[i + j] = mtilde(i + j)
    det = Series.zero(trunc)
    for sigma in permutations(range(nsize)):
        sign = _perm_sign(sigma)
        term = Series.one(trunc, sign)
        for i in range(nsize):
            term = term.mul(entries[i + sigma[i]])
        det = det + term
    det0 = Fraction(0)
    for sigma in permutations(range(nsize)):
        prod = Fraction(_perm_sign(sigma))
        for i in range(nsize):
            prod *= onedim_gaussian_moment(i + sigma[i], nsize)
        det0 += prod
    return det.scale(Fraction(1, 1) / det0).mul(
        _t0_factor(trunc, colour, nsize=nsize))


def _perm_sign(sigma):
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


# -- quartic free energy and planar two-point ------------------------------


def _plist_mul(a, b, order):
    out = [NPoly() for _ in range(order + 1)]
    for i, x in enumerate(a):
        if i > order:
            break
        for j, y in enumerate(b):
            if i + j > order:
                break
            out[i + j] = out[i + j] + x * y
    return out


def _plist_log(a, order):
    """log of a t4-power-series with NPoly coefficients, a[0] = 1."""
    assert a[0] == NPoly.const(1)
    u = [NPoly()] + [x for x in a[1:]]
    out = [NPoly() for _ in range(order + 1)]
    power = [NPoly.const(1)] + [NPoly() for _ in range(order)]
    for k in range(1, order + 1):
        power = _plist_mul(power, u, order)
        c = Fraction((-1) ** (k + 1), k)
        for i in range(order + 1):
            out[i] = out[i] + c * power[i]
    return out


def _plist_div_unit(a, b, order):
    """a/b for NPoly-coefficient series with b[0] = 1."""
    assert b[0] == NPoly.const(1)
    out = []
    for n in range(order + 1):
        acc = a[n] if n < len(a) else NPoly()
        for k in range(n):
            acc = acc + Fraction(-1) * (out[k] * b[n - k])
        out.append(acc)
    return out


def quartic_z_list(order, insert=(), engine="auto"):
    """[t4^k] of < prod TrM^{insert} exp(-N t4/4 TrM^4) >, unnormalized."""
    out = []
    for k in range(order + 1):
        word = list(insert) + [4] * k
        coeff = Fraction((-1) ** k, 4 ** k * factorial(k))
        out.append(NPoly.N_pow(k, coeff) * hermitian_moment(word, engine))
    return out


def free_energy_quartic(order=3, engine="auto"):
    """Coefficients [t4^1 .. t4^order] of log Z: exact Laurent polys in N.

    Every exponent of N in every coefficient is 2 - 2g for a genus g >= 0;
    the leading t4 term is -N^2/2 - 1/4.
    """
    return _plist_log(quartic_z_list(order, engine=engine), order)[1:]


def planar_two_point(order=4, engine="auto"):
    """Signed planar rooted-map counts: N^0 part of (1/N)<Tr M^2>_{t4}.

    Returns the t4-coefficients [n=0..order]; their absolute values count
    rooted planar quadrangulation-type maps (1, 2, 9, 54, 378, ...).
    """
    num = quartic_z_list(order, insert=(2,), engine=engine)
    den = quartic_z_list(order, engine=engine)
    ratio = _plist_div_unit(num, den, order)
    # (1/N) * ratio at N^0  ==  ratio at N^1
    return [r.c.get(1, Fraction(0)) for r in ratio]


# -- Virasoro constraints --------------------------------------------------


def virasoro_op(n, trunc, colour=1):
    """L_n as a normal-ordered operator on the truncated time ring."""
    if n < -1:
        raise ValueError("constraints exist for n >= -1 only")
    op = DiffOp(trunc)
    for d in range(0, n + 1):
        key_a, key_b = (colour, d), (colour, n - d)
        if key_a == key_b:
            op.add_term(1, Monomial(hn=-4), derivs=((key_a, 2),))
        else:
            op.add_term(1, Monomial(hn=-4), derivs=((key_a, 1), (key_b, 1)))
    op.add_term(1, derivs=(((colour, n + 2), 1),))
    for p in range(1, trunc.p_max - max(n, 0) + 1):
        op.add_term(p, mults=(((colour, p), 1),),
                    derivs=(((colour, p + n), 1),))
    return op


def virasoro_residual(n, p_ext=4, deg=3, engine="auto"):
    """L_n Z restricted to the box (indices <= p_ext, degree <= deg).

    The inner ring retains indices up to p_ext + n + 2, degree deg + 2 and
    weighted degree p_ext*deg + n + 2, which is exactly what the box
    coefficients of L_n Z can touch; the restriction of the returned series
    is therefore exact, and the check passes iff it is the zero series.
    """
    p_int = p_ext + max(n, 0) + 2
    w_int = p_ext * deg + max(n, 0) + 2
    inner = TruncSpec(0, deg + 2, p_int, max_time_weight=w_int)
    z = z1mm_series(inner, engine=engine)
    out = virasoro_op(n, inner).apply(z)
    return out.restrict(TruncSpec(0, deg, p_ext))


# -- orthogonal polynomials, kernels, Hankel chain -------------------------
#
# Everything below works at concrete sizes with t4-power-series represented
# as plain lists of Fractions, index = power of t4.


def _ts_mul(a, b, order):
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if not x:
            continue
        for j, y in enumerate(b[:order + 1 - i]):
            out[i + j] += x * y
    return out


def _ts_div(a, b, order):
    if not b[0]:
        raise ZeroDivisionError("series division needs invertible constant")
    out = []
    for n in range(order + 1):
        acc = a[n] if n < len(a) else Fraction(0)
        for k in range(n):
            acc -= out[k] * b[n - k]
        out.append(acc / b[0])
    return out


def deformed_onedim_moment(l, nweight, order):
    """t4-series of int x^l dmu with dmu = e^{-nweight(x^2/2 + t4 x^4/4)}dx,
    normalized by the t4 = 0 Gaussian mass."""
    return [Fraction((-nweight) ** k, 4 ** k * factorial(k))
            * onedim_gaussian_moment(l + 4 * k, nweight)
            for k in range(order + 1)]


def hankel_z(size, nweight, order):
    """Eigenvalue partition function size! det[m_{i+j}] as a t4-series."""
    if size == 0:
        return [Fraction(1)] + [Fraction(0)] * order
    det = [Fraction(0)] * (order + 1)
    for sigma in permutations(range(size)):
        term = [Fraction(_perm_sign(sigma))] + [Fraction(0)] * order
        for i in range(size):
            term = _ts_mul(term, deformed_onedim_moment(i + sigma[i],
                                                        nweight, order), order)
        det = [x + y for x, y in zip(det, term)]
    f = factorial(size)
    return [f * x for x in det]


def orthopoly_det(size, nweight, order):
    """Monic orthogonal polynomial of the deformed measure, via the classic
    bordered-Hankel determinant; coefficient list indexed by power of x."""
    D = [Fraction(0)] * (order + 1)
    minors = []
    for j in range(size + 1):
        cols = [c for c in range(size + 1) if c != j]
        m = [Fraction(0)] * (order + 1)
        for sigma in permutations(range(size)):
            term = [Fraction(_perm_sign(sigma))] + [Fraction(0)] * order
            for i in range(size):
                term = _ts_mul(term, deformed_onedim_moment(
                    i + cols[sigma[i]], nweight, order), order)
            m = [x + y for x, y in zip(m, term)]
        minors.append(m)
    D = minors[size]                  # delete column `size`: the Hankel det
    coeffs = []
    for j in range(size + 1):
        sign = (-1) ** (size + j)
        coeffs.append(_ts_div([sign * x for x in minors[j]], D, order))
    return coeffs


# symmetric-function bridge: e_k out of power sums (Newton's identities)

def _elementary_in_power_sums(kmax):
    """e_k as dicts {sorted power-sum word: Fraction}, k = 0..kmax."""
    es = [{(): Fraction(1)}]
    for k in range(1, kmax + 1):
        acc = {}
        for i in range(1, k + 1):
            for word, coeff in es[k - i].items():
                w = tuple(sorted(word + (i,)))
                acc[w] = acc.get(w, Fraction(0)) + \
                    Fraction((-1) ** (i - 1), k) * coeff
        es.append({w: c for w, c in acc.items() if c})
    return es


def charpoly_expectation(size, order, engine="auto"):
    """< det(x - M) > in the quartic-deformed ensemble of matching size.

    Returns coefficient lists per power of x (t4-series, monic in x^size).
    The ensemble size and the N in the weight are both `size`.
    """
    es = _elementary_in_power_sums(size)
    raw = []
    for k in range(size + 1):
        acc = [Fraction(0)] * (order + 1)
        for word, coeff in es[k].items():
            for m in range(order + 1):
                mom = hermitian_moment(list(word) + [4] * m, engine)
                acc[m] += coeff * Fraction((-size) ** m,
                                           4 ** m * factorial(m)) * mom.eval(size)
        raw.append(acc)
    z = [Fraction((-size) ** m, 4 ** m * factorial(m))
         * hermitian_moment([4] * m, engine).eval(size)
         for m in range(order + 1)]
    out = []
    for j in range(size + 1):          # x^j carries (-1)^(size-j) e_{size-j}
        ek = _ts_div(raw[size - j], z, order)
        out.append([(-1) ** (size - j) * x for x in ek])
    return out


def orthogonality_residual(size, order, engine="auto"):
    """int P_size(x) x^M dmu for M = 0..size-1, P from the charpoly route.

    All returned t4-series must vanish identically: <det(x-M)> is the monic
    orthogonal polynomial of the eigenvalue measure of the same ensemble.
    """
    P = charpoly_expectation(size, order, engine)
    out = []
    for M in range(size):
        r = [Fraction(0)] * (order + 1)
        for j in range(size + 1):
            r = [x + y for x, y in zip(
                r, _ts_mul(P[j], deformed_onedim_moment(j + M, size, order),
                           order))]
        out.append(r)
    return out


def kernel_norm(size, nweight, order):
    """K_size = int P_size^2 dmu = int P_size x^size dmu (monic)."""
    P = orthopoly_det(size, nweight, order)
    out = [Fraction(0)] * (order + 1)
    for j in range(size + 1):
        out = [x + y for x, y in zip(
            out, _ts_mul(P[j], deformed_onedim_moment(j + size, nweight,
                                                      order), order))]
    return out


def hankel_chain_residuals(max_size, nweight, order):
    """The two ladder identities, as lists of residual t4-series:

    Z_{s+1} - (s+1) K_s Z_s   for s = 0..max_size-1, and
    Z_s - s! prod_{i<s} K_i   for s = 1..max_size.
    """
    zs = [hankel_z(s, nweight, order) for s in range(max_size + 1)]
    ks = [kernel_norm(s, nweight, order) for s in range(max_size)]
    step = []
    for s in range(max_size):
        rhs = _ts_mul(ks[s], zs[s], order)
        rhs = [(s + 1) * x for x in rhs]
        step.append([a - b for a, b in zip(zs[s + 1], rhs)])
    closed = []
    for s in range(1, max_size + 1):
        prod = [Fraction(factorial(s))] + [Fraction(0)] * order
        for i in range(s):
            prod = _ts_mul(prod, ks[i], order)
        closed.append([a - b for a, b in zip(zs[s], prod)])
    return step, closed
