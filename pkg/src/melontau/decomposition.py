"""Quartic melonic tensor model and its three equivalent expansions.

Stage 1 (direct): Z_T = < exp(-N^{D-1} lambda/4 sum_a inv_a) > over the
tensor Gaussian, expanded through quartic order K by block-summing the
contraction patterns of the k chosen interaction bubbles.

Stage 2 (intermediate field): after Hubbard-Stratonovich, one Hermitian
sigma_c per colour and

    Z_T = < prod_det >,   -Tr log(1 + i sqrt(lambda/2N^{D-2}) Sigma)
    = sum over tuples q in N^D, |q| >= 1 of
      ((-i)^{|q|}/|q|) sqrt(lambda/2N^{D-2})^{|q|} multinom(|q|; q)
      * N^{#zeros(q)} * prod_{q_c>0} Tr sigma_c^{q_c},

evaluated by independent per-colour Gaussian trace moments.

Stage 3 (operator form): Z_T = [ e^{Yhat} prod_c Z^{(c)}(t) ] at t = 0,
where Z^{(c)} are deformed one-matrix partition functions and

    Yhat = sum_q y_q  d^D / dt^{1}_{q_1} ... dt^{D}_{q_D},
    y_q  = (-1)^D N^{-D} ((-i)^{|q|}/|q|) sqrt(lambda/2N^{D-2})^{|q|}
           * multinom(|q|; q).

The three routes must agree coefficient-by-coefficient as Laurent
polynomials in sqrt(N).  The scaling operator Xhat is normalized so that
[Xhat, Yhat] = D Yhat holds exactly (Xhat = -sum t d/dt on the retained
times: a derivative word of length D has Euler degree -D).  The
Baker-Campbell-Hausdorff consequence log(e^X e^Y) = X + D/(1-e^{-D}) Y for
[X, Y] = D Y is checked separately in an exact 2x2 series representation.
"""

from fractions import Fraction
from itertools import product as iproduct
from math import factorial

from .diffops import DiffOp
from .scalars import GaussRat, minus_i_pow
from .series import Monomial, Series, TruncSpec, fold_h2
from .wick import (NPoly, hermitian_moment, tensor_moment,
                   tensor_moment_index_oracle, quartic_pattern)
from .onematrix import z1mm_series


def _compositions(total, parts):
    """All tuples of `parts` nonnegative ints summing to total."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(total, q):
    out = factorial(total)
    for x in q:
        out //= factorial(x)
    return out


def _block_pattern(D, choices):
    """Contraction pattern of prod_i inv_{a_i}: block sum of quartic melons."""
    k = len(choices)
    perms = []
    for c in range(1, D + 1):
        p = []
        for i, a in enumerate(choices):
            base = 2 * i
            if c == a:
                p.extend([base + 1, base])
            else:
                p.extend([base, base + 1])
        perms.append(tuple(p))
    return tuple(perms)


def direct_tensor_z(D, order, moments=None):
    """Route 1: quartic tensor partition function through lambda^order.

    moments(pattern) may be supplied to swap in an alternative moment
    engine (e.g. the explicit index-sum oracle at concrete N).
    """
    if moments is None:
        moments = tensor_moment
    trunc = TruncSpec(2 * order, 0, 0)
    out = Series.one(trunc)
    for k in range(1, order + 1):
        pref = Fraction((-1) ** k, 4 ** k * factorial(k))
        for choices in iproduct(range(1, D + 1), repeat=k):
            mom = moments(_block_pattern(D, choices))
            out = out + mom.to_series(
                trunc, extra=Monomial(hl=2 * k, hn=2 * (D - 1) * k),
                coeff=pref)
    return out


def direct_tensor_z_oracle(D, order, n):
    """Route 1 rebuilt on the brute-force index oracle at concrete N = n."""
    def eng(pattern):
        return NPoly.const(tensor_moment_index_oracle(pattern, n))
    return direct_tensor_z(D, order, moments=eng).eval_N(n)


def trace_expectation(series, engine="auto"):
    """Replace every t[c,p]^e factor by independent per-colour Gaussian
    trace moments < prod (Tr sigma_c^p)^e >; returns a time-free series."""
    out = Series(series.trunc)
    for m, coeff in series.terms.items():
        words = {}
        for (c, p), e in m.times:
            words.setdefault(c, []).extend([p] * e)
        poly = NPoly.const(1)
        for word in words.values():
            poly = poly * hermitian_moment(word, engine=engine)
            if poly.is_zero():
                break
        for k, v in poly.c.items():
            out.add_term(coeff * GaussRat(v), hl=m.hl, hn=m.hn + 2 * k,
                         h2=m.h2, zexp=m.zexp, times=())
    return out


def intermediate_field_z(D, order):
    """Route 2: multinomial expansion of the sigma determinant exponent."""
    hl_max = 2 * order
    trunc = TruncSpec(hl_max, D * hl_max, hl_max, max_time_weight=hl_max)
    expo = Series(trunc)
    for total in range(1, hl_max + 1):
        for q in _compositions(total, D):
            coeff = (minus_i_pow(total)
                     * GaussRat(Fraction(_multinomial(total, q), total)))
            zeros = sum(1 for x in q if x == 0)
            times = tuple(((c + 1, qc), 1) for c, qc in enumerate(q) if qc)
            expo.add_term(coeff, hl=total,
                          hn=-(D - 2) * total + 2 * zeros, h2=-total,
                          times=times)
    return trace_expectation(expo.exp_trunc()).restrict(
        TruncSpec(hl_max, 0, 0))


def build_Y(D, trunc, colours=None):
    """The Yhat operator on the truncated ring (tuples with |q| <= max_hl).

    Requires p_max >= max_hl so no retained tuple's derivative falls out of
    the ring (silent unfaithfulness is refused).
    """
    if colours is None:
        colours = tuple(range(1, D + 1))
    if trunc.p_max < trunc.max_hl:
        raise ValueError("ring must retain indices up to max_hl")
    op = DiffOp(trunc)
    for total in range(1, trunc.max_hl + 1):
        for q in _compositions(total, D):
            coeff = (minus_i_pow(total) * GaussRat((-1) ** D)
                     * GaussRat(Fraction(_multinomial(total, q), total)))
            h2, mult = fold_h2(-total)
            coeff = coeff * GaussRat(mult)
            mono = Monomial(hl=total, hn=-2 * D - (D - 2) * total, h2=h2)
            derivs = {}
            for c, qc in zip(colours, q):
                derivs[(c, qc)] = derivs.get((c, qc), 0) + 1
            op.add_term(coeff, mono, derivs=tuple(derivs.items()))
    return op


def build_X(trunc, colours):
    """Minus the Euler operator on the retained times: [X, Y] = D Y."""
    op = DiffOp(trunc)
    for c in colours:
        for p in range(trunc.p_max + 1):
            op.add_term(-1, mults=(((c, p), 1),), derivs=(((c, p), 1),))
    return op


def commutator_residual(D, max_q, p_max=None):
    """[Xhat, Yhat] - D*Yhat as a normal-ordered operator (zero iff pass)."""
    p_max = max_q if p_max is None else p_max
    trunc = TruncSpec(max_q, 0, p_max)
    colours = tuple(range(1, D + 1))
    X = build_X(trunc, colours)
    Y = build_Y(D, trunc, colours)
    return X.commutator(Y) - Y.scale(D)


def eY_applied_z(D, order, colours=None, nsize=None):
    """Route 3: [e^{Yhat} prod_c Z^{(c)}] at t = 0."""
    if colours is None:
        colours = tuple(range(1, D + 1))
    hl_max = 2 * order
    trunc = TruncSpec(hl_max, D * hl_max, hl_max, max_time_weight=hl_max)
    prod = Series.one(trunc)
    for c in colours:
        prod = prod.mul(z1mm_series(trunc, colour=c, nsize=nsize))
    Y = build_Y(D, trunc, colours)
    return Y.apply_exp(prod).subs_time_zero().restrict(
        TruncSpec(hl_max, 0, 0))


def decomposition_residuals(D, order):
    """(direct - intermediate, direct - operator): both must vanish."""
    direct = direct_tensor_z(D, order)
    inter = intermediate_field_z(D, order)
    oper = eY_applied_z(D, order)
    return direct - inter, direct - oper


def tensor_free_energy_exponents(D, order):
    """N-exponents of each lambda^k coefficient of log Z_T (route 1).

    Returns {k: sorted list of integer exponents}; odd sqrt-powers of
    lambda or N anywhere would be an error.
    """
    z = direct_tensor_z(D, order)
    f = z.log_trunc()
    out = {k: set() for k in range(1, order + 1)}
    for m, _c in f.terms.items():
        if m.hl % 2 or m.hn % 2 or m.h2:
            raise AssertionError("non-integer power in free energy: %s" % m)
        out[m.hl // 2].add(m.hn // 2)
    return {k: sorted(v) for k, v in out.items()}


# -- Baker-Campbell-Hausdorff in the faithful 2x2 representation -----------
#
# Univariate exact power series in the symbol D, as plain coefficient lists.


class DSeries:
    __slots__ = ("c",)

    def __init__(self, c, order):
        self.c = [Fraction(x) for x in c[:order + 1]]
        self.c += [Fraction(0)] * (order + 1 - len(self.c))

    @property
    def order(self):
        return len(self.c) - 1

    def __add__(self, o):
        return DSeries([a + b for a, b in zip(self.c, o.c)], self.order)

    def __sub__(self, o):
        return DSeries([a - b for a, b in zip(self.c, o.c)], self.order)

    def __mul__(self, o):
        if isinstance(o, DSeries):
            out = [Fraction(0)] * (self.order + 1)
            for i, a in enumerate(self.c):
                if not a:
                    continue
                for j, b in enumerate(o.c[:self.order + 1 - i]):
                    out[i + j] += a * b
            return DSeries(out, self.order)
        return DSeries([a * Fraction(o) for a in self.c], self.order)

    __rmul__ = __mul__

    def __eq__(self, o):
        return self.c == o.c

    def shift_down(self):
        """Divide by D (constant term must vanish)."""
        assert not self.c[0]
        return DSeries(self.c[1:] + [Fraction(0)], self.order)

    def inverse(self):
        assert self.c[0]
        out = [1 / self.c[0]]
        for n in range(1, self.order + 1):
            acc = Fraction(0)
            for k in range(n):
                acc += out[k] * self.c[n - k]
            out.append(-acc / self.c[0])
        return DSeries(out, self.order)


def _d_exp(scale, order):
    """exp(scale * D) as a DSeries."""
    half = Fraction(scale)
    return DSeries([half ** k / factorial(k) for k in range(order + 1)],
                   order)


def _m_mul(A, B):
    return ((A[0][0] * B[0][0] + A[0][1] * B[1][0],
             A[0][0] * B[0][1] + A[0][1] * B[1][1]),
            (A[1][0] * B[0][0] + A[1][1] * B[1][0],
             A[1][0] * B[0][1] + A[1][1] * B[1][1]))


def bch_log_product(order=8):
    """Entries of log(e^X e^Y) for X = diag(D, 0), Y = upper-right unit.

    Returns ((a, b), (c, d)) as DSeries; the claim under test is a = D,
    b = D/(1 - e^{-D}), c = d = 0.
    """
    work = order + 4
    one = DSeries([1], work)
    zero = DSeries([], work)
    eD = _d_exp(1, work)
    P = ((eD, eD), (zero, one))          # e^X e^Y
    V = ((P[0][0] - one, P[0][1]), (P[1][0], P[1][1] - one))
    out = ((zero, zero), (zero, zero))
    power = ((one, zero), (zero, one))
    for k in range(1, work + 1):
        power = _m_mul(power, V)
        s = Fraction((-1) ** (k + 1), k)
        out = tuple(tuple(out[i][j] + s * power[i][j] for j in (0, 1))
                    for i in (0, 1))
    return tuple(tuple(DSeries(e.c, order) for e in row) for row in out)


def bch_gamma(order=8):
    """D/(1 - e^{-D}) by direct series division."""
    work = order + 2
    den = DSeries([1], work) - _d_exp(-1, work)      # 1 - e^{-D}, order >= 1
    gamma = den.shift_down().inverse()               # D/(1-e^{-D})
    return DSeries(gamma.c, order)


def bch_gamma_sym(order=8):
    """(D/2) e^{D/2} / sinh(D/2), built independently of bch_gamma."""
    work = order + 2
    ep = _d_exp(Fraction(1, 2), work)
    em = _d_exp(Fraction(-1, 2), work)
    sinh2 = Fraction(1, 2) * (ep - em)               # sinh(D/2): odd, leading D/2
    val = Fraction(1, 2) * ep * sinh2.shift_down().inverse()
    return DSeries(val.c, order)
