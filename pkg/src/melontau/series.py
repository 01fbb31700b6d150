"""Sparse exact series in sqrt(lambda), sqrt(N), sqrt(2), z and time variables.

Conventions
-----------
A monomial is

    sqrtLam^hl * sqrtN^hn * sqrt2^h2 * z^zexp * prod t[c,p]^e

with hl >= 0 (the coupling enters only through nonnegative powers of
sqrt(lambda)), hn and zexp arbitrary integers (Laurent), and times t[c,p]
indexed by a colour tag c >= 1 and a power index p >= 0.  t[c,0] is a real
variable like any other (partition functions depend on it through an exact
exponential prefactor).

sqrt2 normalization: so that equal values collide on equal keys, h2 is kept
in {0,1}; even powers of sqrt2 are folded into the rational coefficient at
term-construction time (see Monomial.mul's carry and Series._put).  lambda
means sqrtLam^2 and N means sqrtN^2 throughout.

Truncation: a TruncSpec is an explicit box (max sqrtLam power, max total time
degree, max time index, z window, optional max weighted time degree
sum_p p*e_p).  Arithmetic silently discards out-of-box products — truncation
is part of the ring, not an error.  *Querying* a coefficient outside the box
is an error (OutsideTruncationError): the caller is asking about an order the
ring never tracked.  Shifting in z refuses to silently drop (WindowError),
because z shifts implement charge factors whose loss would corrupt residues.

Everything is a plain dict keyed by Monomial; values are GaussRat and never
zero.  Hackability over speed: the acceptance-size computations all run in
seconds, so there is no clever packing anywhere.
"""

from fractions import Fraction

from .scalars import GaussRat


class OutsideTruncationError(Exception):
    """A coefficient was requested outside the series' truncation box."""


class NilpotencyError(ValueError):
    """exp_trunc was handed a series that is not nilpotent under truncation."""


class WindowError(Exception):
    """A z shift or residue ran into the edge of the z window."""


def _as_coeff(x):
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRat(x)
    raise TypeError("coefficient must be GaussRat/int/Fraction, got %r" % (x,))


def fold_h2(h2):
    """Normalize a sqrt2 exponent: (exponent in {0,1}, Fraction multiplier).

    >>> fold_h2(5)
    (1, Fraction(4, 1))
    >>> fold_h2(-3)
    (1, Fraction(1, 4))
    """
    if h2 >= 0:
        return h2 % 2, Fraction(2 ** (h2 // 2))
    k = (-h2 + 1) // 2
    return (-h2) % 2, Fraction(1, 2 ** k)


class Monomial:
    """Immutable monomial key.  times is a sorted tuple of ((c, p), e), e >= 1.

    >>> m = Monomial(hl=2, hn=-1, h2=1, zexp=0, times=(((1, 2), 3),))
    >>> m.time_degree(), m.time_weight()
    (3, 6)
    >>> a, carry = m.mul(m)
    >>> a.h2, carry        # sqrt2^2 folds into the coefficient
    (0, 2)
    """

    __slots__ = ("hl", "hn", "h2", "zexp", "times", "_key")

    def __init__(self, hl=0, hn=0, h2=0, zexp=0, times=()):
        if hl < 0:
            raise ValueError("negative sqrtLam power")
        if h2 not in (0, 1):
            raise ValueError("h2 must be normalized to 0 or 1")
        merged = {}
        for (c, p), e in times:
            if c < 1 or p < 0 or e < 1:
                raise ValueError("bad time entry %r" % (((c, p), e),))
            merged[(c, p)] = merged.get((c, p), 0) + e
        self.hl = hl
        self.hn = hn
        self.h2 = h2
        self.zexp = zexp
        self.times = tuple(sorted(merged.items()))
        self._key = (self.hl, self.hn, self.h2, self.zexp, self.times)

    def time_degree(self):
        return sum(e for _, e in self.times)

    def time_weight(self):
        return sum(p * e for (_c, p), e in self.times)

    def times_dict(self):
        return dict(self.times)

    def mul(self, other):
        """Product monomial and the integer carry 2**((h2+h2')//2)."""
        t = dict(self.times)
        for k, e in other.times:
            t[k] = t.get(k, 0) + e
        h2 = self.h2 + other.h2
        mono = Monomial(self.hl + other.hl, self.hn + other.hn, h2 % 2,
                        self.zexp + other.zexp, tuple(t.items()))
        return mono, (2 if h2 >= 2 else 1)

    def is_one(self):
        return self._key == (0, 0, 0, 0, ())

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return "Monomial%r" % (self._key,)

    def __str__(self):
        parts = []
        if self.hl:
            parts.append("sqrtLam^%d" % self.hl)
        if self.hn:
            parts.append("sqrtN^%d" % self.hn)
        if self.h2:
            parts.append("sqrt2^%d" % self.h2)
        if self.zexp:
            parts.append("z^%d" % self.zexp)
        for (c, p), e in self.times:
            parts.append("t[%d,%d]^%d" % (c, p, e))
        return " * ".join(parts) if parts else "1"


ONE_MONO = Monomial()


class TruncSpec:
    """Explicit truncation box.

    z_window is a closed interval [z_min, z_max].  max_time_weight (cap on
    sum_p p*e_p; t[c,0] has weight 0) is optional and defaults to None
    (uncapped); it is the level cut that keeps the bilinear rings small.

    >>> a = TruncSpec(4, 3, 5, (-2, 2))
    >>> b = TruncSpec(2, 7, 4, (-1, 3), max_time_weight=10)
    >>> a.meet(b)
    TruncSpec(max_hl=2, max_time_deg=3, p_max=4, z_window=(-1, 2), max_time_weight=10)
    """

    __slots__ = ("max_hl", "max_time_deg", "p_max", "z_min", "z_max",
                 "max_time_weight")

    def __init__(self, max_hl, max_time_deg, p_max, z_window=(-64, 64),
                 max_time_weight=None):
        z_min, z_max = z_window
        if max_hl < 0 or max_time_deg < 0 or p_max < 0 or z_min > z_max:
            raise ValueError("empty truncation box")
        if 0 < z_min or 0 > z_max:
            raise ValueError("z window must contain 0")
        self.max_hl = max_hl
        self.max_time_deg = max_time_deg
        self.p_max = p_max
        self.z_min = z_min
        self.z_max = z_max
        self.max_time_weight = max_time_weight

    def admits(self, mono):
        if mono.hl > self.max_hl:
            return False
        if not (self.z_min <= mono.zexp <= self.z_max):
            return False
        deg = 0
        weight = 0
        for (_c, p), e in mono.times:
            if p > self.p_max:
                return False
            deg += e
            weight += p * e
        if deg > self.max_time_deg:
            return False
        if self.max_time_weight is not None and weight > self.max_time_weight:
            return False
        return True

    def require(self, mono):
        if not self.admits(mono):
            raise OutsideTruncationError("monomial %s outside %r" % (mono, self))

    def meet(self, other):
        w = None
        if self.max_time_weight is not None or other.max_time_weight is not None:
            w = min(x for x in (self.max_time_weight, other.max_time_weight)
                    if x is not None)
        return TruncSpec(min(self.max_hl, other.max_hl),
                         min(self.max_time_deg, other.max_time_deg),
                         min(self.p_max, other.p_max),
                         (max(self.z_min, other.z_min),
                          min(self.z_max, other.z_max)),
                         max_time_weight=w)

    def __eq__(self, other):
        return (isinstance(other, TruncSpec) and
                (self.max_hl, self.max_time_deg, self.p_max, self.z_min,
                 self.z_max, self.max_time_weight) ==
                (other.max_hl, other.max_time_deg, other.p_max, other.z_min,
                 other.z_max, other.max_time_weight))

    def __repr__(self):
        s = ("TruncSpec(max_hl=%d, max_time_deg=%d, p_max=%d, z_window=(%d, %d)"
             % (self.max_hl, self.max_time_deg, self.p_max, self.z_min,
                self.z_max))
        if self.max_time_weight is not None:
            s += ", max_time_weight=%d" % self.max_time_weight
        return s + ")"


class Series:
    """Truncated sparse series: dict Monomial -> nonzero GaussRat."""

    __slots__ = ("trunc", "terms")

    def __init__(self, trunc, terms=None):
        self.trunc = trunc
        self.terms = {}
        if terms:
            for mono, coeff in terms.items():
                self._put(mono, _as_coeff(coeff))

    # -- construction helpers --------------------------------------------

    @classmethod
    def zero(cls, trunc):
        return cls(trunc)

    @classmethod
    def one(cls, trunc, coeff=1):
        s = cls(trunc)
        s._put(ONE_MONO, _as_coeff(coeff))
        return s

    @classmethod
    def time(cls, trunc, c, p, coeff=1):
        s = cls(trunc)
        s._put(Monomial(times=(((c, p), 1),)), _as_coeff(coeff))
        return s

    def _put(self, mono, coeff):
        """Accumulate coeff onto mono, silently discarding out-of-box."""
        if coeff.is_zero() or not self.trunc.admits(mono):
            return
        cur = self.terms.get(mono)
        tot = coeff if cur is None else cur + coeff
        if tot.is_zero():
            self.terms.pop(mono, None)
        else:
            self.terms[mono] = tot

    def add_term(self, coeff, hl=0, hn=0, h2=0, zexp=0, times=()):
        """Add coeff * monomial, folding even sqrt2 powers into coeff."""
        coeff = _as_coeff(coeff)
        h2, mult = fold_h2(h2)
        if mult != 1:
            coeff = coeff * GaussRat(mult)
        self._put(Monomial(hl, hn, h2, zexp, times), coeff)
        return self

    # -- queries ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coeff(self, mono):
        """Exact coefficient; raises if the box never tracked this order."""
        self.trunc.require(mono)
        return self.terms.get(mono, GaussRat(0))

    def constant_term(self):
        return self.terms.get(ONE_MONO, GaussRat(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0]._key)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, Series) and self.terms == other.terms

    def copy(self):
        s = Series(self.trunc)
        s.terms = dict(self.terms)
        return s

    # -- linear structure -------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        s = Series(self.trunc.meet(other.trunc))
        s.terms = dict(self.terms)
        out = s.terms
        for mono, c in other.terms.items():
            cur = out.get(mono)
            tot = c if cur is None else cur + c
            if tot.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = tot
        if self.trunc is not s.trunc:
            s.terms = {m: c for m, c in s.terms.items() if s.trunc.admits(m)}
        return s

    def __neg__(self):
        s = Series(self.trunc)
        s.terms = {m: -c for m, c in self.terms.items()}
        return s

    def __sub__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self + (-other)

    def scale(self, coeff):
        coeff = _as_coeff(coeff)
        s = Series(self.trunc)
        if not coeff.is_zero():
            s.terms = {m: c * coeff for m, c in self.terms.items()}
        return s

    # -- multiplicative structure -----------------------------------------

    def mul(self, other, admit=None):
        """Product under self.trunc ^ other.trunc.

        admit, if given, is an extra predicate on the product monomial;
        products failing it are discarded during the loop (used by the
        bilinear pipelines to keep only a verified sub-box).
        """
        trunc = self.trunc.meet(other.trunc)
        out = Series(trunc)
        if not self.terms or not other.terms:
            return out
        small, big = self.terms, other.terms
        if len(small) > len(big):
            small, big = big, small
        for m1, c1 in small.items():
            for m2, c2 in big.items():
                mono, carry = m1.mul(m2)
                if not trunc.admits(mono):
                    continue
                if admit is not None and not admit(mono):
                    continue
                c = c1 * c2
                if carry != 1:
                    c = c * carry
                cur = out.terms.get(mono)
                tot = c if cur is None else cur + c
                if tot.is_zero():
                    out.terms.pop(mono, None)
                else:
                    out.terms[mono] = tot
        return out

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def mul_monomial(self, mono, coeff=1):
        """Multiply by coeff * mono (h2 of mono must be pre-normalized)."""
        coeff = _as_coeff(coeff)
        s = Series(self.trunc)
        for m, c in self.terms.items():
            pm, carry = m.mul(mono)
            cc = c * coeff
            if carry != 1:
                cc = cc * carry
            s._put(pm, cc)
        return s

    def pow(self, n):
        out = Series.one(self.trunc)
        for _ in range(n):
            out = out.mul(self)
        return out

    def exp_trunc(self):
        """exp of a series nilpotent under the truncation.

        Every term must raise sqrtLam degree or time degree; otherwise powers
        never leave the box and the exponential is not a polynomial there.

        >>> t = TruncSpec(2, 2, 4)
        >>> s = Series.one(t)              # constant terms are not nilpotent
        >>> s.exp_trunc()
        Traceback (most recent call last):
        ...
        melontau.series.NilpotencyError: non-nilpotent term 1 in exp_trunc
        """
        for mono in self.terms:
            if mono.hl == 0 and mono.time_degree() == 0:
                raise NilpotencyError("non-nilpotent term %s in exp_trunc"
                                      % (mono,))
        out = Series.one(self.trunc)
        power = Series.one(self.trunc)
        kfact = 1
        for k in range(1, self.trunc.max_hl + self.trunc.max_time_deg + 1):
            power = power.mul(self)
            if power.is_zero():
                break
            kfact *= k
            out = out + power.scale(GaussRat(Fraction(1, kfact)))
        return out

    def log_trunc(self):
        """log(1 + u) where self = 1 + u with u nilpotent under truncation."""
        u = self.copy()
        c0 = u.terms.pop(ONE_MONO, GaussRat(0))
        if not c0.is_one():
            raise ValueError("log_trunc needs constant term exactly 1")
        for mono in u.terms:
            if mono.hl == 0 and mono.time_degree() == 0:
                raise NilpotencyError("non-nilpotent term %s in log_trunc"
                                      % (mono,))
        out = Series.zero(self.trunc)
        power = Series.one(self.trunc)
        for k in range(1, self.trunc.max_hl + self.trunc.max_time_deg + 1):
            power = power.mul(u)
            if power.is_zero():
                break
            out = out + power.scale(GaussRat(Fraction((-1) ** (k + 1), k)))
        return out

    # -- calculus in the times --------------------------------------------

    def derive(self, c, p):
        """d/dt[c,p].  Differentiation can only shrink the box: exact."""
        key = (c, p)
        s = Series(self.trunc)
        for m, coeff in self.terms.items():
            t = dict(m.times)
            e = t.get(key)
            if not e:
                continue
            if e == 1:
                del t[key]
            else:
                t[key] = e - 1
            s._put(Monomial(m.hl, m.hn, m.h2, m.zexp, tuple(t.items())),
                   coeff * e)
        return s

    def subs_time_zero(self):
        """Set every time variable to zero (keep only time-free terms)."""
        s = Series(self.trunc)
        for m, c in self.terms.items():
            if not m.times:
                s._put(m, c)
        return s

    # -- z structure -------------------------------------------------------

    def shift_z(self, k):
        """Multiply by z**k; refuses to drop terms past the window."""
        s = Series(self.trunc)
        for m, c in self.terms.items():
            mono = Monomial(m.hl, m.hn, m.h2, m.zexp + k, m.times)
            if not self.trunc.admits(mono):
                raise WindowError("z^%d shift pushes %s outside window [%d,%d]"
                                  % (k, m, self.trunc.z_min, self.trunc.z_max))
            s._put(mono, c)
        return s

    def residue_z(self):
        """Coefficient of z^-1, as a z-free series over the same box.

        Raises WindowError if any term of self sits on the window boundary:
        a truncated window cannot certify the residue then, because products
        that would have cancelled may have been discarded.
        """
        for m in self.terms:
            if m.zexp in (self.trunc.z_min, self.trunc.z_max):
                raise WindowError("term %s touches the z window boundary; "
                                  "enlarge z_window" % (m,))
        s = Series(self.trunc)
        for m, c in self.terms.items():
            if m.zexp == -1:
                s._put(Monomial(m.hl, m.hn, m.h2, 0, m.times), c)
        return s

    # -- restriction / substitution ----------------------------------------

    def restrict(self, trunc):
        """Explicit re-truncation to self.trunc ^ trunc (silent discard)."""
        t = self.trunc.meet(trunc)
        s = Series(t)
        for m, c in self.terms.items():
            s._put(m, c)
        return s

    def filter(self, pred):
        """Keep only monomials satisfying pred; same truncation."""
        s = Series(self.trunc)
        s.terms = {m: c for m, c in self.terms.items() if pred(m)}
        return s

    def eval_N(self, n):
        """Substitute a concrete positive integer for N (= sqrtN^2).

        Every term must carry an even sqrtN power; odd powers would need
        sqrt(n) and are refused.
        """
        if n < 1:
            raise ValueError("N must be a positive integer")
        s = Series(self.trunc)
        for m, c in self.terms.items():
            if m.hn % 2:
                raise ValueError("odd sqrtN power in %s; cannot evaluate" % m)
            val = Fraction(n) ** (m.hn // 2)
            s._put(Monomial(m.hl, 0, m.h2, m.zexp, m.times), c * val)
        return s

    def eval_lambda(self, lam):
        """Substitute an exact rational for lambda (= sqrtLam^2).

        Odd sqrtLam powers are refused (they would need sqrt(lam)).
        """
        s = Series(self.trunc)
        for m, c in self.terms.items():
            if m.hl % 2:
                raise ValueError("odd sqrtLam power in %s; cannot evaluate" % m)
            val = Fraction(lam) ** (m.hl // 2)
            s._put(Monomial(0, m.hn, m.h2, m.zexp, m.times), c * val)
        return s

    # -- serialization -----------------------------------------------------

    def serialize(self):
        """Canonical text form, one term per line.

        The coefficient field is num_re/den_re/num_im/den_im (four integers);
        factor fields follow in fixed order sqrtLam, sqrtN, sqrt2, z, then
        times sorted by (c, p), each as t[c,p]^e.  Zero-exponent factors are
        omitted; the unit monomial prints as the bare coefficient.

        >>> t = TruncSpec(2, 2, 4)
        >>> s = Series(t).add_term(Fraction(-3, 4), hl=2, hn=-2,
        ...                        times=(((1, 2), 1),))
        >>> s.serialize()
        '-3/4/0/1 * sqrtLam^2 * sqrtN^-2 * t[1,2]^1'
        """
        lines = []
        for mono, c in self.sorted_terms():
            f = ["%d/%d/%d/%d" % (c.re.numerator, c.re.denominator,
                                  c.im.numerator, c.im.denominator)]
            if mono.hl:
                f.append("sqrtLam^%d" % mono.hl)
            if mono.hn:
                f.append("sqrtN^%d" % mono.hn)
            if mono.h2:
                f.append("sqrt2^%d" % mono.h2)
            if mono.zexp:
                f.append("z^%d" % mono.zexp)
            for (c_, p), e in mono.times:
                f.append("t[%d,%d]^%d" % (c_, p, e))
            lines.append(" * ".join(f))
        return "\n".join(lines)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join("(%s)*%s" % (c, m) for m, c in self.sorted_terms())

    __repr__ = __str__


def parse_series(text, trunc):
    """Inverse of Series.serialize (round-trips exactly).

    >>> t = TruncSpec(2, 2, 4)
    >>> s = Series(t).add_term(Fraction(1, 2), hl=1, h2=1, zexp=-1)
    >>> parse_series(s.serialize(), t) == s
    True
    """
    s = Series(trunc)
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split("*")]
        nre, dre, nim, dim = (int(x) for x in fields[0].split("/"))
        coeff = GaussRat(Fraction(nre, dre), Fraction(nim, dim))
        hl = hn = h2 = zexp = 0
        times = {}
        for f in fields[1:]:
            name, exp = f.rsplit("^", 1)
            exp = int(exp)
            if name == "sqrtLam":
                hl = exp
            elif name == "sqrtN":
                hn = exp
            elif name == "sqrt2":
                h2 = exp
            elif name == "z":
                zexp = exp
            elif name.startswith("t[") and name.endswith("]"):
                c_, p = name[2:-1].split(",")
                times[(int(c_), int(p))] = exp
            else:
                raise ValueError("unknown factor %r" % f)
        s.add_term(coeff, hl=hl, hn=hn, h2=h2, zexp=zexp,
                   times=tuple(times.items()))
    return s
