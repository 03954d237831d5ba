"""Univariate Laurent polynomials and rational functions over CycNum.

Laurent polynomials are dicts exponent -> CycNum (nonzero values only).
RatFn is num/den with den a Laurent polynomial whose lowest term is
invertible.  Equality is by cross-multiplication, so no polynomial gcd
is needed.  The congruence projector S^{k,n} is supported whenever the
denominator has the shape c0*(1 - c*x^p) with p | n, which covers every
scattering-matrix entry used here.
"""

from __future__ import annotations

from .cyclotomic import CycNum
from .errors import SupportViolation

ONE = CycNum.one()


def lzero():
    return {}


def lone():
    return {0: CycNum.one()}


def lmono(e, c=None):
    c = ONE if c is None else c
    if isinstance(c, int):
        c = CycNum.from_rational(c)
    return {} if c.is_zero() else {e: c}


def ladd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def lneg(a):
    return {e: -c for e, c in a.items()}


def lscale(a, c):
    if isinstance(c, int):
        c = CycNum.from_rational(c)
    if c.is_zero():
        return {}
    return {e: v * c for e, v in a.items()}


def lmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e)
            s = ca * cb if s is None else s + ca * cb
            out[e] = s
    return {e: c for e, c in out.items() if not c.is_zero()}


def lshift(a, k):
    return {e + k: c for e, c in a.items()}


def lsubst_scale(a, scalar):
    """x -> scalar * x."""
    return {e: c * scalar ** e for e, c in a.items()}


def lsubst_inv(a, scalar):
    """x -> scalar / x."""
    return {-e: c * scalar ** e for e, c in a.items()}


def leq(a, b):
    return ladd(a, lneg(b)) == {}


class RatFn:
    """num/den with Laurent polynomial parts."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = lone()
        assert den, "zero denominator"
        self.num = dict(num)
        self.den = dict(den)

    @staticmethod
    def const(c):
        if isinstance(c, int):
            c = CycNum.from_rational(c)
        return RatFn(lmono(0, c))

    @staticmethod
    def monomial(e, c=None):
        return RatFn(lmono(e, ONE if c is None else c))

    @staticmethod
    def zero():
        return RatFn({})

    def is_zero(self):
        return not self.num

    def __add__(self, other):
        if leq(self.den, other.den):
            return RatFn(ladd(self.num, other.num), self.den)
        return RatFn(ladd(lmul(self.num, other.den), lmul(other.num, self.den)),
                     lmul(self.den, other.den))

    def __sub__(self, other):
        return self + RatFn(lneg(other.num), other.den)

    def __neg__(self):
        return RatFn(lneg(self.num), self.den)

    def __mul__(self, other):
        if isinstance(other, (int, CycNum)):
            return RatFn(lscale(self.num, other), self.den)
        return RatFn(lmul(self.num, other.num), lmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        assert self.num, "inverse of zero"
        return RatFn(self.den, self.num)

    def __eq__(self, other):
        if isinstance(other, (int, CycNum)):
            other = RatFn.const(other)
        return leq(lmul(self.num, other.den), lmul(other.num, self.den))

    def __hash__(self):
        raise TypeError("RatFn is unhashable")

    def subst_inv(self, scalar):
        """x -> scalar / x."""
        return RatFn(lsubst_inv(self.num, scalar), lsubst_inv(self.den, scalar))

    def subst_scale(self, scalar):
        """x -> scalar * x."""
        return RatFn(lsubst_scale(self.num, scalar), lsubst_scale(self.den, scalar))

    def series(self, lo, hi):
        """Coefficients of x^lo .. x^hi of the Laurent expansion around 0."""
        if not self.num:
            return {e: CycNum.zero() for e in range(lo, hi + 1)}
        d0 = min(self.den)
        c0 = self.den[d0]
        c0_inv = c0.inverse()
        tail = {e - d0: c * c0_inv for e, c in self.den.items() if e != d0}
        n0 = min(self.num)
        out = {}
        coeffs = {}
        top = hi - d0
        for e in range(n0 - d0, top + 1):
            val = self.num.get(e + d0, CycNum.zero()) * c0_inv
            for te, tc in tail.items():
                prev = coeffs.get(e - te)
                if prev is not None and not prev.is_zero():
                    val = val - tc * prev
            coeffs[e] = val
        for e in range(lo, hi + 1):
            out[e] = coeffs.get(e, CycNum.zero())
        return out

    def geometric_parts(self):
        """(c0_inv-normalized num, ratio c, period p) for den = c0*(1 - c*x^p).

        Denominators of any other shape raise SupportViolation.  Laurent
        polynomials are returned with ratio None.
        """
        den = self.den
        keys = sorted(den)
        base = keys[0]
        num = self.num
        if base != 0:
            num = lshift(num, -base)
            den = lshift(den, -base)
            keys = [k - base for k in keys]
        c0 = den[0]
        num = lscale(num, c0.inverse())
        if len(keys) == 1:
            return num, None, None
        if len(keys) != 2:
            raise SupportViolation("denominator is not of the form c0*(1 - c*x^p)")
        p = keys[1]
        ratio = -(den[p] * c0.inverse())
        return num, ratio, p

    def __repr__(self):
        return f"RatFn({self.num!r} / {self.den!r})"


def s_project(fn: RatFn, k: int, n: int) -> RatFn:
    """Subseries of exponents congruent to k mod n.

    For geometric denominators 1 - c*x^p with p | n this is exact:
    each numerator monomial x^e picks up the least shift e + t*p = k mod n.
    """
    num, ratio, p = fn.geometric_parts()
    if ratio is None:
        kept = {e: c for e, c in num.items() if (e - k) % n == 0}
        return RatFn(kept)
    if n % p != 0:
        raise SupportViolation(f"period {p} does not divide {n}")
    step = n // p
    new_den = ladd(lone(), lmono(n, -(ratio ** step)))
    out = {}
    for e, c in num.items():
        # least t >= 0 with e + t*p = k (mod n)
        delta = (k - e) % n
        if delta % p != 0:
            continue
        t = delta // p
        ee = e + t * p
        val = c * ratio ** t
        s = out.get(ee)
        out[ee] = val if s is None else s + val
    out = {e: c for e, c in out.items() if not c.is_zero()}
    return RatFn(out, new_den)


def e_expand(mat, K: int, m: int, n: int, check_support=True):
    """Expand an m x m congruence-supported matrix to n x n (m | n).

    Entry (k, l) of the result is the projection onto classes
    k + l - K mod n of entry (k mod m, l mod m).
    """
    assert n % m == 0
    if check_support:
        for k in range(m):
            for l in range(m):
                fn = mat[k][l]
                if fn.is_zero():
                    continue
                num, ratio, p = fn.geometric_parts()
                for e in num:
                    if (e - (k + l - K)) % m != 0:
                        raise SupportViolation(
                            f"entry ({k},{l}) has exponent {e} outside class {k + l - K} mod {m}")
    out = [[None] * n for _ in range(n)]
    for k in range(n):
        for l in range(n):
            out[k][l] = s_project(mat[k % m][l % m], (k + l - K) % n, n)
    return out


def series_project_expand(obj, op: str, k: int = 0, n: int = 1, K: int = 0, m: int = 1):
    """Dispatch wrapper: op "S" projects a series, op "E" expands a matrix."""
    if op == "S":
        return s_project(obj, k, n)
    if op == "E":
        return e_expand(obj, K, m, n)
    raise ValueError(f"unknown op {op!r}")
