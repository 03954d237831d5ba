"""F_q[T] arithmetic: monic polynomials, factorization, residue symbols,
function field Gauss sums.

Polynomials are tuples of field-element codes, low degree first, with no
trailing zeros (the zero polynomial is the empty tuple).  Monic polynomials
of degree d are also given a dense integer code in [0, q^d) for sieving.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .cyclotomic import CycNum
from .errors import DegreeTooLarge, NotPrime
from .finitefield import Field, MultChar

ENUMERATION_LIMIT = 10_000_000

PZERO = ()
PONE = (1,)


def pdeg(f):
    return len(f) - 1


def pnormalize(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def padd(field, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append(field.add(a, b))
    return pnormalize(out)


def psub(field, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append(field.sub(a, b))
    return pnormalize(out)


def pscale(field, f, c):
    if c == 0:
        return PZERO
    return tuple(field.mul(x, c) for x in f)


def pmul(field, f, g):
    if not f or not g:
        return PZERO
    if field.e == 1:
        p = field.p
        out = [0] * (len(f) + len(g) - 1)
        for i, x in enumerate(f):
            if x:
                for j, y in enumerate(g):
                    out[i + j] += x * y
        return pnormalize([c % p for c in out])
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                if y:
                    out[i + j] = field.add(out[i + j], field.mul(x, y))
    return pnormalize(out)


def pdivmod(field, f, g):
    assert g, "division by zero polynomial"
    f = list(f)
    dg = len(g) - 1
    if field.e == 1:
        p = field.p
        inv_lead = pow(g[-1], p - 2, p)
        q = [0] * max(0, len(f) - dg)
        for i in range(len(f) - 1, dg - 1, -1):
            c = f[i] % p
            if c:
                c = (c * inv_lead) % p
                q[i - dg] = c
                for j in range(dg + 1):
                    f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
        return pnormalize(q), pnormalize(f)
    inv_lead = field.inv(g[-1])
    q = [0] * max(0, len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c:
            c = field.mul(c, inv_lead)
            q[i - dg] = c
            for j in range(dg + 1):
                f[i - dg + j] = field.sub(f[i - dg + j], field.mul(c, g[j]))
    return pnormalize(q), pnormalize(f)


def pmod(field, f, g):
    return pdivmod(field, f, g)[1]


def pgcd(field, f, g):
    while g:
        f, g = g, pmod(field, f, g)
    if not f:
        return PZERO
    return pscale(field, f, field.inv(f[-1]))


def pderiv(field, f):
    out = []
    for i in range(1, len(f)):
        c = f[i]
        s = i % field.p
        acc = 0
        for _ in range(s):
            acc = field.add(acc, c)
        out.append(acc)
    return pnormalize(out)


def peval(field, f, x):
    v = 0
    for c in reversed(f):
        v = field.add(field.mul(v, x), c)
    return v


def is_monic(f):
    return bool(f) and f[-1] == 1


def monic_x():
    return (0, 1)


def encode_monic(field, f):
    """Dense code of a monic polynomial: (degree, index)."""
    d = pdeg(f)
    idx = 0
    for c in reversed(f[:-1]):
        idx = idx * field.q + c
    return d, idx


def decode_monic(field, d, idx):
    coeffs = []
    for _ in range(d):
        coeffs.append(idx % field.q)
        idx //= field.q
    coeffs.append(1)
    return tuple(coeffs)


def enumerate_monic(field, d):
    """All monic polynomials of degree d, lexicographic in the dense code."""
    if d < 0:
        return
    if field.q ** max(d, 0) > ENUMERATION_LIMIT:
        raise DegreeTooLarge(f"q^{d} exceeds enumeration limit")
    for idx in range(field.q ** d):
        yield decode_monic(field, d, idx)


def root_product(field, f, g):
    """prod f(beta) over the roots beta of the monic polynomial g.

    Returns a field element; 0 iff gcd(f, g) != 1 (for nonconstant g).
    """
    assert is_monic(g) or not g[:-1]
    if pdeg(g) <= 0:
        return 1
    if not f:
        return 0
    r = pmod(field, f, g)
    if not r:
        return 0
    c = r[-1]
    r0 = pscale(field, r, field.inv(c)) if c != 1 else r
    cpow = field.pow(c, pdeg(g))
    if pdeg(r0) == 0:
        return cpow
    sign = 1 if (pdeg(r0) * pdeg(g)) % 2 == 0 else field.neg(1)
    return field.mul(field.mul(cpow, sign), root_product(field, g, r0))


def resultant_disc(field, f, g=None, which="res"):
    """Resultant Res(f, g) (g-roots plugged into f) or discriminant of f."""
    if which == "res":
        return root_product(field, f, g)
    if which == "disc":
        d = pdeg(f)
        assert d >= 1 and is_monic(f)
        rp = root_product(field, pderiv(field, f), f)
        sign = 1 if (d * (d - 1) // 2) % 2 == 0 else field.neg(1)
        return field.mul(sign, rp)
    raise ValueError(f"unknown resultant mode {which!r}")


def residue_exp(field, f, g, chi: MultChar):
    """Exponent t with (f/g)_chi = zeta_(q-1)^t, or None when the symbol is 0."""
    v = root_product(field, f, g)
    if v == 0:
        return None
    return chi.exp_of(v)


def residue_symbol(field, f, g, chi: MultChar) -> CycNum:
    t = residue_exp(field, f, g, chi)
    if t is None:
        return CycNum.zero()
    return CycNum.root_of_unity(field.q - 1, t)


def ff_gauss_sum(field, f1, f2, chi: MultChar) -> CycNum:
    """Function field Gauss sum g_chi(f1, f2) for monic f2.

    The additive character reads the coefficient of T^(deg f2 - 1) in
    (h*f1 mod f2) and maps it through the trace to the prime field.
    """
    d = pdeg(f2)
    if d <= 0:
        return CycNum.one()
    q1 = field.q - 1
    counts = {}
    top = d - 1
    for h in _all_residues(field, d):
        t = residue_exp(field, h, f2, chi)
        if t is None:
            continue
        r = pmod(field, pmul(field, h, f1), f2)
        cm1 = r[top] if len(r) > top else 0
        tr = field.trace(cm1) % field.p
        key = (t, tr)
        counts[key] = counts.get(key, 0) + 1
    total = CycNum.zero()
    L = q1 * field.p // _gcd(q1, field.p)
    for (t, tr), c in sorted(counts.items()):
        total = total + CycNum.root_of_unity(L, t * (L // q1) + tr * (L // field.p)) * c
    return total


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _all_residues(field, d):
    """All polynomials of degree < d (including 0)."""
    q = field.q
    for idx in range(q ** d):
        coeffs = []
        v = idx
        for _ in range(d):
            coeffs.append(v % q)
            v //= q
        yield pnormalize(coeffs)


# -- primes, factorization, sieve ----------------------------------------

class _FieldPolyData:
    def __init__(self, field):
        self.field = field
        self.primes_by_degree = {}
        self.spf = {}  # degree -> list mapping idx -> smallest prime factor (deg, idx)
        self.factor_cache = {}

    def primes(self, d):
        if d not in self.primes_by_degree:
            field = self.field
            out = []
            for f in enumerate_monic(field, d):
                if d == 1:
                    out.append(f)
                    continue
                composite = False
                for e in range(1, d // 2 + 1):
                    for pi in self.primes(e):
                        if not pmod(field, f, pi):
                            composite = True
                            break
                    if composite:
                        break
                if not composite:
                    out.append(f)
            self.primes_by_degree[d] = out
        return self.primes_by_degree[d]

    def build_spf(self, dmax):
        """Smallest-prime-factor sieve over all monic polynomials of degree <= dmax."""
        field = self.field
        q = field.q
        for d in range(1, dmax + 1):
            if d in self.spf:
                continue
            if q ** d > ENUMERATION_LIMIT:
                raise DegreeTooLarge(f"q^{d} exceeds enumeration limit")
            arr = [None] * (q ** d)
            for dp in range(1, d // 2 + 1):
                for pi in self.primes(dp):
                    pcode = encode_monic(field, pi)
                    for cidx in range(q ** (d - dp)):
                        co = decode_monic(field, d - dp, cidx)
                        didx = encode_monic(field, pmul(field, pi, co))[1]
                        cur = arr[didx]
                        if cur is None or dp < cur[0] or (dp == cur[0] and pcode[1] < cur[1]):
                            arr[didx] = pcode
            self.spf[d] = arr

    def factor(self, f):
        """Complete factorization of a monic polynomial into (prime, mult) pairs."""
        field = self.field
        key = encode_monic(field, f)
        cached = self.factor_cache.get(key)
        if cached is not None:
            return cached
        d = key[0]
        if d == 0:
            out = ()
        else:
            spf_arr = self.spf.get(d)
            pi = None
            if spf_arr is not None:
                pc = spf_arr[key[1]]
                if pc is not None:
                    pi = decode_monic(field, *pc)
            if pi is None:
                for dp in range(1, d // 2 + 1):
                    for cand in self.primes(dp):
                        if not pmod(field, f, cand):
                            pi = cand
                            break
                    if pi is not None:
                        break
            if pi is None:
                out = ((f, 1),)
            else:
                mult = 0
                rest = f
                while True:
                    quo, rem = pdivmod(field, rest, pi)
                    if rem:
                        break
                    rest = quo
                    mult += 1
                tail = self.factor(rest)
                out = tuple(sorted([(pi, mult)] + list(tail)))
        self.factor_cache[key] = out
        return out


_DATA = {}


def poly_data(field) -> _FieldPolyData:
    key = (field.p, field.e, field.modulus)
    if key not in _DATA:
        _DATA[key] = _FieldPolyData(field)
    return _DATA[key]


def primes_of_degree(field, d):
    return poly_data(field).primes(d)


def factor_monic(field, f):
    return poly_data(field).factor(f)


def is_squarefree(field, f):
    return pdeg(pgcd(field, f, pderiv(field, f))) <= 0


def is_prime_poly(field, f):
    if not is_monic(f) or pdeg(f) < 1:
        return False
    fac = factor_monic(field, f)
    return len(fac) == 1 and fac[0][1] == 1


def mobius(field, f):
    fac = factor_monic(field, f)
    if any(m > 1 for _, m in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def poly_phi(field, f):
    """Number of units modulo f."""
    out = 1
    for pi, m in factor_monic(field, f):
        dp = pdeg(pi)
        out *= (field.q ** dp - 1) * field.q ** (dp * (m - 1))
    return out


def lambda_count(field, pi, d, e, brute=False):
    """Count pairs of monic (f, nu), deg f = d, deg nu = e, gcd(f, pi*nu) = 1.

    Closed generating-function values; negative or non-integral arguments
    count as zero.  With brute=True the count is recomputed by enumeration.
    """
    if d != int(d) or e != int(e) or d < 0 or e < 0:
        return 0
    d, e = int(d), int(e)
    if brute:
        if not is_prime_poly(field, pi):
            raise NotPrime("pi must be prime")
        count = 0
        for f in enumerate_monic(field, d):
            if d and not pmod(field, f, pi):
                continue
            for nu in enumerate_monic(field, e):
                if pdeg(pgcd(field, f, nu)) <= 0:
                    count += 1
        return count
    from fractions import Fraction
    q = Fraction(field.q)
    if d == 0:
        val = q ** e
    elif e >= d:
        val = q ** (d + e) * (1 - 1 / q) * (1 - q ** (-2 * d)) / (1 + 1 / q)
    else:
        val = q ** (d + e) * (1 - 1 / q) * (1 + q ** (-2 * e - 1)) / (1 + 1 / q)
    assert val.denominator == 1
    return val.numerator


# -- public wrapper -------------------------------------------------------

_TERM_RE = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(T(?:\^(\d+))?)?", re.X)


def parse_poly(field, text):
    """Parse coefficients-over-T text such as 'T^2+3*T+1' (reduced mod p)."""
    text = text.replace(" ", "").replace("-", "+-")
    if not text:
        raise ValueError("empty polynomial")
    coeffs = {}
    for part in text.split("+"):
        if not part:
            continue
        sign = 1
        if part.startswith("-"):
            sign = -1
            part = part[1:]
        if "T" in part:
            base, _, exp = part.partition("^")
            coef = base.rstrip("T").rstrip("*")
            c = int(coef) if coef else 1
            k = int(exp) if exp else 1
        else:
            c = int(part)
            k = 0
        coeffs[k] = coeffs.get(k, 0) + sign * c
    deg = max(coeffs)
    out = [0] * (deg + 1)
    for k, c in coeffs.items():
        out[k] = c % field.p
    return pnormalize(out)


def format_poly(f):
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("T" if c == 1 else f"{c}*T")
        else:
            terms.append(f"T^{i}" if c == 1 else f"{c}*T^{i}")
    return "+".join(terms)


@dataclass
class MonicPoly:
    """Public wrapper pairing a coefficient tuple with its field."""

    field: Field
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", pnormalize(self.coeffs))
        assert is_monic(self.coeffs), "polynomial must be monic"

    @staticmethod
    def parse(field, text) -> "MonicPoly":
        return MonicPoly(field, parse_poly(field, text))

    @property
    def degree(self):
        return pdeg(self.coeffs)

    def factorization(self):
        return factor_monic(self.field, self.coeffs)

    def __str__(self):
        return format_poly(self.coeffs)
