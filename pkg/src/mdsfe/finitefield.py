"""Finite fields F_q for odd prime powers, multiplicative characters, Gauss sums.

Field elements are integers 0..q-1 encoding polynomial-basis coordinates
base p (for prime fields this is plain arithmetic mod p).  The generator
and defining modulus are chosen deterministically so all derived values
are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cyclotomic import CycNum
from .errors import EvenCharacteristic, NotPrime, OrderNotDividing, Reducible


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """F_{p^e} with a fixed generator of the multiplicative group."""

    def __init__(self, p, e, modulus, gen):
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus  # tuple low->high over F_p, monic degree e
        self.gen = gen
        self._dlog = None
        self._mul_table = None

    # -- element codec: int <-> coefficient vector base p ----------------

    def _vec(self, a):
        p, e = self.p, self.e
        out = []
        for _ in range(e):
            out.append(a % p)
            a //= p
        return out

    def _num(self, v):
        out = 0
        for c in reversed(v):
            out = out * self.p + c
        return out

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        va, vb = self._vec(a), self._vec(b)
        return self._num([(x + y) % self.p for x, y in zip(va, vb)])

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        va, vb = self._vec(a), self._vec(b)
        return self._num([(x - y) % self.p for x, y in zip(va, vb)])

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return self._num([(-x) % self.p for x in self._vec(a)])

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a, b):
        p = self.p
        va, vb = self._vec(a), self._vec(b)
        conv = [0] * (2 * self.e - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    conv[i + j] = (conv[i + j] + x * y) % p
        mod = self.modulus
        for k in range(len(conv) - 1, self.e - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                for j in range(self.e):
                    conv[k - self.e + j] = (conv[k - self.e + j] - c * mod[j]) % p
        return self._num(conv[: self.e])

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inv(a), -k)
        out, base = 1, a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def trace(self, a):
        """Trace to the prime field, returned as an int mod p."""
        if self.e == 1:
            return a
        t, x = 0, a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        return t  # element of the prime subfield: encoded value < p

    def norm(self, a):
        if self.e == 1:
            return a
        return self.pow(a, (self.q - 1) // (self.p - 1))

    def dlog(self, a):
        if self._dlog is None:
            table = {}
            x = 1
            for t in range(self.q - 1):
                table[x] = t
                x = self.mul(x, self.gen)
            self._dlog = table
        return self._dlog[a]

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def build_tables(self):
        if self.e > 1 and self._mul_table is None and self.q <= 2048:
            self._mul_table = [[self._mul_slow(a, b) for b in range(self.q)]
                               for a in range(self.q)]

    def __repr__(self):
        return f"F_{self.q}"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))


def _poly_is_irreducible(coeffs, p):
    """Trial-division irreducibility over F_p for the small moduli used here."""
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    # no roots
    for a in range(p):
        v = 0
        for c in reversed(coeffs):
            v = (v * a + c) % p
        if v == 0:
            return False
    if deg <= 3:
        return True
    # divide by irreducible quadratics (deg <= 5 suffices for the desk scale)
    for b in range(p):
        for c in range(p):
            quad = (c, b, 1)
            if not _poly_is_irreducible(quad, p):
                continue
            rem = list(coeffs)
            for i in range(deg, 1, -1):
                lead = rem[i]
                if lead:
                    rem[i] = 0
                    rem[i - 1] = (rem[i - 1] - lead * b) % p
                    rem[i - 2] = (rem[i - 2] - lead * c) % p
            if rem[0] % p == 0 and rem[1] % p == 0:
                return False
    return True


def _smallest_irreducible(p, e):
    """Lexicographically smallest monic irreducible of degree e over F_p."""
    if e == 1:
        return (0, 1)
    total = p ** e
    for idx in range(total):
        coeffs, a = [], idx
        for _ in range(e):
            coeffs.append(a % p)
            a //= p
        coeffs.append(1)
        if _poly_is_irreducible(tuple(coeffs), p):
            return tuple(coeffs)
    raise Reducible("no irreducible polynomial found")


def _element_order(field, a):
    if a == 0:
        return 0
    n = 1
    x = a
    while x != 1:
        x = field.mul(x, a)
        n += 1
    return n


@lru_cache(maxsize=None)
def field_build(p: int, e: int = 1, modulus=None) -> Field:
    if p == 2:
        raise EvenCharacteristic("q must be odd")
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if modulus is None:
        modulus = _smallest_irreducible(p, e)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise Reducible("modulus must be monic of the stated degree")
        if not _poly_is_irreducible(modulus, p):
            raise Reducible("modulus is reducible")
    f = Field(p, e, modulus, gen=1)
    f.build_tables()
    for a in range(1, f.q):
        if _element_order(f, a) == f.q - 1:
            f.gen = a
            break
    else:
        raise NotPrime("no generator found; field construction failed")
    return f


@dataclass(frozen=True)
class MultChar:
    """Multiplicative character chi = psi^k where psi(gen) = zeta_(q-1)."""

    field: Field
    k: int  # exponent of the canonical generator character, mod q-1

    @property
    def order(self) -> int:
        q1 = self.field.q - 1
        import math
        return q1 // math.gcd(q1, self.k % q1)

    @property
    def n(self) -> int:
        return self.order

    def exp_of(self, a):
        """Exponent t with chi(a) = zeta_(q-1)^t, or None for a = 0."""
        if a == 0:
            return None
        return (self.k * self.field.dlog(a)) % (self.field.q - 1)

    def value(self, a) -> CycNum:
        t = self.exp_of(a)
        if t is None:
            return CycNum.zero()
        return CycNum.root_of_unity(self.field.q - 1, t)

    def __call__(self, a) -> CycNum:
        return self.value(a)

    def __mul__(self, other: "MultChar") -> "MultChar":
        assert self.field == other.field
        return MultChar(self.field, (self.k + other.k) % (self.field.q - 1))

    def __pow__(self, j: int) -> "MultChar":
        return MultChar(self.field, (self.k * j) % (self.field.q - 1))

    def is_trivial(self) -> bool:
        return self.k % (self.field.q - 1) == 0


def char_make(f: Field, n: int) -> MultChar:
    """The character of order n with chi(gen) = zeta_n."""
    if n < 1 or (f.q - 1) % n != 0:
        raise OrderNotDividing(f"{n} does not divide q-1 = {f.q - 1}")
    return MultChar(f, (f.q - 1) // n)


def gauss_sum(chi: MultChar) -> CycNum:
    """Finite field Gauss sum: sum over units of chi(a) e(Tr(a)/p).

    With the chi(0) = 0 convention a trivial character gives -1.
    """
    f = chi.field
    q1 = f.q - 1
    # bucket counts by (character exponent, trace) and convert once
    counts = {}
    for a in f.units():
        key = (chi.exp_of(a), f.trace(a) % f.p)
        counts[key] = counts.get(key, 0) + 1
    total = CycNum.zero()
    L = _lcm(q1, f.p)
    for (t, tr), c in sorted(counts.items()):
        term = CycNum.root_of_unity(L, t * (L // q1) + tr * (L // f.p))
        total = total + term * c
    return total


def _lcm(a, b):
    import math
    return a * b // math.gcd(a, b)


def _subfield_embedding(big: Field, small: Field):
    """An F_p-embedding small -> big, found by locating a root of small's modulus."""
    if small.e == 1:
        return {a: a % big.p for a in range(small.p)}
    for x in range(big.q):
        v = 0
        for c in reversed(small.modulus):
            v = big.add(big.mul(v, x), c % big.p)
        if v == 0:
            emb = {}
            for a in small.elements():
                va = small._vec(a)
                acc = 0
                for c in reversed(va):
                    acc = big.add(big.mul(acc, x), c)
                emb[a] = acc
            if emb[small.gen] != 0:
                return emb
    raise Reducible("no subfield embedding found")


def lift_char(chi: MultChar, e: int):
    """(big field, chi composed with the norm map down to chi's field)."""
    f = chi.field
    big = field_build(f.p, f.e * e)
    emb = _subfield_embedding(big, f)
    inv_emb = {v: k for k, v in emb.items()}

    class _NormChar:
        field = big

        @staticmethod
        def exp_of(a):
            if a == 0:
                return None
            nrm = big.pow(a, (big.q - 1) // (f.q - 1))
            return chi.exp_of(inv_emb[nrm]) if nrm in inv_emb else None

        @staticmethod
        def value(a):
            t = _NormChar.exp_of(a)
            if t is None:
                return CycNum.zero()
            return CycNum.root_of_unity(f.q - 1, t)

    return big, _NormChar


def gauss_sum_lifted(chi: MultChar, e: int) -> CycNum:
    """Gauss sum of chi composed with the norm from the degree-e extension."""
    big, nchi = lift_char(chi, e)
    q1 = chi.field.q - 1
    counts = {}
    for a in big.units():
        key = (nchi.exp_of(a), big.trace(a) % big.p)
        counts[key] = counts.get(key, 0) + 1
    total = CycNum.zero()
    L = _lcm(q1, big.p)
    for (t, tr), c in sorted(counts.items()):
        if t is None:
            continue
        term = CycNum.root_of_unity(L, t * (L // q1) + tr * (L // big.p))
        total = total + term * c
    return total


def hasse_davenport_check(chi: MultChar, e: int) -> bool:
    """Check -g(chi_e) = (-g(chi))^e by recomputing on the extension field."""
    if e == 1:
        return True
    g = gauss_sum(chi)
    ge = gauss_sum_lifted(chi, e)
    return -ge == (-g) ** e
