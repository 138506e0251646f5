"""Exact arithmetic in number fields K = Q[x]/(g) with g monic over Z.

Elements are stored as an integer numerator vector over the power basis
1, x, ..., x^(n-1) together with a positive common denominator, kept in
lowest terms, so that equal elements have equal representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt, lcm

from .exceptions import (
    NotMonic,
    PrecisionExhausted,
    RamifiedOrNonMaximal,
    Reducible,
    ZeroElement,
)
from .ffarith import (
    FqElement,
    FqField,
    fp_divmod,
    fp_factor_squarefree,
    fp_is_irreducible,
    fp_mod,
    fp_mul,
    fp_xgcd,
)

DEFAULT_MAX_PRECISION = 64


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ZeroElement("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def primes_up_to(bound):
    sieve = bytearray([1]) * (bound + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(bound ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(bound + 1) if sieve[i]]


# ---------------------------------------------------------------------------
# Q[x] helpers on Fraction lists (constant term first)

def qpoly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def qpoly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    db = len(b) - 1
    if len(a) <= db:
        return [], qpoly_trim(a)
    quo = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / b[-1]
        quo[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return qpoly_trim(quo), qpoly_trim(a[:db])


def qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return qpoly_trim(out)


def qpoly_sub(a, b):
    n = max(len(a), len(b))
    return qpoly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def qpoly_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NumberField:
    """K = Q[x]/(g); build with :func:`make_number_field`."""

    defining_poly: tuple
    poly_disc: int
    variable: str = "a"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.defining_poly == other.defining_poly

    def __hash__(self):
        return hash(self.defining_poly)

    @property
    def degree(self) -> int:
        return len(self.defining_poly) - 1

    def __repr__(self):
        return f"NumberField({poly_str(self.defining_poly, 'x')})"

    def __call__(self, value):
        return self.element(value)

    def element(self, value):
        if isinstance(value, NFElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)):
            value = [value]
        elif isinstance(value, str):
            value = [Fraction(value)]
        coords = [Fraction(c) for c in value]
        if len(coords) > self.degree:
            raise ValueError(f"expected at most {self.degree} coordinates, got {len(coords)}")
        coords += [Fraction(0)] * (self.degree - len(coords))
        den = lcm(*(c.denominator for c in coords))
        return NFElement._make(self, [int(c * den) for c in coords], den)

    def zero(self):
        return NFElement._make(self, [0] * self.degree, 1)

    def one(self):
        return self.element(1)

    def gen(self):
        if self.degree == 1:
            return self.element(-self.defining_poly[0])
        return NFElement._make(self, [0, 1] + [0] * (self.degree - 2), 1)

    def _reduce_int_poly(self, prod):
        """Reduce an integer polynomial modulo g (exact, stays integral)."""
        g = self.defining_poly
        n = self.degree
        prod = list(prod)
        for i in range(len(prod) - 1, n - 1, -1):
            c = prod[i]
            if c:
                for j in range(n):
                    prod[i - n + j] -= c * g[j]
        prod = prod[:n]
        return prod + [0] * (n - len(prod))


def poly_str(coeffs, var="x"):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mon and c == 1:
            s = mon
        elif mon and c == -1:
            s = "-" + mon
        else:
            s = f"{c}*{mon}" if mon else f"{c}"
        terms.append(s)
    return " + ".join(terms).replace("+ -", "- ") or "0"


def make_number_field(g, variable="a") -> NumberField:
    """Validate ``g`` (integer coefficients, constant term first) and build K."""
    g = tuple(int(c) for c in g)
    while len(g) > 1 and g[-1] == 0:
        g = g[:-1]
    if len(g) < 2:
        raise NotMonic("defining polynomial must have degree >= 1")
    if g[-1] != 1:
        raise NotMonic(f"defining polynomial must be monic, leading coefficient {g[-1]}")
    disc = _int_poly_discriminant(g)
    if disc == 0:
        raise Reducible("defining polynomial has a repeated factor")
    if len(g) > 2 and not _is_irreducible_over_q(g, disc):
        raise Reducible(f"{poly_str(g)} factors over Q")
    return NumberField(g, disc, variable)


def _int_poly_discriminant(g):
    import sympy

    x = sympy.Symbol("x")
    return int(sympy.discriminant(sympy.Poly(list(reversed(g)), x)))


def _is_irreducible_over_q(g, disc):
    # irreducible mod some good p settles it; otherwise factor exactly
    for p in primes_up_to(200):
        if disc % p and fp_is_irreducible(list(g), p):
            return True
    import sympy

    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(sympy.Poly(list(reversed(g)), x))
    return len(factors) == 1 and factors[0][1] == 1


class NFElement:
    """Element of a :class:`NumberField` in canonical reduced form."""

    __slots__ = ("field", "nums", "den", "_hash")

    @classmethod
    def _make(cls, K, nums, den):
        if den < 0:
            nums, den = [-c for c in nums], -den
        gg = gcd(den, *nums)
        if gg > 1:
            nums = [c // gg for c in nums]
            den //= gg
        self = object.__new__(cls)
        self.field = K
        self.nums = tuple(nums)
        self.den = den
        self._hash = None
        return self

    # views ---------------------------------------------------------------
    @property
    def coords(self):
        return tuple(Fraction(c, self.den) for c in self.nums)

    @property
    def denominator(self):
        return self.den

    def is_zero(self):
        return not any(self.nums)

    def is_rational(self):
        return not any(self.nums[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.nums[0], self.den)

    def __repr__(self):
        K = self.field
        if self.is_rational():
            return str(self.rational())
        return poly_str(list(self.coords), K.variable)

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.field != self.field:
                raise ValueError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = lcm(self.den, o.den)
        a, b = d // self.den, d // o.den
        return NFElement._make(self.field, [x * a + y * b for x, y in zip(self.nums, o.nums)], d)

    __radd__ = __add__

    def __neg__(self):
        return NFElement._make(self.field, [-x for x in self.nums], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return NFElement._make(
                self.field, [x * other.numerator for x in self.nums], self.den * other.denominator
            )
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = self.field.degree
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(self.nums):
            if x:
                for j, y in enumerate(o.nums):
                    if y:
                        prod[i + j] += x * y
        return NFElement._make(self.field, self.field._reduce_int_poly(prod), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.field.degree == 1:
            return self.field.element(1 / self.rational())
        # s*a + t*g = 1 over Q[x]
        a = qpoly_trim([Fraction(c, self.den) for c in self.nums])
        g = [Fraction(c) for c in self.field.defining_poly]
        r0, r1, s0, s1 = g, a, [], [Fraction(1)]
        while len(r1) > 1:
            q, r = qpoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, qpoly_sub(s0, qpoly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element is not invertible")
        inv = [c / r1[0] for c in s1]
        return self.field.element(inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational() == other
        if not isinstance(other, NFElement):
            return NotImplemented
        return self.field == other.field and self.den == other.den and self.nums == other.nums

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.defining_poly, self.nums, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # invariants ------------------------------------------------------------
    def minpoly(self):
        return element_minimal_polynomial(self)

    def norm(self) -> Fraction:
        m = self.minpoly()
        d = len(m) - 1
        return ((-1) ** d * m[0]) ** (self.field.degree // d)

    def trace(self) -> Fraction:
        m = self.minpoly()
        d = len(m) - 1
        return -m[d - 1] * (self.field.degree // d)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.minpoly())


def element_minimal_polynomial(alpha: NFElement):
    """Monic minimal polynomial over Q as a list of Fractions, constant first.

    Found as the first linear dependency among 1, alpha, alpha^2, ...
    """
    K = alpha.field
    n = K.degree
    basis = []  # rows: (reduced vector, pivot, combination over powers)
    power = K.one()
    for k in range(n + 1):
        vec = list(power.coords)
        comb = [Fraction(0)] * (n + 1)
        comb[k] = Fraction(1)
        for rvec, piv, rcomb in basis:
            c = vec[piv]
            if c:
                vec = [x - c * y for x, y in zip(vec, rvec)]
                comb = [x - c * y for x, y in zip(comb, rcomb)]
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            return comb[: k + 1]
        scale = vec[piv]
        basis.append(([x / scale for x in vec], piv, [x / scale for x in comb]))
        power = power * alpha
    raise ArithmeticError("no linear dependency among n+1 powers")


# ---------------------------------------------------------------------------
# primes and local maps

@dataclass(frozen=True)
class PrimeSlot:
    """A prime of K over an unramified rational prime p.

    ``local_root`` is a root of the defining polynomial in the residue field
    GF(p^f); mapping x to it is the reduction map modulo this prime.
    """

    field: NumberField
    p: int
    residue_degree: int
    factor: tuple
    local_root: FqElement
    slot_index: int

    @property
    def residue_field(self) -> FqField:
        return self.local_root.field

    @property
    def norm(self) -> int:
        return self.p ** self.residue_degree

    def __repr__(self):
        return f"PrimeSlot(p={self.p}, f={self.residue_degree}, index={self.slot_index})"


@lru_cache(maxsize=4096)
def primes_above(K: NumberField, p: int):
    """All primes of K above ``p``, ordered by (degree, local root / factor)."""
    if K.poly_disc % p == 0:
        raise RamifiedOrNonMaximal(f"p = {p} divides disc(g) = {K.poly_disc}")
    factors = fp_factor_squarefree(list(K.defining_poly), p)

    def key(h):
        return (len(h) - 1, ((-h[0]) % p,) if len(h) == 2 else tuple(h))

    slots = []
    for idx, h in enumerate(sorted(factors, key=key)):
        f = len(h) - 1
        if f == 1:
            F = FqField.prime_field(p)
            root = FqElement(F, ((-h[0]) % p,))
        else:
            F = FqField(p, tuple(h))
            root = FqElement(F, (0, 1) + (0,) * (f - 2))
        slots.append(PrimeSlot(K, p, f, tuple(h), root, idx))
    return tuple(slots)


def reduce_element(alpha: NFElement, slot: PrimeSlot) -> FqElement:
    """Image of alpha in the residue field (alpha must be p-integral)."""
    p = slot.p
    if alpha.den % p == 0:
        raise ValueError(f"element has p = {p} in its denominator")
    F = slot.residue_field
    x = slot.local_root.rep
    acc = F.zero()
    for c in reversed(alpha.nums):
        acc = F.add(F.mul(acc, x), F.from_int(c))
    return FqElement(F, F.mul(acc, F.from_int(pow(alpha.den, -1, p))))


# (Z/M)[x]/(g) helpers shared with the root lifter

def ring_mul(a, b, K: NumberField, M: int):
    n = K.degree
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return [c % M for c in K._reduce_int_poly(prod)]


def ring_inverse(a, K: NumberField, p: int, k: int):
    """Inverse of a unit of (Z/p^k)[x]/(g) via Newton iteration from mod p."""
    g = list(K.defining_poly)
    n = K.degree
    if n == 1:
        return [pow(a[0], -1, p ** k)]
    gg, s, _ = fp_xgcd([c % p for c in a], g, p)
    if gg != [1]:
        raise ZeroDivisionError("not a unit modulo p")
    inv = s + [0] * (n - len(s))
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        M = p ** prec
        t = ring_mul(a, inv, K, M)
        t = [(-c) % M for c in t]
        t[0] = (t[0] + 2) % M
        inv = ring_mul(inv, t, K, M)
    return inv


@lru_cache(maxsize=4096)
def _slot_idempotent(slot: PrimeSlot, k: int):
    """Idempotent of (Z/p^k)[x]/(g) projecting onto the completion at slot."""
    K, p = slot.field, slot.p
    n = K.degree
    if n == 1:
        return (1,)
    if k == 1:
        g = list(K.defining_poly)
        h = list(slot.factor)
        cof = fp_divmod([c % p for c in g], h, p)[0]
        _, s, _ = fp_xgcd(cof, h, p)
        e = fp_mod(fp_mul(s, cof, p), [c % p for c in g], p)
        return tuple(e + [0] * (n - len(e)))
    half = _slot_idempotent(slot, (k + 1) // 2)
    M = p ** k
    e = list(half)
    e2 = ring_mul(e, e, K, M)
    e3 = ring_mul(e2, e, K, M)
    return tuple((3 * x - 2 * y) % M for x, y in zip(e2, e3))


def padic_valuation(alpha: NFElement, slot: PrimeSlot, max_precision: int = DEFAULT_MAX_PRECISION) -> int:
    """Valuation of alpha at ``slot``.

    The numerator is projected onto the slot's component of
    (Z/p^k)[x]/(g); its valuation is the least p-adic valuation among the
    projected coordinates, exact as soon as it falls below k.  k doubles up
    to ``max_precision``.
    """
    if alpha.is_zero():
        raise ZeroElement("valuation of zero")
    if slot.field != alpha.field:
        raise ValueError("slot belongs to a different field")
    p = slot.p
    shift = vp(alpha.den, p)
    k = 2
    while True:
        M = p ** k
        e = _slot_idempotent(slot, k)
        proj = ring_mul([c % M for c in alpha.nums], list(e), alpha.field, M)
        v = min((vp(c, p) for c in proj if c), default=k)
        if v < k:
            return v - shift
        if k >= max_precision:
            raise PrecisionExhausted(f"valuation at {slot} is at least {k}")
        k = min(2 * k, max_precision)


def rational_reconstruction(a: int, M: int):
    """Return Fraction(n, d) with n/d = a mod M, |n|, d <= sqrt(M/2), or None."""
    a %= M
    bound = isqrt(M // 2)
    r0, r1 = M, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)
