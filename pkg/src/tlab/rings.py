"""Exact coefficient rings behind one small contract.

Four kinds of ring are supported, all fields with decidable equality:

* ``Q``           -- the rationals (stdlib Fraction payloads),
* ``Fp:<p>``      -- the prime field with p elements,
* ``cyclo:<m>``   -- the cyclotomic field Q[q]/(Phi_m(q)),
* ``ratfun:<r>``  -- the field of rational functions over any of the above
                     (nestable, so Q(t)(u) is ``ratfun:ratfun:Q``).

Every element is kept in a canonical form (reduced fraction, residue in
[0, p), polynomial of degree < deg Phi_m, gcd-reduced numerator/denominator
with monic denominator), so payload equality is equality in the ring and
``is_zero`` is trivial.  Values are immutable; all operations are pure.

Rational-function generators are named by nesting depth, innermost first:
``t``, ``u``, ``v``, ``w``.  The cyclotomic generator is always ``q``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional


class RingError(ValueError):
    """Base class for ring construction and arithmetic errors."""


class RingSpecError(RingError):
    """Malformed ring-specification string."""


class ElementParseError(RingError):
    """Malformed element expression."""


# ---------------------------------------------------------------------------
# values


class RingValue:
    """An element of a ring, stored in canonical form.

    Equality of payloads is equality in the ring; values hash and can be
    used as dict keys (coefficients of diagrams, matrix entries, ...).
    """

    __slots__ = ("ring", "payload", "_hash")

    def __init__(self, ring: "Ring", payload):
        self.ring = ring
        self.payload = payload
        self._hash = None

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "RingValue":
        if isinstance(other, RingValue):
            if other.ring != self.ring:
                raise RingError(f"cannot mix elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, RingValue) and other.ring is self.ring:
            if self.ring._is_zero(self.payload):
                return other
            if self.ring._is_zero(other.payload):
                return self
            return RingValue(self.ring, self.ring._add(self.payload, other.payload))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingValue(self.ring, self.ring._add(self.payload, other.payload))

    __radd__ = __add__

    def __neg__(self):
        return RingValue(self.ring, self.ring._neg(self.payload))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, RingValue) and other.ring is self.ring:
            if self.ring._is_zero(self.payload):
                return self
            if self.ring._is_zero(other.payload):
                return other
            return RingValue(self.ring, self.ring._mul(self.payload, other.payload))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingValue(self.ring, self.ring._mul(self.payload, other.payload))

    __rmul__ = __mul__

    def inverse(self) -> Optional["RingValue"]:
        """Multiplicative inverse, or None when the element is not invertible."""
        inv = self.ring._invert(self.payload)
        if inv is None:
            return None
        return RingValue(self.ring, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        inv = other.inverse()
        if inv is None:
            raise ZeroDivisionError(f"{other} is not invertible in {self.ring}")
        return self * inv

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            inv = self.inverse()
            if inv is None:
                raise ZeroDivisionError(f"{self} is not invertible in {self.ring}")
            base, exponent = inv, -exponent
        acc = self.ring.one
        while exponent:
            if exponent & 1:
                acc = acc * base
            base = base * base
            exponent >>= 1
        return acc

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.ring._is_zero(self.payload)

    def is_one(self) -> bool:
        return self == self.ring.one

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, RingValue):
            return NotImplemented
        return self.ring == other.ring and self.payload == other.payload

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.payload))
        return self._hash

    def __str__(self):
        return self.ring._to_str(self.payload)

    def __repr__(self):
        return f"<{self} in {self.ring}>"


# ---------------------------------------------------------------------------
# rings


class Ring:
    """Abstract commutative ring (in fact always a field here)."""

    kind = "abstract"

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Ring) and self._key() == other._key()

    def __hash__(self):
        h = getattr(self, "_hash", None)
        if h is None:
            h = hash(self._key())
            self._hash = h
        return h

    def __repr__(self):
        return self.spec()

    def spec(self) -> str:
        """The ring-specification string that reconstructs this ring."""
        raise NotImplementedError

    # payload-level operations, implemented by subclasses
    def _add(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _invert(self, a):
        raise NotImplementedError

    def _is_zero(self, a) -> bool:
        raise NotImplementedError

    def _from_int(self, n: int):
        raise NotImplementedError

    def _to_str(self, a) -> str:
        raise NotImplementedError

    # -- convenience -------------------------------------------------------

    @property
    def zero(self) -> RingValue:
        cached = getattr(self, "_zero", None)
        if cached is None:
            cached = self.from_int(0)
            self._zero = cached
        return cached

    @property
    def one(self) -> RingValue:
        cached = getattr(self, "_one", None)
        if cached is None:
            cached = self.from_int(1)
            self._one = cached
        return cached

    def from_int(self, n: int) -> RingValue:
        return RingValue(self, self._from_int(n))

    def generators(self) -> dict:
        """Named generators visible in this ring (including nested ones)."""
        return {}

    def parse(self, text: str) -> RingValue:
        return parse_element(self, text)


class Rationals(Ring):
    kind = "Q"

    def _key(self):
        return ("Q",)

    def spec(self):
        return "Q"

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _invert(self, a):
        if a == 0:
            return None
        return 1 / a

    def _is_zero(self, a):
        return a == 0

    def _from_int(self, n):
        return Fraction(n)

    def _to_str(self, a):
        return str(a)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField(Ring):
    kind = "Fp"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise RingSpecError(f"{p} is not prime")
        self.p = p

    def _key(self):
        return ("Fp", self.p)

    def spec(self):
        return f"Fp:{self.p}"

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _invert(self, a):
        if a % self.p == 0:
            return None
        return pow(a, -1, self.p)

    def _is_zero(self, a):
        return a % self.p == 0

    def _from_int(self, n):
        return n % self.p

    def _to_str(self, a):
        return str(a)


# -- dense polynomials over Fraction, used by the cyclotomic field ----------


def _qtrim(cs: list) -> tuple:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _qadd(a, b):
    n = max(len(a), len(b))
    return _qtrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _qmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _qtrim(out)


def _qdivmod(a, b):
    """Polynomial division over Q; b must be non-zero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(rem) >= len(b) and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(b):
            break
        shift = len(rem) - len(b)
        factor = rem[-1] * inv_lead
        quo[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] -= factor * c
        rem.pop()
    return _qtrim(quo), _qtrim(rem)


def _qxgcd(a, b):
    """Extended Euclid over Q[x]: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = a, b
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qadd(s0, _qmul((Fraction(-1),), _qmul(q, s1)))
        t0, t1 = t1, _qadd(t0, _qmul((Fraction(-1),), _qmul(q, t1)))
    return r0, s0, t0


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Coefficients of Phi_m, computed by exact division of x^m - 1 by the
    Phi_d for proper divisors d of m."""
    if m < 1:
        raise RingSpecError("cyclotomic modulus must be >= 1")
    num = [Fraction(0)] * (m + 1)
    num[0], num[m] = Fraction(-1), Fraction(1)
    num = _qtrim(num)
    den = (Fraction(1),)
    for d in range(1, m):
        if m % d == 0:
            den = _qmul(den, cyclotomic_polynomial(d))
    quo, rem = _qdivmod(num, den)
    assert not rem, "cyclotomic division must be exact"
    return quo


class CyclotomicField(Ring):
    kind = "cyclo"

    def __init__(self, m: int):
        if m < 1:
            raise RingSpecError("cyclotomic modulus must be >= 1")
        self.m = m
        self.modulus = cyclotomic_polynomial(m)
        self.degree = len(self.modulus) - 1

    def _key(self):
        return ("cyclo", self.m)

    def spec(self):
        return f"cyclo:{self.m}"

    def _reduce(self, coeffs) -> tuple:
        _, rem = _qdivmod(coeffs, self.modulus)
        return rem

    def _add(self, a, b):
        return _qadd(a, b)

    def _neg(self, a):
        return tuple(-c for c in a)

    def _mul(self, a, b):
        return self._reduce(_qmul(a, b))

    def _invert(self, a):
        if not a:
            return None
        g, s, _ = _qxgcd(a, self.modulus)
        # Phi_m is irreducible over Q, so the gcd is a non-zero constant.
        assert len(g) == 1
        return self._reduce(_qmul(s, (1 / g[0],)))

    def _is_zero(self, a):
        return not a

    def _from_int(self, n):
        return self._reduce((Fraction(n),))

    def _to_str(self, a):
        return _poly_text([str(c) for c in a], "q")

    @property
    def gen(self) -> RingValue:
        return RingValue(self, self._reduce((Fraction(0), Fraction(1))))

    def generators(self):
        return {"q": self.gen}


# -- polynomials with RingValue coefficients, used by fraction fields -------


def _ptrim(cs: list) -> tuple:
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


def _padd(ring, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else ring.zero
        y = b[i] if i < len(b) else ring.zero
        out.append(x + y)
    return _ptrim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(ring, a, b):
    if not a or not b:
        return ()
    out = [ring.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return _ptrim(out)


def _pdivmod(ring, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(b) == 1:
        inv = b[0].inverse()
        assert inv is not None
        return tuple(c * inv for c in a), ()
    rem = list(a)
    quo = [ring.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = b[-1].inverse()
    assert inv_lead is not None, "leading coefficient must be invertible"
    while len(rem) >= len(b):
        while rem and rem[-1].is_zero():
            rem.pop()
        if len(rem) < len(b):
            break
        shift = len(rem) - len(b)
        factor = rem[-1] * inv_lead
        quo[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] = rem[shift + i] - factor * c
        rem.pop()
    return _ptrim(quo), _ptrim(rem)


def _pmonic(ring, a):
    if not a:
        return a
    inv = a[-1].inverse()
    return tuple(c * inv for c in a)


def _pgcd(ring, a, b):
    if (a and len(a) == 1) or (b and len(b) == 1):
        return (ring.one,)
    while b:
        if len(b) == 1:
            return (ring.one,)
        _, r = _pdivmod(ring, a, b)
        a, b = b, r
    return _pmonic(ring, a)


# -- integer primitive-PRS gcd, the workhorse behind fraction-field gcds ----
#
# Euclidean remainders over Q[t] (and worse, over Q(t)[u]) suffer severe
# coefficient growth.  Clearing denominators and running a primitive
# polynomial-remainder sequence over the integers keeps every intermediate
# small; the univariate routine is reused one level up for gcds of
# polynomials whose coefficients are themselves rational functions.


def _ztrim(v: list) -> list:
    while v and v[-1] == 0:
        v.pop()
    return v


def _zprim(v: list) -> list:
    g = 0
    for c in v:
        g = math.gcd(g, c)
    if g == 0:
        return []
    if v[-1] < 0:
        g = -g
    return [c // g for c in v]


def _zmulpoly(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _zprem(a: list, b: list) -> list:
    """Pseudo-remainder of integer polynomials (b non-zero)."""
    rem = list(a)
    lb = b[-1]
    while len(rem) >= len(b):
        if rem[-1] == 0:
            rem.pop()
            continue
        shift = len(rem) - len(b)
        lead = rem[-1]
        rem = [lb * c for c in rem]
        for i, bc in enumerate(b):
            rem[shift + i] -= lead * bc
        rem.pop()
    return _ztrim(rem)


def _zgcd_poly(a: list, b: list) -> list:
    """Primitive gcd of integer polynomials (primitive output, lead > 0)."""
    a, b = _zprim(a), _zprim(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [1]
        r = _zprim(_zprem(a, b))
        a, b = b, r
    return a


def _fraction_clear(coeffs) -> list:
    """Scale a Fraction tuple to a primitive integer coefficient list."""
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return _zprim([int(c * lcm) for c in coeffs])


def _qgcd_fast(a, b):
    """Monic gcd of two Fraction-coefficient polynomials via integer PRS."""
    g = _zgcd_poly(_fraction_clear(a), _fraction_clear(b))
    lead = Fraction(g[-1])
    return tuple(Fraction(c) / lead for c in g)


def _zdivexact(a: list, b: list) -> list:
    """Exact division of integer polynomials (the divisor must divide)."""
    rem = list(a)
    quo = [0] * max(0, len(a) - len(b) + 1)
    while rem and len(rem) >= len(b):
        if rem[-1] == 0:
            rem.pop()
            continue
        q, r = divmod(rem[-1], b[-1])
        assert r == 0, "inexact integer polynomial division"
        shift = len(rem) - len(b)
        quo[shift] = q
        for i, bc in enumerate(b):
            rem[shift + i] -= q * bc
        rem.pop()
    assert not _ztrim(rem), "inexact integer polynomial division"
    return _ztrim(quo)


# Polynomials in a second variable whose coefficients are integer
# polynomials: lists (ascending in the outer variable) of integer lists.


def _zz_trim(A: list) -> list:
    while A and not A[-1]:
        A.pop()
    return A


def _zz_content(A: list) -> list:
    int_content = 0
    prim_gcd: list = []
    for c in A:
        if not c:
            continue
        for x in c:
            int_content = math.gcd(int_content, x)
        prim_gcd = _zgcd_poly(prim_gcd, c) if prim_gcd else _zprim(c)
    if int_content == 0:
        return []
    return [int_content * x for x in prim_gcd]


def _zz_prim(A: list) -> list:
    content = _zz_content(A)
    if not content:
        return []
    if content == [1]:
        return [list(c) for c in A]
    return [_zdivexact(c, content) if c else [] for c in A]


def _zz_prem(A: list, B: list) -> list:
    rem = [list(c) for c in A]
    lead_b = B[-1]
    while len(rem) >= len(B):
        if not rem[-1]:
            rem.pop()
            continue
        shift = len(rem) - len(B)
        lead = rem[-1]
        rem = [_zmulpoly(lead_b, c) for c in rem]
        for i, bc in enumerate(B):
            prod = _zmulpoly(lead, bc)
            cur = rem[shift + i]
            if len(cur) < len(prod):
                cur = cur + [0] * (len(prod) - len(cur))
            for j, p in enumerate(prod):
                cur[j] -= p
            rem[shift + i] = _ztrim(cur)
        rem.pop()
    return _zz_trim(rem)


def _zz_gcd(A: list, B: list) -> list:
    A, B = _zz_prim(A), _zz_prim(B)
    if len(A) < len(B):
        A, B = B, A
    while B:
        if len(B) == 1:
            return [[1]]
        R = _zz_prim(_zz_prem(A, B))
        A, B = B, R
    return A


_GEN_NAMES = "tuvw"


class FractionField(Ring):
    """Field of rational functions in one variable over a base field.

    Payloads are (numerator, denominator) pairs of coefficient tuples,
    gcd-reduced with monic denominator.
    """

    kind = "ratfun"

    def __init__(self, base: Ring):
        self.base = base
        depth = 0
        r = base
        while isinstance(r, FractionField):
            depth += 1
            r = r.base
        self.var = _GEN_NAMES[depth] if depth < len(_GEN_NAMES) else f"t{depth}"

    def _key(self):
        return ("ratfun", self.base._key())

    def spec(self):
        return f"ratfun:{self.base.spec()}"

    def _one_den(self):
        cached = getattr(self, "_one_den_cache", None)
        if cached is None:
            cached = (self.base.one,)
            self._one_den_cache = cached
        return cached

    def _canon(self, num, den):
        if not den:
            raise ZeroDivisionError("zero denominator in rational function")
        if not num:
            return ((), self._one_den())
        if len(den) == 1:
            # constant denominator: already gcd-free, just normalise
            if den[0].is_one():
                return (num, den)
            lead_inv = den[0].inverse()
            return (tuple(c * lead_inv for c in num), self._one_den())
        g = self._gcd(num, den)
        if len(g) > 1 or not g[0].is_one():
            num, _ = _pdivmod(self.base, num, g)
            den, _ = _pdivmod(self.base, den, g)
        lead_inv = den[-1].inverse()
        num = tuple(c * lead_inv for c in num)
        den = tuple(c * lead_inv for c in den)
        return (num, den)

    def _gcd(self, num, den):
        """Monic gcd of two coefficient tuples, via integer-cleared
        primitive remainder sequences when the base tower allows it."""
        base = self.base
        if len(num) == 1 or len(den) == 1:
            return (base.one,)
        if isinstance(base, Rationals):
            g = _qgcd_fast(
                tuple(c.payload for c in num), tuple(c.payload for c in den)
            )
            return tuple(RingValue(base, c) for c in g)
        if isinstance(base, FractionField) and isinstance(base.base, Rationals):
            G = _zz_gcd(self._to_int_tower(num), self._to_int_tower(den))
            if len(G) == 1:
                return (base.one,)
            coeffs = [base._canon(tuple(RingValue(base.base, Fraction(x)) for x in c), base._one_den()) for c in G]
            values = [RingValue(base, c) for c in coeffs]
            lead_inv = values[-1].inverse()
            return tuple(v * lead_inv for v in values)
        return _pgcd(base, num, den)

    def _to_int_tower(self, poly) -> list:
        """Clear a Q(t)[u] polynomial to integer-coefficient form (a common
        scalar multiple; gcds are only needed up to units)."""
        common_den = (Fraction(1),)
        for c in poly:
            den = tuple(x.payload for x in c.payload[1])
            if len(den) == 1 and den[0] == 1:
                continue
            g = _qgcd_fast(common_den, den) if len(common_den) > 1 else (Fraction(1),)
            if len(g) > 1:
                den, _ = _qdivmod(den, g)
            common_den = _qmul(common_den, den)
        cleared = []
        lcm = 1
        for c in poly:
            num = tuple(x.payload for x in c.payload[0])
            den = tuple(x.payload for x in c.payload[1])
            scale, rem = _qdivmod(common_den, den)
            assert not rem, "common denominator must clear every coefficient"
            q = _qmul(num, scale)
            cleared.append(q)
            for f in q:
                lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        return _zz_trim([[int(f * lcm) for f in q] for q in cleared])

    def _add(self, a, b):
        (n1, d1), (n2, d2) = a, b
        if len(d1) == 1 and len(d2) == 1:
            # canonical values with constant denominator have denominator 1
            return (_padd(self.base, n1, n2), d1)
        num = _padd(self.base, _pmul(self.base, n1, d2), _pmul(self.base, n2, d1))
        return self._canon(num, _pmul(self.base, d1, d2))

    def _neg(self, a):
        return (_pneg(a[0]), a[1])

    def _mul(self, a, b):
        (n1, d1), (n2, d2) = a, b
        if len(d1) == 1 and len(d2) == 1:
            return (_pmul(self.base, n1, n2), d1)
        return self._canon(_pmul(self.base, n1, n2), _pmul(self.base, d1, d2))

    def _invert(self, a):
        num, den = a
        if not num:
            return None
        return self._canon(den, num)

    def _is_zero(self, a):
        return not a[0]

    def _from_int(self, n):
        v = self.base.from_int(n)
        if v.is_zero():
            return ((), (self.base.one,))
        return ((v,), (self.base.one,))

    def _to_str(self, a):
        num, den = a
        num_s = self._poly_str(num)
        if den == (self.base.one,):
            return num_s
        den_s = self._poly_str(den)
        return f"({num_s})/({den_s})"

    def _poly_str(self, coeffs):
        rendered = []
        for c in coeffs:
            s = str(c)
            if not re.fullmatch(r"-?[0-9]+(/[0-9]+)?", s) and not re.fullmatch(
                r"-?[a-z][0-9]*(\^-?[0-9]+)?", s
            ):
                s = f"({s})"
            rendered.append(s)
        return _poly_text(rendered, self.var)

    @property
    def gen(self) -> RingValue:
        return RingValue(self, ((self.base.zero, self.base.one), (self.base.one,)))

    def embed(self, value: RingValue) -> RingValue:
        """Embed a base-field value as a constant rational function."""
        if value.ring != self.base:
            raise RingError("embed expects a base-field value")
        if value.is_zero():
            return self.zero
        return RingValue(self, ((value,), (self.base.one,)))

    def generators(self):
        gens = {self.var: self.gen}
        for name, value in self.base.generators().items():
            gens[name] = self.embed(value)
        return gens


# -- clearing fractions to integer polynomial pairs -------------------------


def fraction_field_as_int_pair(value: RingValue):
    """Write a rational-function value over Q as P/Q for coprime integer
    coefficient lists P, Q (ascending degree)."""
    ring = value.ring
    if not (isinstance(ring, FractionField) and isinstance(ring.base, Rationals)):
        raise RingError("expected a value in ratfun:Q")
    num = [c.payload for c in value.payload[0]]
    den = [c.payload for c in value.payload[1]]
    lcm = 1
    for f in num + den:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    P = _ztrim([int(f * lcm) for f in num])
    Q = _ztrim([int(f * lcm) for f in den])
    g = _zgcd_poly(P, Q) if P else [1]
    if len(g) > 1:
        P, Q = _zdivexact(P, g), _zdivexact(Q, g)
    c = 0
    for x in P + Q:
        c = math.gcd(c, x)
    if c > 1:
        P = [x // c for x in P]
        Q = [x // c for x in Q]
    return P, Q


def tower_as_int_pair(value: RingValue):
    """Write a value of the tower Q(t)(u) as P/Q for coprime integer
    bivariate polynomials (lists over u of integer lists over t)."""
    ring = value.ring
    if not (
        isinstance(ring, FractionField)
        and isinstance(ring.base, FractionField)
        and isinstance(ring.base.base, Rationals)
    ):
        raise RingError("expected a value in ratfun:ratfun:Q")
    num, den = value.payload
    split = len(num)
    cleared = ring._to_int_tower(tuple(num) + tuple(den))
    # _to_int_tower trims trailing zero coefficients of the concatenation,
    # so rebuild the two halves with explicit padding
    padded = cleared + [[] for _ in range(split + len(den) - len(cleared))]
    P = _zz_trim(padded[:split])
    Q = _zz_trim(padded[split:])
    g = _zz_gcd([list(c) for c in P], [list(c) for c in Q]) if P else [[1]]
    if g != [[1]]:
        P = _zz_divexact(P, g)
        Q = _zz_divexact(Q, g)
    c = 0
    for poly in P + Q:
        for x in poly:
            c = math.gcd(c, x)
    if c > 1:
        P = [[x // c for x in poly] for poly in P]
        Q = [[x // c for x in poly] for poly in Q]
    return P, Q


def _zz_divexact(A: list, B: list) -> list:
    """Exact division in Z[t][u] (the divisor must divide)."""
    rem = [list(c) for c in A]
    quo: list = [[] for _ in range(max(0, len(A) - len(B) + 1))]
    while rem and len(rem) >= len(B):
        if not _ztrim(rem[-1]):
            rem.pop()
            continue
        shift = len(rem) - len(B)
        qc = _zdivexact(rem[-1], B[-1])
        quo[shift] = qc
        for i, bc in enumerate(B):
            prod = _zmulpoly(qc, bc)
            cur = rem[shift + i]
            if len(cur) < len(prod):
                cur = cur + [0] * (len(prod) - len(cur))
            for j, p in enumerate(prod):
                cur[j] -= p
            rem[shift + i] = _ztrim(cur)
        rem.pop()
    assert not _zz_trim(rem), "inexact bivariate division"
    return _zz_trim(quo)


def evaluate_int_poly(P: list, x: RingValue) -> RingValue:
    """Horner evaluation of an integer coefficient list at a ring value."""
    ring = x.ring
    acc = ring.zero
    for c in reversed(P):
        acc = acc * x + ring.from_int(c)
    return acc


def evaluate_int_poly2(PP: list, x: RingValue, y: RingValue) -> RingValue:
    """Evaluate a Z[t][u] polynomial at t = x, u = y."""
    ring = x.ring
    acc = ring.zero
    for inner in reversed(PP):
        acc = acc * y + evaluate_int_poly(inner, x)
    return acc


def _poly_text(coeff_strs, var: str) -> str:
    """Render a dense coefficient list (degree-ascending) as a polynomial."""
    parts = []
    for deg in range(len(coeff_strs) - 1, -1, -1):
        s = coeff_strs[deg]
        if s in ("0", "-0"):
            continue
        negative = s.startswith("-")
        body = s[1:] if negative else s
        if deg == 0:
            mono = body
        else:
            power = var if deg == 1 else f"{var}^{deg}"
            mono = power if body == "1" else f"{body}*{power}"
        if not parts:
            parts.append(("-" if negative else "") + mono)
        else:
            parts.append(("-" if negative else "+") + mono)
    return "".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# construction and parsing


def construct_ring(spec: str) -> Ring:
    """Build a ring from a specification string.

    Grammar: ``Q`` | ``Fp:<p>`` | ``cyclo:<m>`` | ``ratfun:<base-spec>``.
    """
    spec = spec.strip()
    if spec == "Q":
        return Rationals()
    if spec.startswith("Fp:"):
        body = spec[3:]
        if not re.fullmatch(r"[0-9]+", body):
            raise RingSpecError(f"bad prime field spec {spec!r}")
        return PrimeField(int(body))
    if spec.startswith("cyclo:"):
        body = spec[6:]
        if not re.fullmatch(r"[0-9]+", body):
            raise RingSpecError(f"bad cyclotomic spec {spec!r}")
        m = int(body)
        if m == 0:
            raise RingSpecError("cyclotomic modulus must be positive")
        return CyclotomicField(m)
    if spec.startswith("ratfun:"):
        return FractionField(construct_ring(spec[7:]))
    raise RingSpecError(f"unknown ring spec {spec!r}")


def invert(x: RingValue) -> Optional[RingValue]:
    """Multiplicative inverse, or None when x is not invertible."""
    return x.inverse()


_TOKEN = re.compile(r"\s*(?:([0-9]+)|([a-z][0-9]*)|(\^|\+|\-|\*|/|\(|\)))")


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ElementParseError(f"bad character at {text[pos:]!r}")
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, ring: Ring, tokens):
        self.ring = ring
        self.tokens = tokens
        self.pos = 0
        self.gens = ring.generators()

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self) -> RingValue:
        value = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RingValue:
        value = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError as exc:
                    raise ElementParseError(str(exc)) from None
        return value

    def factor(self) -> RingValue:
        kind, tok = self.peek()
        if (kind, tok) == ("op", "-"):
            self.take()
            return -self.factor()
        if (kind, tok) == ("op", "+"):
            self.take()
            return self.factor()
        value = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exponent = self.signed_int()
            try:
                value = value**exponent
            except ZeroDivisionError as exc:
                raise ElementParseError(str(exc)) from None
        return value

    def signed_int(self) -> int:
        sign = 1
        kind, tok = self.peek()
        if (kind, tok) in (("op", "-"), ("op", "+")):
            self.take()
            sign = -1 if tok == "-" else 1
            kind, tok = self.peek()
        if kind != "int":
            raise ElementParseError("exponent must be an integer")
        self.take()
        return sign * tok

    def atom(self) -> RingValue:
        kind, tok = self.take()
        if kind == "int":
            return self.ring.from_int(tok)
        if kind == "name":
            if tok not in self.gens:
                raise ElementParseError(f"unknown generator {tok!r} in {self.ring}")
            return self.gens[tok]
        if (kind, tok) == ("op", "("):
            value = self.expr()
            if self.take() != ("op", ")"):
                raise ElementParseError("unbalanced parentheses")
            return value
        raise ElementParseError(f"unexpected token {tok!r}")


def parse_element(ring: Ring, text: str) -> RingValue:
    """Parse an element expression in the ring's generators."""
    parser = _Parser(ring, _tokenize(text))
    if not parser.tokens:
        raise ElementParseError("empty expression")
    value = parser.expr()
    if parser.pos != len(parser.tokens):
        raise ElementParseError(f"trailing input in {text!r}")
    return value


# ---------------------------------------------------------------------------
# triples


@dataclass(frozen=True)
class Triple:
    """A coefficient ring together with the two loop parameters."""

    ring: Ring
    delta1: RingValue
    delta2: RingValue

    def __post_init__(self):
        if self.delta1.ring != self.ring or self.delta2.ring != self.ring:
            raise RingError("loop parameters must belong to the triple's ring")

    def swap(self) -> "Triple":
        """The mirror triple with the two loop parameters exchanged."""
        return Triple(self.ring, self.delta2, self.delta1)

    @staticmethod
    def parse(ring_spec: str, d1: str, d2: str) -> "Triple":
        ring = construct_ring(ring_spec)
        return Triple(ring, parse_element(ring, d1), parse_element(ring, d2))

    @staticmethod
    def balanced(ring: Ring, q: RingValue) -> "Triple":
        """The triple with both loop values q + q^-1."""
        qinv = q.inverse()
        if qinv is None:
            raise RingError("q must be invertible")
        delta = q + qinv
        return Triple(ring, delta, delta)

    def __repr__(self):
        return f"Triple({self.ring!r}, {self.delta1}, {self.delta2})"


def generic_tower() -> Triple:
    """The tower Q(t)(u) with independent loop parameters t and u."""
    ring = construct_ring("ratfun:ratfun:Q")
    gens = ring.generators()
    return Triple(ring, gens["t"], gens["u"])
