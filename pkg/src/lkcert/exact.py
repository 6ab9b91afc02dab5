"""Exact scalars and univariate polynomials over the rationals.

Rationals are :class:`fractions.Fraction`, which is already kept in lowest
terms with a positive denominator after every operation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError

Rat = Fraction


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        # Fraction() also accepts decimals and exponents; keep the wire format strict.
        if any(c in text for c in ".eE_ "):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rat(q: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class UniPoly:
    """Immutable polynomial with rational coefficients, constant term first.

    The zero polynomial has no coefficients; otherwise the last one is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def constant(cls, c) -> UniPoly:
        return cls([c])

    @classmethod
    def x(cls) -> UniPoly:
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c=1) -> UniPoly:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def monic(self) -> UniPoly:
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly(c / lc for c in self.coeffs)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly([{', '.join(format_rat(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(format_rat(c) + ("*" + mono if mono else ""))
        return " + ".join(reversed(terms)).replace("+ -", "- ")

    def _coerce(self, other) -> UniPoly:
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([a[i] + (b[i] if i < len(b) else 0) for i in range(len(a))])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative polynomial power")
        result = UniPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: UniPoly):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.leading
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lc
            quot[i - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> UniPoly:
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def to_json(self) -> list[str]:
        return [format_rat(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> UniPoly:
        return cls(rat(c) for c in data)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(f: UniPoly) -> UniPoly:
    """Monic product of the distinct irreducible factors of ``f``."""
    if f.degree <= 0:
        return UniPoly([1]) if not f.is_zero() else f
    return (f // poly_gcd(f, f.derivative())).monic()


def x_pow_mod(e: int, modulus: UniPoly) -> UniPoly:
    """``x**e mod modulus`` by square-and-multiply."""
    result = UniPoly([1]) % modulus
    base = UniPoly.x() % modulus
    while e:
        if e & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        e >>= 1
    return result


def binom(p: int, q: int) -> Fraction:
    """C(p, q), zero outside ``0 <= q <= p``; negative ``p`` is rejected."""
    if p < 0:
        raise DomainError(f"binom: negative upper index {p}")
    if q < 0 or q > p:
        return Fraction(0)
    return Fraction(math.comb(p, q))


def inv_factorial(t: int) -> Fraction:
    """1/t!, with 1/t! = 0 for negative t."""
    if t < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(t))


@lru_cache(maxsize=None)
def binom_poly(i: int) -> UniPoly:
    """n(n-1)...(n-i+1)/i! as a polynomial in n."""
    if i < 0:
        raise DomainError("binom_poly needs i >= 0")
    p = UniPoly([1])
    for t in range(i):
        p = p * UniPoly([-t, 1])
    return p * Fraction(1, math.factorial(i))


def poly_interpolate(points: Sequence[tuple]) -> UniPoly:
    """Lagrange interpolation through ``points``; abscissae must be distinct."""
    pts = [(rat(x), rat(y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise DomainError("poly_interpolate: duplicate abscissa")
    result = UniPoly()
    for i, (xi, yi) in enumerate(pts):
        if yi == 0:
            continue
        basis = UniPoly([1])
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if j != i:
                basis = basis * UniPoly([-xj, 1])
                denom *= xi - xj
        result = result + basis * (yi / denom)
    return result


def totient(n: int) -> int:
    if n < 1:
        raise DomainError("totient needs n >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def orders_with_totient_le(d: int) -> frozenset[int]:
    """All n >= 1 with phi(n) <= d.

    phi(n) >= sqrt(n/2) bounds the search by n <= 2*d*d.
    """
    if d < 1:
        raise DomainError("orders_with_totient_le needs d >= 1")
    return frozenset(n for n in range(1, 2 * d * d + 1) if totient(n) <= d)


def cyclotomic_exponent(d: int) -> int:
    """lcm of every root-of-unity order an eigenvalue of a d x d rational matrix can have."""
    return math.lcm(*orders_with_totient_le(d))


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> UniPoly:
    """The n-th cyclotomic polynomial, via x^n - 1 = prod over d | n."""
    if n < 1:
        raise DomainError("cyclotomic_poly needs n >= 1")
    p = UniPoly.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            p = p // cyclotomic_poly(d)
    return p
