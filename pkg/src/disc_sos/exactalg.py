"""Exact scalars in the multiquadratic tower Q(i, sqrt(2), sqrt(3), ...).

Rational values are kept as ``int`` or ``fractions.Fraction`` wherever
possible; :class:`ExactScalar` is only used once an ``i`` or a square root
shows up.  The module level helpers (:func:`conj`, :func:`re`, :func:`im`,
:func:`sign`, :func:`canon`, ...) accept all three types so that polynomial
and matrix code never has to care which one it is holding.
"""
from __future__ import annotations

import re as _re
from fractions import Fraction
from math import gcd, isqrt

__all__ = [
    "ExactScalar",
    "I",
    "sqrt",
    "sqrt_rational",
    "canon",
    "as_exact",
    "conj",
    "re",
    "im",
    "is_real",
    "is_rational",
    "sign",
    "inv",
    "format_scalar",
    "parse_scalar",
]

Rational = (int, Fraction)


def _squarefree_split(m: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``m == s*s*r`` and ``r`` squarefree."""
    if m <= 0:
        raise ValueError(f"radicand must be positive, got {m}")
    s, r, p = 1, 1, 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        if m % p == 0:
            m //= p
            r *= p
        p += 1 if p == 2 else 2
    return s, r * m


def _prime_factors(m: int) -> list[int]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


class ExactScalar:
    """Element ``sum_m (a_m + b_m i) sqrt(m)`` over squarefree radicands ``m``.

    Immutable.  ``comps`` maps radicand to the pair ``(a_m, b_m)`` of
    Fractions; zero pairs are never stored.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, comps=None):
        items = {}
        if comps:
            for m, (a, b) in comps.items():
                a, b = Fraction(a), Fraction(b)
                if a or b:
                    items[m] = (a, b)
        self._items = tuple(sorted(items.items()))
        self._hash = None

    @classmethod
    def _raw(cls, items: dict) -> "ExactScalar":
        obj = cls.__new__(cls)
        obj._items = tuple(sorted((m, ab) for m, ab in items.items() if ab[0] or ab[1]))
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q) -> "ExactScalar":
        return cls._raw({1: (Fraction(q), Fraction(0))})

    @property
    def comps(self) -> dict:
        return dict(self._items)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self._items

    def is_rational(self) -> bool:
        return all(m == 1 and not b for m, (a, b) in self._items)

    def is_real(self) -> bool:
        return all(not b for _, (a, b) in self._items)

    def as_rational(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return _reduce_rational(self._items[0][1][0]) if self._items else 0

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._items)
        for m, (a, b) in other._items:
            if m in out:
                a0, b0 = out[m]
                out[m] = (a0 + a, b0 + b)
            else:
                out[m] = (a, b)
        return canon(ExactScalar._raw(out))

    __radd__ = __add__

    def __neg__(self):
        return canon(ExactScalar._raw({m: (-a, -b) for m, (a, b) in self._items}))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return 0
            return canon(ExactScalar._raw({m: (a * other, b * other) for m, (a, b) in self._items}))
        other = as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for m1, (a1, b1) in self._items:
            for m2, (a2, b2) in other._items:
                g = gcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                re_ = (a1 * a2 - b1 * b2) * g
                im_ = (a1 * b2 + b1 * a2) * g
                if m in out:
                    r0, i0 = out[m]
                    out[m] = (r0 + re_, i0 + im_)
                else:
                    out[m] = (re_, im_)
        return canon(ExactScalar._raw(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError("division of ExactScalar by zero")
            return self * (Fraction(1) / Fraction(other))
        other = as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return as_exact(self.inverse()) ** (-k)
        result, base = 1, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return canon(result)

    def flip(self, p: int) -> "ExactScalar":
        """Galois automorphism sqrt(p) -> -sqrt(p) for a prime ``p``."""
        return canon(ExactScalar._raw(
            {m: ((-a, -b) if m % p == 0 else (a, b)) for m, (a, b) in self._items}
        ))

    def conj(self):
        return canon(ExactScalar._raw({m: (a, -b) for m, (a, b) in self._items}))

    def re(self):
        return canon(ExactScalar._raw({m: (a, Fraction(0)) for m, (a, b) in self._items}))

    def im(self):
        return canon(ExactScalar._raw({m: (b, Fraction(0)) for m, (a, b) in self._items}))

    def inverse(self):
        if not self._items:
            raise ZeroDivisionError("inverse of zero in the multiquadratic tower")
        num = 1
        d = self
        # each step multiplies by a Galois conjugate; the product is fixed
        # by that automorphism, so the prime drops out of every radicand
        while isinstance(d, ExactScalar):
            primes = sorted({p for m, _ in d._items for p in _prime_factors(m)})
            c = d.flip(primes[-1]) if primes else d.conj()
            num = num * c
            d = d * c
        return canon(num * (Fraction(1) / d))

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self._items == other._items
        if isinstance(other, Rational):
            if not other:
                return not self._items
            return self._items == ((1, (Fraction(other), Fraction(0))),)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.as_rational()) if self.is_rational() else hash(self._items)
        return self._hash

    def __bool__(self):
        return bool(self._items)

    def __repr__(self):
        return f"ExactScalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


I = ExactScalar._raw({1: (Fraction(0), Fraction(1))})


def _reduce_rational(q):
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


def sqrt(m: int):
    """sqrt of an integer, with square factors pulled out; sqrt(-m) = i*sqrt(m)."""
    if m == 0:
        return 0
    s, r = _squarefree_split(abs(m))
    parts = (Fraction(s), Fraction(0)) if m > 0 else (Fraction(0), Fraction(s))
    return canon(ExactScalar._raw({r: parts}))


def sqrt_rational(q) -> "ExactScalar | int | Fraction":
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt_rational expects a non-negative rational")
    if q == 0:
        return 0
    s, r = _squarefree_split(q.numerator * q.denominator)
    return canon(ExactScalar._raw({r: (Fraction(s, q.denominator), Fraction(0))}))


def as_exact(x) -> ExactScalar:
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, Rational):
        return ExactScalar.rational(x)
    return NotImplemented


def canon(x):
    """Collapse to ``int``/``Fraction`` when the value is rational."""
    if isinstance(x, ExactScalar):
        return x.as_rational() if x.is_rational() else x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def is_rational(x) -> bool:
    return isinstance(x, Rational) or x.is_rational()


def is_real(x) -> bool:
    return isinstance(x, Rational) or x.is_real()


def conj(x):
    return x if isinstance(x, Rational) else x.conj()


def re(x):
    return x if isinstance(x, Rational) else x.re()


def im(x):
    return 0 if isinstance(x, Rational) else x.im()


def inv(x):
    if isinstance(x, Rational):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return canon(Fraction(1) / x)
    return x.inverse()


def sign(x) -> int:
    """Exact sign of a real element, by interval refinement of the radicals."""
    if isinstance(x, Rational):
        return (x > 0) - (x < 0)
    if not x.is_real():
        raise ValueError(f"sign() of non-real element {x}")
    items = [(m, a) for m, (a, _) in x._items]
    if not items:
        return 0
    if len(items) == 1:
        a = items[0][1]
        return (a > 0) - (a < 0)
    bits = 16
    while True:
        scale = 1 << bits
        lo = hi = Fraction(0)
        for m, a in items:
            if m == 1:
                lo += a
                hi += a
                continue
            r = isqrt(m * scale * scale)
            r_lo, r_hi = Fraction(r, scale), Fraction(r + 1, scale)
            if a > 0:
                lo += a * r_lo
                hi += a * r_hi
            else:
                lo += a * r_hi
                hi += a * r_lo
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


# -- text format ---------------------------------------------------------

def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical text: ``p/q``, ``p/q*sqrt(m)``, ``p/q*i``, joined by +/-.

    Unit coefficients in front of ``sqrt(m)`` or ``i`` are omitted.
    """
    if isinstance(x, Rational):
        return _fmt_q(Fraction(x))
    parts = []
    for m, (a, b) in x._items:
        for q, imag in ((a, False), (b, True)):
            if not q:
                continue
            factors = [] if abs(q) == 1 and (m != 1 or imag) else [_fmt_q(abs(q))]
            if m != 1:
                factors.append(f"sqrt({m})")
            if imag:
                factors.append("i")
            parts.append(("-" if q < 0 else "+", "*".join(factors)))
    if not parts:
        return "0"
    s0, b0 = parts[0]
    out = ("-" if s0 == "-" else "") + b0
    for s, b in parts[1:]:
        out += s + b
    return out


_FACTOR = _re.compile(r"^(?:(\d+)(?:/(\d+))?|sqrt\((\d+)\)|(i))$")


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar` (factor order within a term is free)."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty scalar")
    terms, start = [], 0
    for pos in range(1, len(s) + 1):
        if pos == len(s) or (s[pos] in "+-" and s[pos - 1] != "("):
            terms.append(s[start:pos])
            start = pos
    total = 0
    for term in terms:
        neg = term.startswith("-")
        body = term.lstrip("+-")
        if not body or len(term) - len(body) > 1:
            raise ValueError(f"cannot parse scalar {text!r}")
        value = -1 if neg else 1
        for factor in body.split("*"):
            fm = _FACTOR.match(factor)
            if not fm:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            if fm.group(1):
                value = value * Fraction(int(fm.group(1)), int(fm.group(2) or 1))
            elif fm.group(3):
                value = value * sqrt(int(fm.group(3)))
            else:
                value = value * I
        total = total + value
    return canon(total)
