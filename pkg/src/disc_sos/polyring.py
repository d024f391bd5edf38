"""Sparse exact multivariate polynomials and Laurent characters.

A monomial over ``k`` variables is packed into one Python int made of
``k + 1`` 16-bit fields: total degree first, then the exponents in
:class:`VarSet` order.  Integer order on packed keys is therefore graded
lexicographic order, and multiplying monomials is integer addition.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial, lcm
from typing import Iterable, Mapping

from .exactalg import ExactScalar, canon, conj, format_scalar, im, parse_scalar, re

__all__ = ["VarSet", "Poly", "LaurentPoly", "NEG_INF", "bombieri", "monomials"]

_BITS = 16
_MASK = (1 << _BITS) - 1
MAX_DEGREE = _MASK

#: degree of the zero polynomial
NEG_INF = float("-inf")

_SCALARS = (int, Fraction, ExactScalar)


class VarSet:
    """Ordered tuple of distinct variable names; fixes the monomial order."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.index = {v: k for k, v in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarSet({list(self.names)})"

    def __getitem__(self, name: str) -> "Poly":
        return Poly.var(self, name)

    def gens(self) -> list["Poly"]:
        return [Poly.var(self, v) for v in self.names]

    def pack(self, exps) -> int:
        key = sum(exps)
        for e in exps:
            key = (key << _BITS) | e
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        k = len(self.names)
        return tuple((key >> (_BITS * (k - 1 - j))) & _MASK for j in range(k))

    def degree_of(self, key: int) -> int:
        return key >> (_BITS * len(self.names))


def _is_rational_terms(terms) -> bool:
    for c in terms.values():
        if type(c) is not int and type(c) is not Fraction:
            return False
    return True


def _integerize(terms):
    """Return ``(int_terms, D)`` with ``terms == int_terms / D``."""
    den = 1
    for c in terms.values():
        if type(c) is Fraction:
            den = lcm(den, c.denominator)
    if den == 1:
        return terms, 1
    return {k: (c * den if type(c) is int else c.numerator * (den // c.denominator))
            for k, c in terms.items()}, den


def _divide_terms(terms, den):
    if den == 1:
        return {k: c for k, c in terms.items() if c}
    return {k: canon(Fraction(c, den)) for k, c in terms.items() if c}


def _mul_terms(t1, t2):
    if len(t1) > len(t2):
        t1, t2 = t2, t1
    if _is_rational_terms(t1) and _is_rational_terms(t2):
        a, da = _integerize(t1)
        b, db = _integerize(t2)
        out: dict = {}
        get = out.get
        items_b = list(b.items())
        for k1, c1 in a.items():
            for k2, c2 in items_b:
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
        return _divide_terms(out, da * db)
    out = {}
    get = out.get
    for k1, c1 in t1.items():
        for k2, c2 in t2.items():
            k = k1 + k2
            out[k] = get(k, 0) + c1 * c2
    return {k: canon(c) for k, c in out.items() if c != 0}


def _square_terms(t):
    items = list(t.items())
    if _is_rational_terms(t):
        a, da = _integerize(t)
        items = list(a.items())
        den = da * da
    else:
        den = None
    out: dict = {}
    get = out.get
    for i, (k1, c1) in enumerate(items):
        k = k1 + k1
        out[k] = get(k, 0) + c1 * c1
        c2x = 2 * c1
        for k2, c2 in items[i + 1:]:
            k = k1 + k2
            out[k] = get(k, 0) + c2x * c2
    if den is not None:
        return _divide_terms(out, den)
    return {k: canon(c) for k, c in out.items() if c != 0}


class Poly:
    """Sparse polynomial with exact coefficients over a fixed :class:`VarSet`."""

    __slots__ = ("vs", "terms")

    def __init__(self, vs: VarSet, terms: Mapping | None = None):
        self.vs = vs
        packed = {}
        for mono, c in (terms or {}).items():
            if isinstance(mono, Mapping):
                exps = [0] * len(vs)
                for v, e in mono.items():
                    exps[vs.index[v]] += e
                mono = exps
            if len(mono) != len(vs) or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for {vs}")
            if sum(mono) > MAX_DEGREE:
                raise OverflowError("degree exceeds packed monomial range")
            key = vs.pack(mono)
            c = canon(packed.get(key, 0) + c)
            if c != 0:
                packed[key] = c
            else:
                packed.pop(key, None)
        self.terms = packed

    @classmethod
    def _make(cls, vs: VarSet, packed: dict) -> "Poly":
        p = cls.__new__(cls)
        p.vs = vs
        p.terms = packed
        return p

    @classmethod
    def const(cls, vs: VarSet, c) -> "Poly":
        c = canon(c)
        return cls._make(vs, {0: c} if c != 0 else {})

    @classmethod
    def zero(cls, vs: VarSet) -> "Poly":
        return cls._make(vs, {})

    @classmethod
    def var(cls, vs: VarSet, name: str) -> "Poly":
        exps = [0] * len(vs)
        exps[vs.index[name]] = 1
        return cls._make(vs, {vs.pack(exps): 1})

    # -- inspection -----------------------------------------------------
    def items(self):
        """``(exponent tuple, coeff)`` pairs, leading (grlex largest) first."""
        for key in sorted(self.terms, reverse=True):
            yield self.vs.unpack(key), self.terms[key]

    def coeff(self, mono) -> object:
        if isinstance(mono, Mapping):
            exps = [0] * len(self.vs)
            for v, e in mono.items():
                exps[self.vs.index[v]] = e
            mono = exps
        return self.terms.get(self.vs.pack(mono), 0)

    def coeffs(self) -> list:
        return list(self.terms.values())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        if not self.terms:
            return NEG_INF
        return self.vs.degree_of(max(self.terms))

    def min_degree(self):
        if not self.terms:
            return NEG_INF
        return self.vs.degree_of(min(self.terms))

    def is_homogeneous(self) -> bool:
        return not self.terms or self.degree() == self.min_degree()

    def leading(self):
        key = max(self.terms)
        return self.vs.unpack(key), self.terms[key]

    def is_rational(self) -> bool:
        return _is_rational_terms(self.terms)

    def is_real(self) -> bool:
        return all(not isinstance(c, ExactScalar) or c.is_real() for c in self.terms.values())

    def variables(self) -> set[str]:
        used = set()
        for key in self.terms:
            for name, e in zip(self.vs.names, self.vs.unpack(key)):
                if e:
                    used.add(name)
        return used

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vs != self.vs:
                raise ValueError(f"varset mismatch: {self.vs} vs {other.vs}")
            return other
        if isinstance(other, _SCALARS):
            return Poly.const(self.vs, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v != 0:
                out[k] = canon(v)
            else:
                out.pop(k, None)
        return Poly._make(self.vs, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._make(self.vs, {k: -c for k, c in self.terms.items()})

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

    def scale(self, c) -> "Poly":
        c = canon(c)
        if c == 0:
            return Poly.zero(self.vs)
        return Poly._make(self.vs, {k: canon(v * c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.degree() + other.degree() > MAX_DEGREE:
            raise OverflowError("degree exceeds packed monomial range")
        if other is self:
            return Poly._make(self.vs, _square_terms(self.terms))
        return Poly._make(self.vs, _mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, ExactScalar):
            return self.scale(other.inverse())
        return NotImplemented

    def square(self) -> "Poly":
        return Poly._make(self.vs, _square_terms(self.terms))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly.const(self.vs, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base.square()
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vs == other.vs and self.terms == other.terms
        if isinstance(other, _SCALARS):
            return self.terms == ({0: canon(other)} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.vs, frozenset(self.terms.items())))

    # -- coefficient maps -----------------------------------------------
    def map_coeffs(self, fn) -> "Poly":
        out = {}
        for k, c in self.terms.items():
            v = canon(fn(c))
            if v != 0:
                out[k] = v
        return Poly._make(self.vs, out)

    def conj(self) -> "Poly":
        return self.map_coeffs(conj)

    def re(self) -> "Poly":
        return self.map_coeffs(re)

    def im(self) -> "Poly":
        return self.map_coeffs(im)

    # -- calculus / composition -----------------------------------------
    def diff(self, name: str) -> "Poly":
        j = self.vs.index[name]
        shift = _BITS * (len(self.vs) - 1 - j)
        unit = (1 << (_BITS * len(self.vs))) | (1 << shift)
        out = {}
        for k, c in self.terms.items():
            e = (k >> shift) & _MASK
            if e:
                out[k - unit] = canon(c * e)
        return Poly._make(self.vs, out)

    def substitute(self, bindings: Mapping[str, object], target: VarSet | None = None) -> "Poly":
        """Compose with ``var -> bindings[var]`` (Polys over ``target`` or scalars)."""
        if target is None:
            target = next((b.vs for b in bindings.values() if isinstance(b, Poly)), self.vs)
        images = []
        for name in self.vs.names:
            if name in bindings:
                b = bindings[name]
                images.append(b if isinstance(b, Poly) else Poly.const(target, b))
            elif name in target.index:
                images.append(Poly.var(target, name))
            else:
                images.append(None)
        exps_terms = [(self.vs.unpack(k), c) for k, c in self.terms.items()]
        for exps, _ in exps_terms:
            for name, e, img in zip(self.vs.names, exps, images):
                if e and img is None:
                    raise KeyError(f"no binding for variable {name!r}")
        powers: list[dict[int, Poly]] = [{} for _ in images]

        def power(j, e):
            cache = powers[j]
            if e not in cache:
                cache[e] = images[j] if e == 1 else power(j, e - 1) * images[j]
            return cache[e]

        def rec(j, group):
            # group: list of (exps, coeff); Horner-style split on variable j
            if j == len(images):
                total = 0
                for _, c in group:
                    total = total + c
                return Poly.const(target, total)
            buckets: dict[int, list] = {}
            for exps, c in group:
                buckets.setdefault(exps[j], []).append((exps, c))
            out = Poly.zero(target)
            for e, sub in buckets.items():
                part = rec(j + 1, sub)
                out = out + (part if e == 0 else part * power(j, e))
            return out

        if not exps_terms:
            return Poly.zero(target)
        return rec(0, exps_terms)

    def eval(self, point: Mapping[str, object]):
        values = []
        for name in self.vs.names:
            values.append(point.get(name))
        total = 0
        pows: list[dict[int, object]] = [{0: 1} for _ in values]
        for k, c in self.terms.items():
            term = c
            for j, e in enumerate(self.vs.unpack(k)):
                if e:
                    if values[j] is None:
                        raise KeyError(f"point misses variable {self.vs.names[j]!r}")
                    cache = pows[j]
                    if e not in cache:
                        cache[e] = values[j] ** e
                    term = term * cache[e]
            total = total + term
        return canon(total)

    def to_varset(self, vs: VarSet) -> "Poly":
        """Re-express over another VarSet containing all used variables."""
        out = {}
        for exps, c in self.items():
            full = [0] * len(vs)
            for name, e in zip(self.vs.names, exps):
                if e:
                    full[vs.index[name]] = e
            out[vs.pack(full)] = c
        return Poly._make(vs, out)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._make(self.vs, {k: c for k, c in self.terms.items() if self.vs.degree_of(k) == d})

    # -- text / json ------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for exps, c in self.items():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.vs.names, exps) if e
            )
            cs = format_scalar(c)
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = f"({cs})"
            if mono:
                if cs == "1":
                    cs = ""
                elif cs == "-1":
                    cs = "-"
                else:
                    cs += "*"
            chunks.append(cs + mono)
        out = chunks[0]
        for ch in chunks[1:]:
            out += (" - " + ch[1:]) if ch.startswith("-") else (" + " + ch)
        return out

    def __repr__(self):
        return f"Poly({self})"

    def to_json(self) -> dict:
        terms = []
        for exps, c in self.items():
            mono = {name: e for name, e in zip(self.vs.names, exps) if e}
            terms.append({"coeff": format_scalar(c), "mono": mono})
        return {"vars": list(self.vs.names), "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        vs = VarSet(data["vars"])
        unknown = {v for t in data["terms"] for v in t["mono"]} - set(vs.names)
        if unknown:
            raise ValueError(f"monomials use undeclared variables {sorted(unknown)}")
        return cls(vs, {tuple(_mono_tuple(vs, t["mono"])): parse_scalar(t["coeff"]) for t in data["terms"]})


def _mono_tuple(vs, mono):
    exps = [0] * len(vs)
    for v, e in mono.items():
        exps[vs.index[v]] = int(e)
    return exps


def monomials(vs: VarSet, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree ``d``, grlex-descending."""
    k = len(vs)
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, slots - 1)

    if k == 0:
        return [()] if d == 0 else []
    rec([], d, k)
    return out


def bombieri(p: Poly, q: Poly, metric=None):
    """Apolar pairing <p, q> with <x^a, x^a> = a! / (d! * metric^a).

    ``metric`` lists positive weights ``w_k`` such that the quadratic form
    ``sum w_k x_k^2`` is the one the pairing should be invariant for; the
    default (all ones) gives the classical Bombieri form.
    """
    if p.vs != q.vs:
        raise ValueError("bombieri: varset mismatch")
    if not p.terms or not q.terms:
        return 0
    if not (p.is_homogeneous() and q.is_homogeneous()):
        raise ValueError("bombieri needs homogeneous forms")
    d = p.degree()
    if q.degree() != d:
        raise ValueError(f"bombieri: degrees differ ({d} vs {q.degree()})")
    dfact = factorial(d)
    total = 0
    small, big = (p, q) if len(p.terms) <= len(q.terms) else (q, p)
    for key, c in small.terms.items():
        c2 = big.terms.get(key)
        if c2 is None:
            continue
        weight = Fraction(1, dfact)
        for j, e in enumerate(p.vs.unpack(key)):
            if e:
                weight *= factorial(e)
                if metric is not None:
                    weight /= Fraction(metric[j]) ** e
        total = total + c * c2 * weight
    return canon(total)


class LaurentPoly:
    """Integer combination of torus weights, written t^w = t1^w1 * ... * tl^wl."""

    __slots__ = ("terms", "rank")

    def __init__(self, terms: Mapping[tuple, int] | None = None, rank: int | None = None):
        clean = {tuple(w): int(m) for w, m in (terms or {}).items() if m}
        if rank is None:
            rank = len(next(iter(clean))) if clean else 1
        if any(len(w) != rank for w in clean):
            raise ValueError("weights of mixed length")
        self.terms = clean
        self.rank = rank

    @classmethod
    def from_weights(cls, weights: Iterable[tuple], rank: int) -> "LaurentPoly":
        out: dict = {}
        for w in weights:
            w = tuple(w)
            out[w] = out.get(w, 0) + 1
        return cls(out, rank)

    def __add__(self, other):
        out = dict(self.terms)
        for w, m in other.terms.items():
            out[w] = out.get(w, 0) + m
        return LaurentPoly(out, self.rank)

    def __neg__(self):
        return LaurentPoly({w: -m for w, m in self.terms.items()}, self.rank)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({w: m * other for w, m in self.terms.items()}, self.rank)
        out: dict = {}
        for w1, m1 in self.terms.items():
            for w2, m2 in other.terms.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                out[w] = out.get(w, 0) + m1 * m2
        return LaurentPoly(out, self.rank)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, w) -> int:
        return self.terms.get(tuple(w), 0)

    def dimension(self) -> int:
        return sum(self.terms.values())

    def dual(self) -> "LaurentPoly":
        return LaurentPoly({tuple(-a for a in w): m for w, m in self.terms.items()}, self.rank)

    def weights(self) -> list[tuple]:
        return sorted(self.terms, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        names = ["t"] if self.rank == 1 else [f"t{j + 1}" for j in range(self.rank)]
        out = ""
        for w in self.weights():
            m = self.terms[w]
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, w) if e)
            if not mono:
                body = str(abs(m))
            else:
                body = ("" if abs(m) == 1 else str(abs(m))) + mono
            sign = "-" if m < 0 else "+"
            out += body if not out and m > 0 else sign + body
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"
