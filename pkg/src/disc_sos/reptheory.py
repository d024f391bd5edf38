"""Torus weights, root operators and characters for SO_n in the J-model.

Polynomials live in the J-coordinates x_ij of :class:`~disc_sos.symspace.JSpace`.
A Lie algebra element A acts on a coordinate function by
x_ij -> (XA - AX)_ij, on polynomials as a derivation and on wedges of
coordinate functions by the Leibniz rule.
"""
from __future__ import annotations

import random
import warnings
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from .exactalg import canon
from .linalg import Echelon, nullspace
from .polyring import LaurentPoly, Poly, monomials
from .symspace import j_space, random_degenerate, sym_space, unit
from .equivariant import normalize_wedge

__all__ = [
    "LieOperator",
    "basis_weight",
    "var_weight",
    "weight_of",
    "wedge_weight",
    "cartan",
    "raising",
    "lowering",
    "act",
    "act_wedge",
    "PolySpace",
    "WedgeSpace",
    "weight_space",
    "highest_weight_vectors",
    "character",
    "irr_character",
    "irr_dimension",
    "decompose",
    "DecompositionError",
    "dim_spherical",
    "lowering_orbit",
    "ChainError",
    "module_span",
    "vanishing_forms",
    "mult_kernel_S2",
    "s2_element",
    "span_rank",
    "same_span",
    "real_form",
]


class DecompositionError(ArithmeticError):
    pass


class ChainError(ArithmeticError):
    pass


# -- weights -------------------------------------------------------------

def basis_weight(n: int, k: int) -> tuple:
    """Torus weight of the standard basis vector e_k (1-based)."""
    l = n // 2
    w = [0] * l
    if k <= l:
        w[k - 1] = 1
    elif k <= 2 * l:
        w[k - l - 1] = -1
    return tuple(w)


def var_weight(n: int, i: int, j: int) -> tuple:
    """Weight of the coordinate function x_ij: wt(e_j) - wt(e_i)."""
    return tuple(b - a for a, b in zip(basis_weight(n, i), basis_weight(n, j)))


@lru_cache(maxsize=None)
def _var_weights(n: int) -> tuple:
    return tuple(var_weight(n, i, j) for i, j in j_space(n).pairs)


def weight_of(p, n: int | None = None) -> tuple:
    """Weight of a monomial (exponent tuple) or of a weight-vector Poly."""
    if isinstance(p, Poly):
        n = n or _n_of(p)
        ws = {_mono_weight(n, e) for e, _ in p.items()}
        if len(ws) != 1:
            raise ValueError("polynomial is not a weight vector")
        return ws.pop()
    return _mono_weight(n, p)


def _mono_weight(n: int, exps) -> tuple:
    vw = _var_weights(n)
    l = n // 2
    return tuple(sum(e * w[k] for e, w in zip(exps, vw)) for k in range(l))


def wedge_weight(n: int, key) -> tuple:
    vw = _var_weights(n)
    return tuple(sum(vw[s][k] for s in key) for k in range(n // 2))


def _n_of(p: Poly) -> int:
    names = set(p.vs.names)
    for n in range(2, 12):
        if names == set(j_space(n).vs.names):
            return n
    raise ValueError("polynomial is not in J-coordinates")


# -- operators -------------------------------------------------------------

class LieOperator:
    """An element of so_n(C, J) given by its n x n matrix."""

    def __init__(self, name: str, matrix):
        self.name = name
        self.matrix = matrix
        self.n = matrix.shape[0]

    def __repr__(self):
        return f"LieOperator({self.name})"

    @property
    def images(self) -> dict:
        """x_ij -> (XA - AX)_ij as linear forms in J-coordinates."""
        if not hasattr(self, "_images"):
            Js = j_space(self.n)
            X = Js.generic
            C = X.dot(self.matrix) - self.matrix.dot(X)
            self._images = {nm: C[i - 1, j - 1] for nm, (i, j) in Js.position.items()}
        return self._images


def cartan(n: int) -> list[LieOperator]:
    l = n // 2
    return [LieOperator(f"H{i}", unit(n, i, i) - unit(n, i + l, i + l)) for i in range(1, l + 1)]


def _root_vectors(n: int) -> list[tuple[str, object]]:
    """Simple root vectors of so_n(C, J)."""
    l = n // 2
    out = []
    for i in range(1, l):
        out.append(unit(n, i, i + 1) - unit(n, i + 1 + l, i + l))
    if n % 2:
        if l >= 1:
            out.append(unit(n, l, n) - unit(n, n, 2 * l))
    elif l >= 2:
        out.append(unit(n, l - 1, 2 * l) - unit(n, l, 2 * l - 1))
    return out


def raising(n: int) -> list[LieOperator]:
    """E_1, ..., E_l (e.g. E13 - E32 for n = 3; E12 - E43, E14 - E23 for n = 4)."""
    ops = _root_vectors(n)
    if len(ops) == 1:
        return [LieOperator("E", ops[0])]
    return [LieOperator(f"E{k}", M) for k, M in enumerate(ops, start=1)]


def lowering(n: int) -> list[LieOperator]:
    """Transposes of the raising operators (F = E31 - E23 for n = 3)."""
    ops = _root_vectors(n)
    if len(ops) == 1:
        return [LieOperator("F", ops[0].T.copy())]
    return [LieOperator(f"F{k}", M.T.copy()) for k, M in enumerate(ops, start=1)]


def act(op: LieOperator, f: Poly) -> Poly:
    """Derivation extension of op to polynomials in J-coordinates."""
    out = Poly.zero(f.vs)
    for nm in f.variables():
        img = op.images[nm]
        if img:
            out = out + f.diff(nm) * img
    return out


def act_wedge(op: LieOperator, xi: dict) -> dict:
    """Leibniz extension of op to wedges of coordinate functions."""
    Js = j_space(op.n)
    names = Js.vs.names
    lin = {}
    for k, nm in enumerate(names):
        img = op.images[nm]
        lin[k] = {Js.vs.index[v]: c for v, c in _linear_coeffs(img).items()}
    out: dict = {}
    for key, c in xi.items():
        for pos, s in enumerate(key):
            for t, a in lin[s].items():
                new = list(key)
                new[pos] = t
                nk, sgn = normalize_wedge(new)
                if sgn:
                    out[nk] = canon(out.get(nk, 0) + sgn * a * c)
    return {k: v for k, v in out.items() if v != 0}


def _linear_coeffs(p: Poly) -> dict:
    out = {}
    for exps, c in p.items():
        if sum(exps) != 1:
            raise ValueError("expected a linear form")
        out[p.vs.names[exps.index(1)]] = c
    return out


# -- graded spaces -----------------------------------------------------------

class PolySpace:
    """Degree-d forms in the J-coordinates; the basis is the monomials."""

    def __init__(self, n: int, d: int):
        self.n, self.d = n, d
        self.vs = j_space(n).vs
        self.basis = monomials(self.vs, d)

    def weight(self, b) -> tuple:
        return _mono_weight(self.n, b)

    def element(self, b) -> Poly:
        return Poly(self.vs, {b: 1})

    def act(self, op, v):
        return act(op, v)

    def vector(self, v: Poly) -> dict:
        return {self.vs.pack(e): c for e, c in v.items()}

    def combine(self, coeffs: dict) -> Poly:
        return Poly(self.vs, {b: c for b, c in coeffs.items()})

    def __len__(self):
        return len(self.basis)


class WedgeSpace:
    """k-th exterior power of the J-coordinate functions (wedge functionals)."""

    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        self.dim_ground = j_space(n).dim
        self.basis = list(combinations(range(self.dim_ground), k))

    def weight(self, b) -> tuple:
        return wedge_weight(self.n, b)

    def element(self, b) -> dict:
        return {b: 1}

    def act(self, op, v):
        return act_wedge(op, v)

    def vector(self, v: dict) -> dict:
        return dict(v)

    def combine(self, coeffs: dict) -> dict:
        return {b: canon(c) for b, c in coeffs.items() if c != 0}

    def __len__(self):
        return len(self.basis)


def weight_space(space, w) -> list:
    w = tuple(w) if not isinstance(w, int) else (w,)
    return [b for b in space.basis if space.weight(b) == w]


def highest_weight_vectors(space, w) -> list:
    """Basis of the vectors of weight w killed by every raising operator."""
    basis = weight_space(space, w)
    if not basis:
        return []
    ops = raising(space.n)
    rows: dict = {}
    for col, b in enumerate(basis):
        v = space.element(b)
        for k, op in enumerate(ops):
            for key, c in space.vector(space.act(op, v)).items():
                rows.setdefault((k, key), [0] * len(basis))[col] = c
    kernel = nullspace(list(rows.values()), len(basis)) if rows else nullspace([], len(basis))
    out = []
    for vec in kernel:
        v = space.combine({b: c for b, c in zip(basis, vec) if c != 0})
        for op in ops:
            if space.vector(space.act(op, v)):
                raise AssertionError("solver returned a vector not killed by the raising operators")
        out.append(v)
    return out


# -- characters ---------------------------------------------------------------

def character(space) -> LaurentPoly:
    return LaurentPoly.from_weights([space.weight(b) for b in space.basis], space.n // 2)


def irr_character(lam, n: int) -> LaurentPoly:
    lam = tuple(lam) if not isinstance(lam, int) else (lam,)
    if n == 3:
        (d,) = lam
        if d < 0:
            raise ValueError("highest weight must be dominant")
        return LaurentPoly({(j,): 1 for j in range(-d, d + 1)}, 1)
    if n == 4:
        lam = lam + (0,) * (2 - len(lam))
        l1, l2 = lam
        if l1 < abs(l2):
            raise ValueError("highest weight must be dominant")
        a, b = l1 + l2, l1 - l2
        terms: dict = {}
        for i in range(a + 1):
            for j in range(b + 1):
                w = ((a - 2 * i + b - 2 * j) // 2, (a - 2 * i - b + 2 * j) // 2)
                terms[w] = terms.get(w, 0) + 1
        chi = LaurentPoly(terms, 2)
        expected = (l1 + 1) ** 2 - l2 ** 2
        if chi.dimension() != expected:
            raise AssertionError(f"character of {lam} has dimension {chi.dimension()}, expected {expected}")
        return chi
    raise NotImplementedError("irreducible characters are implemented for n = 3, 4 only")


def irr_dimension(lam, n: int) -> int:
    return irr_character(lam, n).dimension()


def _dominant(w) -> bool:
    if len(w) == 1:
        return w[0] >= 0
    return w[0] >= abs(w[1])


def decompose(chi: LaurentPoly, n: int) -> list[tuple]:
    """Greedy decomposition into irreducibles, largest weight first."""
    if n not in (3, 4):
        raise NotImplementedError("decomposition is implemented for n = 3, 4 only")
    rest = chi
    out = []
    while rest:
        top = max(rest.terms)
        mult = rest.terms[top]
        if mult < 0 or not _dominant(top):
            raise DecompositionError(f"remainder {rest} does not decompose (top weight {top})")
        out.extend([top] * mult)
        irr = irr_character(top, n)
        for _ in range(mult):
            rest = rest - irr
    return out


def dim_spherical(n: int) -> int:
    """Dimension of the degree-n spherical harmonics in n variables."""
    return comb(2 * n - 1, n - 1) - comb(2 * n - 3, n - 1)


# -- lowering chains -----------------------------------------------------------

def lowering_orbit(v: Poly, n: int = 3) -> dict:
    """The basis y_k (k = d..-d) of the sl_2-module generated by a highest
    weight vector v of weight d, normalized so that E(y_k) = y_{k+1}.
    """
    if n != 3:
        raise NotImplementedError("lowering chains are implemented for n = 3")
    (E,), (F,) = raising(3), lowering(3)
    if act(E, v):
        raise ChainError("input is not annihilated by E")
    (d,) = weight_of(v, 3)
    ys = {d: v}
    c = 0
    for k in range(d, -d, -1):
        c += k
        ys[k - 1] = act(F, ys[k]) * Fraction(1, c)
    if act(F, ys[-d]):
        raise ChainError(f"F(y_{-d}) is not zero")
    for k in range(-d, d):
        if act(E, ys[k]) != ys[k + 1]:
            raise ChainError(f"E(y_{k}) != y_{k + 1}")
    return ys


def module_span(generators, ops, space_kind: str = "poly", limit: int = 10_000) -> list:
    """Closure of the span of ``generators`` under the operators ``ops``."""
    ech = Echelon(track=False)
    basis = []
    queue = list(generators)

    def vec(x):
        if space_kind == "poly":
            return dict(x.terms)
        # Echelon wants integer keys: encode a subset as a bit mask
        return {sum(1 << s for s in key): c for key, c in x.items()}

    while queue:
        x = queue.pop(0)
        if not vec(x) or not ech.add(vec(x)):
            continue
        basis.append(x)
        if len(basis) > limit:
            raise RuntimeError("module span exceeds the size limit")
        for op in ops:
            queue.append(act(op, x) if space_kind == "poly" else act_wedge(op, x))
    return basis


# -- vanishing ideal, multiplication kernel, real forms ------------------------

def vanishing_forms(n: int, degree: int, samples: int | None = None, seed: int = 0) -> list[Poly]:
    """Basis of the degree-d forms on N vanishing at random degenerate matrices."""
    S = sym_space(n)
    monos = monomials(S.vs, degree)
    if samples is None:
        samples = len(monos) + 10
    if samples < len(monos):
        warnings.warn(
            f"{samples} samples for {len(monos)} unknowns: the result is only an upper bound",
            stacklevel=2,
        )
    rng = random.Random(seed)
    rows = []
    for _ in range(samples):
        pt = [canon(x) for x in S.coords(random_degenerate(n, rng)).values()]
        row = []
        for m in monos:
            val = 1
            for x, e in zip(pt, m):
                if e:
                    val = val * x ** e
            row.append(canon(val))
        rows.append(row)
    kernel = nullspace(rows, len(monos))
    return [Poly(S.vs, {m: c for m, c in zip(monos, v) if c != 0}) for v in kernel]


def span_rank(polys) -> int:
    ech = Echelon(track=False)
    return sum(1 for p in polys if p.terms and ech.add(dict(p.terms)))


def same_span(ps, qs) -> bool:
    r = span_rank(ps)
    return r == span_rank(qs) == span_rank(list(ps) + list(qs))


def mult_kernel_S2(basis: list[Poly]) -> tuple[int, list[dict]]:
    """Kernel of the multiplication map from S^2(span basis) to polynomials.

    Kernel vectors are dicts {(i, j): coeff} with i <= j over the products
    basis[i] * basis[j].
    """
    pairs = [(i, j) for i in range(len(basis)) for j in range(i, len(basis))]
    ech = Echelon(track=True)
    for tag, (i, j) in enumerate(pairs):
        prod_ = basis[i] * basis[j]
        ech.add(dict(prod_.terms), tag)
    kernel = [{pairs[t]: c for t, c in rel.items()} for rel in ech.relations]
    return len(kernel), kernel


def s2_element(terms: dict, basis: list[Poly]) -> Poly:
    """Image of sum c_ij y_i y_j under multiplication."""
    out = Poly.zero(basis[0].vs)
    for (i, j), c in terms.items():
        out = out + basis[i] * basis[j] * c
    return out


def real_form(polys: list[Poly]) -> list[Poly]:
    """Real basis of the real points of a conjugation-stable span."""
    ech = Echelon(track=False)
    out = []
    for p in polys:
        for part in (p.re(), p.im()):
            if part.terms and ech.add(dict(part.terms)):
                out.append(part)
    return out
