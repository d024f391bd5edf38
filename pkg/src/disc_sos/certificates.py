"""Weighted sum-of-squares certificates for the discriminant.

A certificate is a list of pairs (w_i, f_i) and a constant c with
sum w_i f_i^2 = c * delta_n.  Weights and c are positive real scalars, so
every pair is one real square (sqrt(w_i) f_i)^2 and the term count bounds
the minimal number of squares.
"""
from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .equivariant import tstar, wedge
from .exactalg import canon, format_scalar, inv, is_real, parse_scalar, sign, sqrt
from .linalg import inverse, ldlt, rank, rank_fraction_free
from .polyring import Poly, bombieri
from .reptheory import (
    act,
    act_wedge,
    lowering,
    lowering_orbit,
    module_span,
    raising,
    real_form,
    span_rank,
)
from .symspace import (
    discriminant,
    disc_matrix,
    j_space,
    mat,
    sigma,
    sym_space,
    trace_coords,
)

__all__ = [
    "Certificate",
    "VerifyReport",
    "PipelineError",
    "verify",
    "quick_reject",
    "specialize",
    "builtin",
    "BUILTIN_NAMES",
    "generate_n3_five",
    "generate_from_module",
    "generate_from_span",
    "generate_n4_seven",
    "invariant_gram",
    "normalize_term",
    "rank_matrix",
    "rank_exact",
    "resolve_threads",
]

BUILTIN_NAMES = (
    "two-by-two",
    "domokos3-five",
    "kummer3-seven",
    "lax3-six-offdiag",
    "domokos3-four-offdiag",
)


class PipelineError(RuntimeError):
    """A generation step failed; ``step`` names it and ``data`` holds diagnostics."""

    def __init__(self, step: str, message: str, **data):
        super().__init__(f"{step}: {message}")
        self.step = step
        self.data = data


@dataclass
class Certificate:
    n: int
    terms: list  # [(weight, Poly)]
    constant: object = 1
    provenance: str = ""
    specialize: dict | None = None
    info: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def term_count(self) -> int:
        return len(self.terms)

    @property
    def vs(self):
        return sym_space(self.n).vs

    def target(self) -> Poly:
        """c * delta_n, restricted by the specialization if there is one."""
        d = discriminant(self.n)
        if self.specialize:
            d = d.substitute(dict(self.specialize), d.vs)
        return d * self.constant

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "constant": format_scalar(canon(self.constant)),
            "terms": [{"weight": format_scalar(canon(w)), "poly": f.to_json()} for w, f in self.terms],
            "provenance": self.provenance,
        }
        if self.specialize:
            out["specialize"] = {k: format_scalar(canon(v)) for k, v in self.specialize.items()}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        n = int(data["n"])
        vs = sym_space(n).vs
        terms = []
        for t in data["terms"]:
            p = Poly.from_json(t["poly"])
            if p.vs != vs:
                p = p.to_varset(vs)
            terms.append((parse_scalar(t["weight"]), p))
        spec = data.get("specialize")
        if spec:
            spec = {k: parse_scalar(v) for k, v in spec.items()}
        return cls(
            n=n,
            terms=terms,
            constant=parse_scalar(data.get("constant", "1")),
            provenance=data.get("provenance", ""),
            specialize=spec or None,
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


@dataclass
class VerifyReport:
    valid: bool
    difference: Poly | None
    problems: list = field(default_factory=list)
    term_count: int = 0
    constant: object = 1

    def summary(self) -> str:
        if self.valid:
            return f"valid, c={format_scalar(canon(self.constant))}, {self.term_count} terms"
        return "invalid: " + "; ".join(self.problems)


# -- verification ------------------------------------------------------------

def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("DISC_SOS_THREADS", "1") or 1)
    return max(1, int(threads))


def _weighted_square(term):
    w, f = term
    return f.square() * w


def weighted_sum(terms, threads: int | None = None) -> Poly | None:
    """sum w_i f_i^2, optionally squaring in worker processes.

    Partial results are added in input order, so the output does not
    depend on the number of workers.
    """
    threads = resolve_threads(threads)
    if threads > 1 and len(terms) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_weighted_square, terms))
    else:
        parts = [_weighted_square(t) for t in terms]
    total = None
    for p in parts:
        total = p if total is None else total + p
    return total


def verify(cert: Certificate, threads: int | None = None) -> VerifyReport:
    """Exact check of sum w_i f_i^2 = c * delta_n plus sign and degree checks."""
    problems = []
    deg = cert.n * (cert.n - 1) // 2
    vs = cert.vs
    for k, (w, f) in enumerate(cert.terms):
        if not is_real(w) or sign(w) <= 0:
            problems.append(f"weight {k} is not a positive real number")
        if f.vs != vs:
            problems.append(f"term {k} uses variables {f.vs.names}, expected {vs.names}")
            continue
        if not f.is_real():
            problems.append(f"term {k} has non-real coefficients")
        if not f.terms or not f.is_homogeneous() or f.degree() != deg:
            problems.append(f"term {k} is not homogeneous of degree {deg}")
    c = cert.constant
    if not is_real(c) or sign(c) <= 0:
        problems.append("constant is not a positive real number")
    if any("variables" in p for p in problems):
        return VerifyReport(False, None, problems, cert.term_count, c)
    lhs = weighted_sum(cert.terms, threads)
    if lhs is None:
        lhs = Poly.zero(vs)
    diff = lhs - cert.target()
    if diff.terms:
        problems.append(f"identity fails ({len(diff.terms)} monomials differ)")
    return VerifyReport(not problems, diff, problems, cert.term_count, c)


def quick_reject(cert: Certificate, points: int = 20, seed: int = 0) -> bool:
    """True when evaluation at random rational points disproves the identity.

    The discriminant at each point is taken from the characteristic
    polynomial of the concrete matrix, not from the symbolic expansion.
    A False result proves nothing.
    """
    rng = random.Random(seed)
    S = sym_space(cert.n)
    for _ in range(points):
        pt = {v: Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for v in S.vs.names}
        if cert.specialize:
            pt.update(cert.specialize)
        lhs = 0
        for w, f in cert.terms:
            if f.vs != S.vs:
                return True
            lhs = lhs + w * f.eval(pt) ** 2
        rhs = cert.constant * disc_matrix(S.matrix(pt))
        if canon(lhs - rhs) != 0:
            return True
    return False


def specialize(cert: Certificate, bindings: dict) -> Certificate:
    """Substitute constants for some coordinates, dropping vanishing terms."""
    vs = cert.vs
    terms = []
    for w, f in cert.terms:
        g = f.substitute(bindings, vs)
        if g.terms:
            terms.append((w, g))
    spec = dict(cert.specialize or {})
    spec.update(bindings)
    return Certificate(cert.n, terms, cert.constant, cert.provenance, spec)


# -- built-ins ---------------------------------------------------------------

def builtin(name: str) -> Certificate:
    if name not in BUILTIN_NAMES:
        raise KeyError(f"unknown built-in certificate {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    text = resources.files("disc_sos.data").joinpath(f"{name}.json").read_text()
    return Certificate.from_json(json.loads(text))


# -- normalization helpers -----------------------------------------------------

def normalize_term(w, f: Poly):
    """Rescale (w, f) to (w * s^2, f / s) with f integral, primitive and
    with positive leading coefficient."""
    from math import gcd, lcm

    if not f.is_rational():
        # pull out a common real radical sqrt(m), absorbing m into the weight
        first = next(c for c in f.terms.values() if not isinstance(c, (int, Fraction)))
        (m, _), = [(m, ab) for m, ab in first.comps.items()]
        root = sqrt(m)
        g = f * inv(root)
        if not g.is_rational():
            raise ValueError("coefficients do not share a single real radical")
        w, f = canon(w * m), g
    coeffs = [Fraction(c) for c in f.terms.values()]
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    g = 0
    for c in coeffs:
        g = gcd(g, int(c * den))
    lead = f.leading()[1]
    s = Fraction(g, den) * (1 if Fraction(lead) > 0 else -1)
    return canon(w * s * s), f * Fraction(1) / s


# -- n = 3 five squares ---------------------------------------------------------

def _five_square_parts():
    Js = j_space(3)
    X = {nm: Js.vs[nm] for nm in Js.vs.names}
    y3 = X["x31"] ** 3 + 3 * X["x21"] * X["x31"] * X["x11"] - X["x21"] ** 2 * X["x32"]
    (E,) = raising(3)
    if act(E, y3):
        raise PipelineError("highest-weight", "y3 is not killed by E")
    ys = lowering_orbit(y3, 3)
    z = {j: sigma(ys[j]) for j in (2, 1, -1, -2)}
    z0 = sigma(X["x31"] ** 2 * X["x12"]) * Fraction(1, 6)
    if z[-2] != z[2].conj() * Fraction(-1, 30):
        raise PipelineError("z_-2 relation", "z_-2 != -1/30 conj(z_2)")
    if z[-1] != z[1].conj() * Fraction(1, 6):
        raise PipelineError("z_-1 relation", "z_-1 != 1/6 conj(z_1)")
    if sigma(ys[0]) != z0 - z0.conj():
        raise PipelineError("z_0 relation", "sigma(iota(y_0)) != z_0 - conj(z_0)")
    return ys, z, z0


def generate_n3_five() -> Certificate:
    """Five weighted squares for delta_3 from the W_(3) lowering chain."""
    ys, z, z0 = _five_square_parts()
    # c*delta = 1/3 |z_2|^2 + 8/3 |z_1|^2 + 36 Im(z_0)^2
    raw = [
        (Fraction(1, 3), z[2].re()),
        (Fraction(1, 3), z[2].im()),
        (Fraction(8, 3), z[1].re()),
        (Fraction(8, 3), z[1].im()),
        (Fraction(36), z0.im()),
    ]
    delta = discriminant(3)
    lhs = weighted_sum(raw, 1)
    c = _ratio(lhs, delta)
    if c is None or sign(c) <= 0:
        raise PipelineError("constant", "sum of squares is not a positive multiple of delta", constant=c)
    scaled = [(canon(w / c), f) for w, f in raw]
    terms = [normalize_term(w, f) for w, f in scaled]
    terms = _order_like(terms, builtin("domokos3-five").terms)
    cert = Certificate(3, terms, 1, "generated:five3@0")
    cert.info["constant_before_scaling"] = c
    cert.info["iota"] = ys
    return cert


def _order_like(terms, reference):
    """Put terms in the order of ``reference`` where polynomials coincide."""
    rest = list(terms)
    out = []
    for _, g in reference:
        hit = next((t for t in rest if t[1] == g), None)
        if hit is not None:
            rest.remove(hit)
            out.append(hit)
    return out + rest


def _ratio(p: Poly, q: Poly):
    """The scalar c with p = c q, or None."""
    if not q.terms:
        return None
    key = max(q.terms)
    c = canon(p.terms.get(key, 0) * inv(q.terms[key]))
    if p != q * c:
        return None
    return c


# -- Gram route --------------------------------------------------------------------

def invariant_gram(basis: list[Poly], n: int) -> list[list]:
    """Gram matrix under the apolar form taken in trace-orthogonal coordinates."""
    tc = trace_coords(n)
    zs = [tc.to_z(f) for f in basis]
    m = len(zs)
    G = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            G[i][j] = G[j][i] = bombieri(zs[i], zs[j], tc.metric)
    return G


def generate_from_module(basis: list[Poly], n: int, provenance: str = "generated:gram@0") -> Certificate:
    """Weighted sum of squares sum d_i g_i^2 from a basis of an invariant
    subspace of the vanishing ideal, via G^-1 = L D L^T."""
    if not basis:
        raise ValueError("empty basis")
    vs = sym_space(n).vs
    deg = n * (n - 1) // 2
    for f in basis:
        if f.vs != vs:
            raise ValueError("basis must use the real coordinates of N")
        if not f.is_real() or not f.is_homogeneous() or f.degree() != deg:
            raise ValueError(f"basis elements must be real forms of degree {deg}")
    G = invariant_gram(basis, n)
    try:
        Q = inverse(G)
    except ZeroDivisionError:
        raise ValueError("Gram matrix is singular: the basis is linearly dependent") from None
    L, D, perm = ldlt(Q)
    m = len(basis)
    pf = [basis[perm[i]] for i in range(m)]
    terms = []
    for i in range(m):
        g = Poly.zero(vs)
        for k in range(i, m):
            if L[k][i] != 0:
                g = g + pf[k] * L[k][i]
        if sign(D[i]) <= 0:
            raise PipelineError("ldlt", "non-positive pivot in G^-1", pivot=D[i])
        terms.append((D[i], g))
    lhs = weighted_sum(terms, 1)
    c = _ratio(lhs, discriminant(n))
    if c is None:
        raise PipelineError("constant", "sum of squares is not a multiple of delta; the span is not invariant")
    if sign(c) <= 0:
        raise PipelineError("constant", "constant is not positive", constant=c)
    # normalize polynomials, then scale weights so that c = 1
    terms = [normalize_term(canon(w / c), g) for w, g in terms]
    cert = Certificate(n, terms, 1, provenance)
    cert.info["gram"] = G
    cert.info["constant_before_scaling"] = c
    return cert


def independent_subset(polys: list[Poly]) -> list[Poly]:
    """A maximal linearly independent sublist, keeping the earliest members."""
    out = []
    for f in polys:
        if f.terms and span_rank(out + [f]) == len(out) + 1:
            out.append(f)
    return out


def generate_from_span(polys: list[Poly], n: int, provenance: str = "generated:gram@0") -> Certificate:
    """Like generate_from_module, but the input may be a dependent spanning set."""
    basis = independent_subset(polys)
    cert = generate_from_module(basis, n, provenance)
    cert.info["rank"] = len(basis)
    return cert


# -- n = 4 seven squares ----------------------------------------------------------

CYCLIC_4 = ((0, 1, 0, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 0, 1, 0))


def generate_n4_seven() -> Certificate:
    """Seven weighted squares for delta_4 from the W_(3,3) summand."""
    xi = wedge(4, "x31", "x41", "x42")
    for op in raising(4):
        if act_wedge(op, xi):
            raise PipelineError("highest-weight", f"{op.name} does not kill x31^x41^x42")
    module = module_span([xi], lowering(4), space_kind="wedge")
    if len(module) != 7:
        raise PipelineError("module", "lowering closure is not 7-dimensional", dimension=len(module))
    first = tstar(xi, 4, "J")
    Js = j_space(4)
    value = first.eval(Js.coords(mat(CYCLIC_4)))
    if value != 1:
        raise PipelineError("cyclic value", "T*(x31^x41^x42)(A) != 1", value=value)
    polys_J = [tstar(v, 4, "J") for v in module]
    if span_rank(polys_J) != 7:
        raise PipelineError("tstar", "image of the module is not 7-dimensional", rank=span_rank(polys_J))
    polys = [sigma(p) for p in polys_J]
    real = real_form(polys)
    if len(real) != 7:
        raise PipelineError("real form", "real form is not 7-dimensional", dimension=len(real))
    cert = generate_from_module(real, 4, "generated:seven4@0")
    cert.info["real_form_dimension"] = len(real)
    return cert


# -- rank matrix from the four-square argument -------------------------------------

def rank_matrix(a2, a1, a0, am1, am2) -> list[list]:
    """The 7 x 7 symmetric matrix of w_(0) + 2 sum a_j k_j in the y-basis."""
    return [
        [0, 0, 0, 0, 2 * a2, 5 * a1, 1 + 5 * a0],
        [0, 0, 0, -2 * a2, -3 * a1, -1, 5 * am1],
        [0, 0, 2 * a2, a1, 1 - 3 * a0, -5 * am1, 5 * am2],
        [0, -2 * a2, a1, -1 + 4 * a0, 2 * am1, -10 * am2, 0],
        [2 * a2, -3 * a1, 1 - 3 * a0, 2 * am1, 12 * am2, 0, 0],
        [5 * a1, -1, -5 * am1, -10 * am2, 0, 0, 0],
        [1 + 5 * a0, 5 * am1, 5 * am2, 0, 0, 0, 0],
    ]


def rank_exact(M) -> int:
    if all(isinstance(x, (int, Fraction)) for r in M for x in r):
        return rank_fraction_free(M)
    return rank(M)
