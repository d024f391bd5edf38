"""Acceptance checks, one function per criterion.

Each check raises AssertionError with a short reason on failure and
returns a one-line detail string on success.  ``run`` times every check
against its budget; an over-budget check counts as a failure.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .certificates import (
    _ratio,
    builtin,
    generate_n3_five,
    generate_n4_seven,
    rank_exact,
    rank_matrix,
    specialize,
    verify,
)
from .equivariant import (
    D_r,
    G_invariant,
    H,
    gamma,
    is_zero_wedge,
    kappa,
    minor_count,
    pfaffian,
    tangent_minors,
    tmap,
    tmap_vanishes,
    tstar,
    wedge,
)
from .linalg import det
from .polyring import Poly
from .reptheory import (
    PolySpace,
    WedgeSpace,
    act,
    character,
    decompose,
    dim_spherical,
    highest_weight_vectors,
    irr_character,
    lowering,
    lowering_orbit,
    mult_kernel_S2,
    raising,
    s2_element,
    same_span,
    vanishing_forms,
    weight_of,
    weight_space,
)
from .symspace import (
    discriminant,
    j_space,
    mat,
    random_degenerate,
    random_regular,
    random_skew,
    sigma_inverse,
    sym_space,
    unit,
)


def check(cond, message: str):
    if not cond:
        raise AssertionError(message)


def _j3():
    J = j_space(3)
    return {k: J.vs[k] for k in J.vs.names}


# 1 ---------------------------------------------------------------------------

def c01_delta3():
    S = sym_space(3)
    a, b, d, e, f = (S.vs[k] for k in "abdef")
    p = -a * a - a * b - b * b - d * d - e * e - f * f
    q = a * a * b + a * b * b - a * d * d + a * f * f - b * d * d + b * e * e - 2 * d * e * f
    target = -4 * p ** 3 - 27 * q * q
    check(discriminant(3) == target, "discriminant(3) differs from -4p^3 - 27q^2")
    return f"{len(target.terms)} monomials"


# 2 ---------------------------------------------------------------------------

def c02_five_squares():
    ref = builtin("domokos3-five")
    rep = verify(ref)
    check(rep.valid, "builtin five-term certificate: " + rep.summary())
    check([w for w, _ in ref.terms] == [27, 1, 1, 4, 4], "unexpected weights")
    gen = generate_n3_five()
    check(verify(gen).valid, "generated certificate does not verify")
    check(gen.term_count == 5, "generated certificate does not have 5 terms")
    for (w1, f1), (w2, f2) in zip(gen.terms, ref.terms):
        check(w1 == w2 and (f1 == f2 or f1 == -f2), "generated term differs from the printed one")
    check(gen.info["constant_before_scaling"] == Fraction(1, 108), "intermediate constant is not 1/108")
    return "weights 27,1,1,4,4; c before scaling 1/108"


# 3 ---------------------------------------------------------------------------

def c03_kummer():
    k7 = builtin("kummer3-seven")
    check(verify(k7).valid, "Kummer certificate does not verify")
    check([w for w, _ in k7.terms] == [15, 15, 15, 1, 1, 1, 1], "unexpected Kummer weights")
    six = builtin("lax3-six-offdiag")
    check(verify(six).valid and six.term_count == 6, "six-square certificate does not verify")
    spec = specialize(k7, {"a": 0, "b": 0})
    check(spec.terms == six.terms, "a,b -> 0 specialization differs from the six-square identity")
    S = sym_space(3)
    d, e, f = (S.vs[k] for k in "def")
    s = d * d + e * e + f * f
    check(six.target() == 4 * s ** 3 - 108 * d * d * e * e * f * f, "off-diagonal target mismatch")
    four = builtin("domokos3-four-offdiag")
    check(verify(four).valid and four.term_count == 4, "four-square certificate does not verify")
    return "7, 6 and 4 terms valid"


# 4 ---------------------------------------------------------------------------

def c04_vanishing_cubics():
    forms = vanishing_forms(3, 3, seed=1)
    check(len(forms) == 7, f"degree-3 vanishing forms have dimension {len(forms)}")
    m = len(sym_space(3).vs)
    images = [tstar({S: 1}, 3, "real") for S in combinations(range(m), 2)]
    check(same_span(forms, images), "vanishing cubics differ from the T* image")
    check(vanishing_forms(3, 2, seed=1) == [], "a quadric vanishes on the degenerate locus")
    return "dim 7 = span T*; degree 2: 0"


# 5 ---------------------------------------------------------------------------

E_TABLE = {"x21": {}, "x11": {"x31": -1}, "x31": {"x21": 1}, "x12": {"x32": -2}, "x32": {"x11": 3}}
F_TABLE = {"x21": {"x31": 2}, "x31": {"x11": -3}, "x11": {"x32": 1}, "x32": {"x12": -1}, "x12": {}}
WEIGHTS_3 = {"x21": 2, "x11": 0, "x31": 1, "x12": -2, "x32": -1}


def _lin(x, spec):
    out = Poly.zero(next(iter(x.values())).vs)
    for k, c in spec.items():
        out = out + x[k] * c
    return out


def _printed_hw(x):
    x11, x12, x21, x31, x32 = (x[k] for k in ("x11", "x12", "x21", "x31", "x32"))
    return {
        6: x21 ** 3,
        4: 2 * x21 ** 2 * x11 + x21 * x31 ** 2,
        3: x31 ** 3 + 3 * x21 * x31 * x11 - x21 ** 2 * x32,
        2: 3 * x21 * x11 ** 2 + 2 * x21 * x31 * x32 + x21 ** 2 * x12,
        0: -2 * x11 ** 3 + 2 * x11 * x12 * x21 - 2 * x11 * x32 * x31 + x12 * x31 ** 2 + x32 ** 2 * x21,
    }


def _printed_iota(x):
    x11, x12, x21, x31, x32 = (x[k] for k in ("x11", "x12", "x21", "x31", "x32"))
    q = lambda a, b: Fraction(a, b)  # noqa: E731
    return {
        3: x31 ** 3 + 3 * x21 * x31 * x11 - x21 ** 2 * x32,
        2: (-3 * x31 ** 2 * x11 - 9 * x21 * x11 ** 2 - x31 * x21 * x32 + x21 ** 2 * x12) * q(1, 3),
        1: (-x31 ** 2 * x32 - 3 * x21 * x11 * x32 + x31 * x21 * x12) * q(1, 3),
        0: (x31 ** 2 * x12 - x21 * x32 ** 2) * q(1, 6),
        -1: (-3 * x31 * x11 * x12 - x31 * x32 ** 2 + x21 * x32 * x12) * q(1, 18),
        -2: (9 * x11 ** 2 * x12 + x31 * x32 * x12 + 3 * x11 * x32 ** 2 - x21 * x12 ** 2) * q(1, 90),
        -3: (3 * x11 * x12 * x32 - x31 * x12 ** 2 + x32 ** 3) * q(1, 90),
    }


S3_CHARACTER = {6: 1, 5: 1, 4: 2, 3: 3, 2: 4, 1: 4, 0: 5, -1: 4, -2: 4, -3: 3, -4: 2, -5: 1, -6: 1}


def c05_sl2_fixtures():
    x = _j3()
    (E,), (F,) = raising(3), lowering(3)
    for name in E_TABLE:
        check(act(E, x[name]) == _lin(x, E_TABLE[name]), f"E({name}) differs from the table")
        check(act(F, x[name]) == _lin(x, F_TABLE[name]), f"F({name}) differs from the table")
        check(weight_of(x[name], 3) == (WEIGHTS_3[name],), f"weight of {name} differs")
    space = PolySpace(3, 3)
    chi = character(space)
    check(chi.terms == {(k,): v for k, v in S3_CHARACTER.items()}, "S^3 character differs")
    check(decompose(chi, 3) == [(6,), (4,), (3,), (2,), (0,)], "S^3 decomposition differs")
    check(len(weight_space(space, 2)) == 4, "weight-2 space is not 4-dimensional")
    for w, v in _printed_hw(x).items():
        got = highest_weight_vectors(space, (w,))
        check(len(got) == 1 and _ratio(v, got[0]) is not None, f"highest weight vector of weight {w} differs")
    iota = _printed_iota(x)
    ys = lowering_orbit(iota[3])
    for k in range(-3, 4):
        check(ys[k] == iota[k], f"iota(y_{k}) differs")
    basis = [ys[k] for k in range(3, -4, -1)]
    dim, _ = mult_kernel_S2(basis)
    check(dim == 5, f"multiplication kernel has dimension {dim}")
    idx = {k: 3 - k for k in range(-3, 4)}
    k2 = {(idx[3], idx[-1]): 2, (idx[2], idx[0]): -2, (idx[1], idx[1]): 1}
    check(not s2_element(k2, basis).terms, "k_2 does not map to zero")
    w0 = {(idx[3], idx[-3]): 2, (idx[2], idx[-2]): -2, (idx[1], idx[-1]): 2, (idx[0], idx[0]): -1}
    c = _ratio(s2_element(w0, basis), sigma_inverse(discriminant(3)))
    check(c is not None and c != 0, "w_(0) does not map to a multiple of delta")
    return f"tables, character, 5 hw vectors, iota(y_k), kernel dim 5, w_(0) -> {c}*delta"


# 6 ---------------------------------------------------------------------------

LAMBDA3_N4 = [(3, 3), (3, -3), (4, 0), (3, 1), (3, -1), (2, 0), (1, 1), (1, -1)]
LAMBDA3_DIMS = {(3, 3): 7, (3, -3): 7, (4, 0): 25, (3, 1): 15, (3, -1): 15, (2, 0): 9, (1, 1): 3, (1, -1): 3}
CYCLIC_A = ((0, 1, 0, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 0, 1, 0))


def _wedge_sum(*parts):
    out: dict = {}
    for c, w in parts:
        for k, v in w.items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v != 0}


def c06_lambda3():
    W = WedgeSpace(4, 3)
    parts = decompose(character(W), 4)
    check(sorted(parts) == sorted(LAMBDA3_N4), f"decomposition {parts}")
    dims = [irr_character(lam, 4).dimension() for lam in parts]
    check(sorted(dims) == sorted(LAMBDA3_DIMS.values()) and sum(dims) == 84, f"dimensions {dims}")
    top = wedge(4, "x31", "x41", "x42")
    check(highest_weight_vectors(W, (3, 3)) == [top], "(3,3) highest weight functional differs")
    J = j_space(4)
    value = tstar(top, 4, "J").eval(J.coords(mat(CYCLIC_A)))
    check(value == 1, f"T*(x31^x41^x42)(A) = {value}")
    xi = _wedge_sum((1, wedge(4, "x21", "x31", "x42")), (2, wedge(4, "x11", "x31", "x41")))
    got = highest_weight_vectors(W, (3, 1))
    check(len(got) == 1 and got[0] == xi, "(3,1) highest weight functional differs")
    check(not tstar(xi, 4, "J").terms, "T* does not kill the (3,1) functional")
    return "dims 7,7,25,15,15,9,3,3; T*(top)(A) = 1; (3,1) killed"


# 7 ---------------------------------------------------------------------------

def c07_seven_squares():
    cert = generate_n4_seven()
    rep = verify(cert)
    check(rep.valid, rep.summary())
    check(cert.term_count == 7, f"{cert.term_count} terms")
    check(all(w > 0 for w, _ in cert.terms) and cert.constant > 0, "non-positive weight or constant")
    return rep.summary()


# 8 ---------------------------------------------------------------------------

def c08_tmap_zero_locus(samples: int = 200, seed: int = 0):
    rng = random.Random(seed)
    for n in (3, 4, 5):
        for kind in ("degenerate", "regular"):
            for s in range(samples):
                A = random_degenerate(n, rng) if kind == "degenerate" else random_regular(n, rng)
                zero = tmap_vanishes(A)
                check(zero == (kind == "degenerate"), f"n={n} {kind} sample {s}: Tmap zero = {zero}")
                if s < 5:
                    check(is_zero_wedge(tmap(A)) == zero, f"n={n}: rank test disagrees with the minors")
                hs = [H(k, A) for k in range(1, n)]
                check(not any(x != 0 for x in kappa(hs).flat), f"n={n}: kappa(T(A)) != 0")
                if n == 4:
                    check(not any(x != 0 for x in gamma(hs).flat), "gamma(T(A)) != 0")
    return f"{samples} degenerate + {samples} regular samples for n = 3, 4, 5"


# 9 ---------------------------------------------------------------------------

def c09_section_identities(seed: int = 0):
    for n in range(3, 8):
        sgn = -1 if n % 4 == 0 or (n - 3) % 4 == 0 else 1
        K = kappa([unit(n, i, i + 1) + unit(n, i + 1, i) for i in range(1, n)])
        check((K == unit(n, 1, n) + unit(n, n, 1) * sgn).all(), f"kappa matrix-unit identity fails for n={n}")
    rng = random.Random(seed)
    for size in (4, 6):
        for _ in range(50):
            C = random_skew(size, rng)
            check(pfaffian(C) ** 2 == det(C.tolist()), f"Pf^2 != det for size {size}")
    for n in (4, 6):
        l = n // 2
        args = []
        for i in range(1, l + 1):
            args.append(unit(n, 2 * i - 1, 2 * i - 1) - unit(n, 2 * i, 2 * i))
            args.append((unit(n, 2 * i - 1, 2 * i) + unit(n, 2 * i, 2 * i - 1)) * Fraction(1, 2))
        check(G_invariant(args) == 1, f"G(B_1, C_1, ...) != 1 for n={n}")
    return "kappa for n=3..7; Pf^2 = det; G = 1 for n = 4, 6"


# 10 --------------------------------------------------------------------------

TANGENT_CONSTANT_3 = 8


def c10_tangent_minors(full: bool = False):
    ms = tangent_minors(3)
    check(len(ms) == 10 == minor_count(3), f"n=3 gives {len(ms)} minors")
    c = _ratio(D_r(3), discriminant(3))
    check(c == TANGENT_CONSTANT_3, f"sum of squared minors is {c} * delta_3")
    ms4 = tangent_minors(4)
    check(len(ms4) == 84 == minor_count(4), f"n=4 gives {len(ms4)} minors")
    detail = "10 minors, D = 8 delta_3; 84 minors for n=4"
    if full:
        c4 = _ratio(D_r(4), discriminant(4))
        check(c4 is not None and c4 > 0, "n=4 sum of squared minors is not a positive multiple of delta_4")
        detail += f", D = {c4} delta_4"
    return detail


# 11 --------------------------------------------------------------------------

def c11_rank_matrix():
    cases = [(Fraction(-1, 5), 5), (Fraction(1, 3), 5), (Fraction(1, 4), 6), (Fraction(0), 7), (Fraction(2, 7), 7)]
    for a0, want in cases:
        r = rank_exact(rank_matrix(0, 0, a0, 0, 0))
        check(r == want, f"a0 = {a0}: rank {r}, expected {want}")
    return "ranks 5, 5, 6, 7, 7"


# 12 --------------------------------------------------------------------------

def c12_dimensions():
    check(dim_spherical(3) == 7 and dim_spherical(4) == 25, "spherical harmonic dimensions")
    for lam in LAMBDA3_N4:
        chi = irr_character(lam, 4)
        want = (lam[0] + 1) ** 2 - lam[1] ** 2
        check(chi.dimension() == want == LAMBDA3_DIMS[lam], f"dim W_{lam} = {chi.dimension()}")
    total = None
    for lam in LAMBDA3_N4:
        total = irr_character(lam, 4) if total is None else total + irr_character(lam, 4)
    check(total == character(WedgeSpace(4, 3)), "sum of irreducible characters != character of the wedge space")
    return "dim H^3 = 7, dim H^4 = 25, W_lambda dims agree"


@dataclass
class Criterion:
    number: int
    title: str
    func: object
    budget: float
    full_only: bool = False


CRITERIA = [
    Criterion(1, "delta_3 = -4p^3 - 27q^2", c01_delta3, 1),
    Criterion(2, "five-square certificate and its generation", c02_five_squares, 10),
    Criterion(3, "Kummer, six- and four-square certificates", c03_kummer, 10),
    Criterion(4, "vanishing cubics for n=3", c04_vanishing_cubics, 30),
    Criterion(5, "sl2 tables, characters, highest weight vectors", c05_sl2_fixtures, 60),
    Criterion(6, "third exterior power for n=4", c06_lambda3, 60),
    Criterion(7, "seven-square certificate for n=4", c07_seven_squares, 600),
    Criterion(8, "Tmap zero locus, kappa and gamma", c08_tmap_zero_locus, 120),
    Criterion(9, "kappa, Pfaffian and G identities", c09_section_identities, 30),
    Criterion(10, "tangent minors", c10_tangent_minors, 60),
    Criterion(11, "rank matrix", c11_rank_matrix, 1),
    Criterion(12, "dimension formulas", c12_dimensions, 30),
]


@dataclass
class Result:
    number: int
    title: str
    ok: bool
    seconds: float
    detail: str

    def line(self, timings: bool = True) -> str:
        status = "PASS" if self.ok else "FAIL"
        clock = f" ({self.seconds:.2f}s)" if timings else ""
        return f"criterion {self.number:2d} {status}{clock} {self.title}: {self.detail}"


def run_one(crit: Criterion, level: str = "fast") -> Result:
    t0 = time.perf_counter()
    try:
        if crit.func is c10_tangent_minors:
            detail = crit.func(full=level == "full")
        else:
            detail = crit.func()
        ok = True
    except AssertionError as exc:
        detail, ok = f"{exc}", False
    except Exception as exc:  # a crash is a failure of the criterion, not of the runner
        detail, ok = f"{type(exc).__name__}: {exc}", False
    seconds = time.perf_counter() - t0
    budget = crit.budget * (10 if level == "full" and crit.number == 10 else 1)
    if ok and seconds > budget:
        ok, detail = False, f"over the {budget}s budget; {detail}"
    return Result(crit.number, crit.title, ok, seconds, detail)


def run(level: str = "fast", numbers=None, echo=None, timings: bool = True) -> list[Result]:
    out = []
    for crit in CRITERIA:
        if numbers and crit.number not in numbers:
            continue
        res = run_one(crit, level)
        if echo:
            echo(res.line(timings))
        out.append(res)
    return out
