"""Equivariant maps on trace-zero symmetric matrices.

Wedge elements of the (n-1)-th exterior power of N are stored as dicts
keyed by sorted tuples of coordinate indices; the coordinate system is a
SymSpace (real) or a JSpace (complex J-model).  The functional keyed by S
pairs with v_1 ^ ... ^ v_k as the minor det(x_s(v_j)) for s in S.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, prod

from .exactalg import canon
from .linalg import det, det_expand, inverse, rank
from .polyring import Poly
from .symspace import (
    commutator,
    identity,
    j_space,
    mat,
    sym_space,
    trace,
    trace_coords,
    unit,
)

__all__ = [
    "H",
    "coord_space",
    "coordinate_column",
    "h_matrix",
    "tmap",
    "is_zero_wedge",
    "tmap_vanishes",
    "generic_tmap",
    "skew_basis",
    "minor_count",
    "wedge",
    "normalize_wedge",
    "pairing",
    "tstar",
    "induced_action",
    "perm_sign",
    "kappa",
    "pfaffian",
    "F_invariant",
    "G_invariant",
    "G_invariant_naive",
    "gamma",
    "tangent_matrix",
    "tangent_minors",
    "D_r",
    "tangent_gram_det",
]


def coord_space(n: int, coords: str = "real"):
    if coords == "real":
        return sym_space(n)
    if coords == "J":
        return j_space(n)
    raise ValueError(f"unknown coordinate system {coords!r}")


def _is_poly_matrix(A) -> bool:
    return any(isinstance(x, Poly) for x in A.flat)


def H(i: int, A):
    """A^i - Tr(A^i)/n * I."""
    n = A.shape[0]
    if i < 1:
        raise ValueError("H_i needs i >= 1")
    P = A
    for _ in range(i - 1):
        P = P.dot(A)
    t = trace(P) * Fraction(1, n)
    out = P.copy()
    for k in range(n):
        out[k, k] = out[k, k] - t
    if not _is_poly_matrix(out):
        out = mat([[canon(x) for x in row] for row in out])
    return out


def coordinate_column(M, space) -> list:
    return [M[i - 1, j - 1] for i, j in space.position.values()]


def h_matrix(A, space) -> list[list]:
    """m x (n-1) matrix whose k-th column holds the coordinates of H_k(A)."""
    n = A.shape[0]
    cols = [coordinate_column(H(k, A), space) for k in range(1, n)]
    return [list(r) for r in zip(*cols)]


def _minors(rows: list[list], k: int) -> dict:
    symbolic = any(isinstance(x, Poly) for r in rows for x in r)
    out = {}
    for S in combinations(range(len(rows)), k):
        sub = [rows[s] for s in S]
        if symbolic:
            zero = next(x for r in rows for x in r if isinstance(x, Poly)) * 0
            out[S] = det_expand(sub, zero)
        else:
            out[S] = det(sub)
    return out


def tmap(A, coords: str = "real") -> dict:
    """Coordinates of A ^ H_2(A) ^ ... ^ H_{n-1}(A), keyed by sorted index tuples."""
    n = A.shape[0]
    space = coord_space(n, coords)
    return _minors(h_matrix(A, space), n - 1)


def is_zero_wedge(v: dict) -> bool:
    return all(x == 0 for x in v.values())


def tmap_vanishes(A, coords: str = "real") -> bool:
    """Tmap(A) == 0 without listing the minors: all maximal minors of the
    H-coordinate matrix vanish iff its rank is below n - 1."""
    n = A.shape[0]
    return rank(h_matrix(A, coord_space(n, coords))) < n - 1


# -- wedge bookkeeping ---------------------------------------------------

def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    seq = list(seq)
    if len(set(seq)) < len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def normalize_wedge(indices) -> tuple[tuple, int]:
    return tuple(sorted(indices)), perm_sign(indices)


def wedge(n: int, *names, coords: str = "J") -> dict:
    """The functional x_{name1} ^ ... ^ x_{namek} in the sorted basis."""
    space = coord_space(n, coords)
    idx = [space.vs.index[nm] for nm in names]
    key, sgn = normalize_wedge(idx)
    return {key: sgn} if sgn else {}


def pairing(xi: dict, vectors: list[list]):
    """<xi, v_1 ^ ... ^ v_k> for coordinate vectors v_j."""
    total = 0
    for S, c in xi.items():
        if c == 0:
            continue
        total = total + c * det([[v[s] for v in vectors] for s in S])
    return canon(total)


@lru_cache(maxsize=None)
def generic_tmap(n: int, coords: str = "real") -> dict:
    space = coord_space(n, coords)
    return _minors(h_matrix(space.generic, space), n - 1)


def tstar(xi: dict, n: int, coords: str = "J") -> Poly:
    """The polynomial A -> xi(T(A))."""
    space = coord_space(n, coords)
    minors = generic_tmap(n, coords)
    out = Poly.zero(space.vs)
    for S, c in xi.items():
        if c != 0:
            out = out + minors[S] * c
    return out


def induced_action(R, v: dict, k: int) -> dict:
    """Apply the k-th exterior power of the coordinate matrix R to v."""
    m = len(R)
    out = {}
    for S in combinations(range(m), k):
        total = 0
        for T, c in v.items():
            if c != 0:
                total = total + c * det([[R[s][t] for t in T] for s in S])
        out[S] = canon(total)
    return out


# -- kappa, Pfaffian, F, G, gamma ----------------------------------------

def kappa(mats) -> "np.ndarray":
    """Alternating sum over Sym(k) of the products A_p(1) ... A_p(k)."""
    k = len(mats)
    n = mats[0].shape[0]
    out = mat([[0] * n for _ in range(n)])
    for p in permutations(range(k)):
        P = identity(n)
        for i in p:
            P = P.dot(mats[i])
        out = out + P * perm_sign(p)
    return mat([[canon(x) for x in row] for row in out])


def pfaffian(C):
    """Pfaffian by expansion along the first row."""
    rows = C.tolist() if hasattr(C, "tolist") else [list(r) for r in C]
    size = len(rows)
    if size % 2:
        raise ValueError("Pfaffian needs an even-sized skew matrix")
    zero = next((x * 0 for r in rows for x in r if isinstance(x, Poly)), 0)

    @lru_cache(maxsize=None)
    def pf(idx: tuple):
        if not idx:
            return zero + 1
        first, rest = idx[0], idx[1:]
        total = zero
        for pos, j in enumerate(rest):
            c = rows[first][j]
            if c == 0:
                continue
            sub = pf(rest[:pos] + rest[pos + 1:])
            term = c * sub
            total = total - term if pos % 2 else total + term
        return total

    res = pf(tuple(range(size)))
    return res if isinstance(res, Poly) else canon(res)


def F_invariant(mats):
    """Coefficient of t_1...t_l in Pf(sum t_k [A_{2k-1}, A_{2k}]) by polarization."""
    n = len(mats)
    l = n // 2
    comms = [commutator(mats[2 * k], mats[2 * k + 1]) for k in range(l)]
    total = 0
    for r in range(l + 1):
        for S in combinations(range(l), r):
            C = mat([[0] * n for _ in range(n)])
            for k in S:
                C = C + comms[k]
            value = pfaffian(C)
            total = total + value if (l - r) % 2 == 0 else total - value
    return canon(total)


def _matchings(items: tuple):
    """Perfect matchings, each as a list of pairs (i, j) with i < j, in order of i."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for pos, j in enumerate(rest):
        for m in _matchings(rest[:pos] + rest[pos + 1:]):
            yield [(first, j)] + m


def G_invariant(mats):
    """Alternation of F over Sym(n), normalized by 1/(n(n-2)...2).

    F is skew inside each pair and symmetric in the pairs, so the n! terms
    collapse to one term per perfect matching, each with multiplicity
    n(n-2)...2, which the normalization cancels.
    """
    n = len(mats)
    if n % 2 or n < 4 or mats[0].shape[0] != n:
        raise ValueError("G is defined for n even, n >= 4, with n matrices of size n")
    total = 0
    for m in _matchings(tuple(range(n))):
        order = [k for pair in m for k in pair]
        total = total + perm_sign(order) * F_invariant([mats[k] for k in order])
    return canon(total)


def G_invariant_naive(mats):
    """G by the full sum over Sym(n); reference for the matching formula."""
    n = len(mats)
    if n % 2 or n < 4 or mats[0].shape[0] != n:
        raise ValueError("G is defined for n even, n >= 4, with n matrices of size n")
    norm = prod(range(2, n + 1, 2))
    total = 0
    for p in permutations(range(n)):
        total = total + perm_sign(p) * F_invariant([mats[i] for i in p])
    return canon(total * Fraction(1, norm))


def gamma(mats):
    """The element B of N with Tr(B E) = G(A_1, ..., A_{n-1}, E) for all E in N."""
    n = mats[0].shape[0]
    if n % 2 or n < 4:
        raise ValueError("gamma is defined for even n >= 4")
    basis = sym_space(n).basis()
    gram = [[trace(X.dot(Y)) for Y in basis] for X in basis]
    rhs = [G_invariant(list(mats) + [E]) for E in basis]
    ginv = inverse(gram)
    coeffs = [canon(sum(ginv[i][j] * rhs[j] for j in range(len(basis)))) for i in range(len(basis))]
    out = mat([[0] * n for _ in range(n)])
    for c, E in zip(coeffs, basis):
        out = out + E * c
    return mat([[canon(x) for x in row] for row in out])


# -- tangent map minors ----------------------------------------------------

def skew_basis(n: int):
    return [unit(n, i, j) - unit(n, j, i) for i, j in combinations(range(1, n + 1), 2)]


@lru_cache(maxsize=None)
def tangent_matrix(n: int, space: str = "N"):
    """Rows: trace-orthogonal coordinates of [K, A]; columns: skew basis K.

    Returns (rows, metric, varset) with Tr(Y^2) = sum metric[k] * row_k(Y)^2.
    """
    if space == "N":
        tc = trace_coords(n)
        S = tc.space
        A = S.generic
        forms = [(B, w) for B, w in zip(tc.matrices, tc.metric)]
        vs = S.vs
    elif space == "M":
        from .polyring import VarSet

        pos = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
        vs = VarSet([f"m{i}{j}" for i, j in pos])
        A = mat([[Poly.zero(vs)] * n for _ in range(n)])
        for i, j in pos:
            A[i - 1, j - 1] = A[j - 1, i - 1] = vs[f"m{i}{j}"]
        forms = []
        for i, j in pos:
            B = unit(n, i, j) + unit(n, j, i) if i != j else unit(n, i, i)
            forms.append((B if i == j else B * Fraction(1, 2), 1 if i == j else 2))
    else:
        raise ValueError("space must be 'N' or 'M'")
    cols = [commutator(K, A) for K in skew_basis(n)]
    rows = []
    for B, _ in forms:
        rows.append([trace(B.dot(C)) for C in cols])
    return rows, [Fraction(w) for _, w in forms], vs


def tangent_minors(n: int, r: int | None = None, space: str = "N") -> list:
    """All r x r minors (row set, column set, weight, Poly) of the tangent matrix."""
    rows, metric, vs = tangent_matrix(n, space)
    m, g = len(rows), len(rows[0])
    if r is None:
        r = n * (n - 1) // 2
    if not 1 <= r <= min(m, g):
        raise ValueError(f"r must lie in 1..{min(m, g)}")
    zero = Poly.zero(vs)
    out = []
    for S in combinations(range(m), r):
        for T in combinations(range(g), r):
            minor = det_expand([[rows[s][t] for t in T] for s in S], zero)
            out.append((S, T, prod((metric[s] for s in S), start=Fraction(1)), minor))
    return out


def D_r(n: int, r: int | None = None, space: str = "N") -> Poly:
    """Sum of weighted squared minors; equals the sum of squares of the minors
    taken in trace-orthonormal coordinates."""
    total = None
    for _, _, w, minor in tangent_minors(n, r, space):
        term = minor.square() * w
        total = term if total is None else total + term
    return total


def tangent_gram_det(n: int) -> Poly:
    """det(X^T W X) for the full-rank case (Cauchy-Binet form of D)."""
    rows, metric, vs = tangent_matrix(n, "N")
    g = len(rows[0])
    G = [[sum((rows[k][i] * rows[k][j] * metric[k] for k in range(len(rows))), Poly.zero(vs))
          for j in range(g)] for i in range(g)]
    return det_expand(G, Poly.zero(vs))


def minor_count(n: int, r: int | None = None, space: str = "N") -> int:
    m = n * (n + 1) // 2 - (1 if space == "N" else 0)
    if r is None:
        r = n * (n - 1) // 2
    return comb(m, r) * comb(n * (n - 1) // 2, r)
