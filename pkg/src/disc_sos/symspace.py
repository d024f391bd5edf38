"""Symmetric trace-zero matrices: coordinates, characteristic polynomial,
discriminant, trace form, orthogonal sampling and the complex J-model.

Matrices are numpy object arrays holding ints, Fractions, ExactScalars or
Polys.  Nothing here touches floating point.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exactalg import I, canon, format_scalar, parse_scalar, sqrt_rational
from .linalg import det, det_expand, inverse
from .polyring import Poly, VarSet

__all__ = [
    "SymSpace",
    "JSpace",
    "sym_space",
    "j_space",
    "sigma",
    "sigma_inverse",
    "mat",
    "identity",
    "unit",
    "trace",
    "commutator",
    "is_symmetric",
    "is_skew",
    "char_poly",
    "disc_of",
    "discriminant",
    "generic_discriminant",
    "disc_matrix",
    "trace_orthonormal_basis",
    "TraceCoords",
    "trace_coords",
    "cayley",
    "random_skew",
    "random_orthogonal",
    "random_traceless",
    "random_degenerate",
    "random_regular",
    "build_J",
    "build_K",
    "sigma_map",
    "sigma_inverse_map",
    "matrix_to_json",
    "matrix_from_json",
]


# -- small matrix helpers ------------------------------------------------

def mat(rows) -> np.ndarray:
    rows = [list(r) for r in rows]
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = x
    return out


def identity(n: int, one=1) -> np.ndarray:
    return mat([[one if i == j else 0 for j in range(n)] for i in range(n)])


def unit(n: int, i: int, j: int) -> np.ndarray:
    """Matrix unit E_ij (1-based indices)."""
    E = mat([[0] * n for _ in range(n)])
    E[i - 1, j - 1] = 1
    return E


def canon_matrix(M: np.ndarray) -> np.ndarray:
    return mat([[x if isinstance(x, Poly) else canon(x) for x in row] for row in M])


def trace(M):
    total = 0
    for i in range(M.shape[0]):
        total = total + M[i, i]
    return total if isinstance(total, Poly) else canon(total)


def commutator(A, B):
    return A.dot(B) - B.dot(A)


def is_symmetric(M) -> bool:
    n = M.shape[0]
    return all(M[i, j] == M[j, i] for i in range(n) for j in range(i + 1, n))


def is_skew(M) -> bool:
    n = M.shape[0]
    return all(M[i, j] == -M[j, i] for i in range(n) for j in range(i, n))


# -- coordinate spaces ---------------------------------------------------

def _real_names(n: int) -> tuple[list[str], dict]:
    """Coordinate names of N and the (i, j) entry each one sits in (i <= j)."""
    if n == 2:
        return ["a", "d"], {"a": (1, 1), "d": (1, 2)}
    if n == 3:
        pos = {"a": (1, 1), "b": (2, 2), "d": (1, 2), "e": (1, 3), "f": (2, 3)}
        return list(pos), pos

    def nm(i, j):
        return f"s{i}{j}" if n < 10 else f"s{i}_{j}"

    pos = {nm(i, i): (i, i) for i in range(1, n)}
    for i, j in combinations(range(1, n + 1), 2):
        pos[nm(i, j)] = (i, j)
    return list(pos), pos


class SymSpace:
    """Trace-zero symmetric n x n matrices with coordinates s_ij, s_nn eliminated.

    For n = 2 the coordinates are a, d and for n = 3 they are a, b, d, e, f
    (a = s11, b = s22, d = s12, e = s13, f = s23).
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.n = n
        names, self.position = _real_names(n)
        self.vs = VarSet(names)
        self.dim = len(names)
        g = {nm: self.vs[nm] for nm in names}
        M = mat([[Poly.zero(self.vs)] * n for _ in range(n)])
        for nm, (i, j) in self.position.items():
            M[i - 1, j - 1] = g[nm]
            M[j - 1, i - 1] = g[nm]
        last = Poly.zero(self.vs)
        for i in range(n - 1):
            last = last - M[i, i]
        M[n - 1, n - 1] = last
        self.generic = M

    def __repr__(self):
        return f"SymSpace({self.n})"

    def coords(self, A) -> dict:
        """Coordinates of a concrete trace-zero symmetric matrix."""
        return {nm: canon(A[i - 1, j - 1]) for nm, (i, j) in self.position.items()}

    def matrix(self, point: dict) -> np.ndarray:
        return mat([[self.generic[i, j].eval(point) for j in range(self.n)] for i in range(self.n)])

    def basis(self) -> list[np.ndarray]:
        """Matrices dual to the coordinates: A = sum coords[k] * basis[k]."""
        out = []
        for nm in self.vs.names:
            out.append(self.matrix({m: 1 if m == nm else 0 for m in self.vs.names}))
        return out

    def linear_form(self, A) -> Poly:
        """The linear function Y -> Tr(A Y)."""
        return trace(mat(A).dot(self.generic))


@lru_cache(maxsize=None)
def sym_space(n: int) -> SymSpace:
    return SymSpace(n)


# -- characteristic polynomial and discriminant -------------------------

def char_poly(A) -> list:
    """Coefficients [c_0, ..., c_n] (c_n = 1) of det(t I - A), Faddeev-LeVerrier."""
    n = A.shape[0]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = mat([[0] * n for _ in range(n)])
    for k in range(1, n + 1):
        M = A.dot(M)
        c = coeffs[n - k + 1]
        for i in range(n):
            M[i, i] = M[i, i] + c
        AM = A.dot(M)
        coeffs[n - k] = -(trace(AM) * Fraction(1, k))
    return [x if isinstance(x, Poly) else canon(x) for x in coeffs]


def _sylvester(p: list, q: list, zero=0):
    """Sylvester matrix of p, q given as coefficient lists, highest degree first."""
    m, k = len(p) - 1, len(q) - 1
    size = m + k
    rows = []
    for r in range(k):
        rows.append([zero] * r + list(p) + [zero] * (size - m - 1 - r))
    for r in range(m):
        rows.append([zero] * r + list(q) + [zero] * (size - k - 1 - r))
    return rows


def disc_of(coeffs: list):
    """Discriminant of a monic univariate polynomial, coefficients low to high.

    Uses (-1)^(n(n-1)/2) Res(p, p').
    """
    n = len(coeffs) - 1
    high = list(reversed(coeffs))
    deriv = [c * (n - k) for k, c in enumerate(high[:-1])]
    symbolic = any(isinstance(c, Poly) for c in coeffs)
    if symbolic:
        vs = next(c.vs for c in coeffs if isinstance(c, Poly))
        zero = Poly.zero(vs)
        res = det_expand(_sylvester(high, deriv, zero), zero)
    else:
        res = det(_sylvester(high, deriv))
    sgn = -1 if (n * (n - 1) // 2) % 2 else 1
    return res * sgn if symbolic else canon(res * sgn)


@lru_cache(maxsize=None)
def generic_discriminant(n: int) -> Poly:
    """Discriminant of t^n + c2 t^(n-2) + ... + cn in the symbols c2..cn."""
    vs = VarSet([f"c{k}" for k in range(2, n + 1)])
    # coefficient of t^(n-k) is c_k; c_1 = 0 on the trace-zero slice
    coeffs = [vs[f"c{k}"] for k in range(n, 1, -1)] + [Poly.zero(vs), Poly.const(vs, 1)]
    return disc_of(coeffs)


@lru_cache(maxsize=None)
def discriminant(n: int) -> Poly:
    """The discriminant of the generic trace-zero symmetric matrix."""
    S = sym_space(n)
    cp = char_poly(S.generic)
    bindings = {f"c{k}": cp[n - k] for k in range(2, n + 1)}
    return generic_discriminant(n).substitute(bindings, S.vs)


def disc_matrix(A):
    """Discriminant of the characteristic polynomial of a concrete matrix."""
    return disc_of(char_poly(A))


# -- trace form ----------------------------------------------------------

def _diag_basis(n: int) -> list[list]:
    """Diagonals of diag(1,...,1,-k,0,...,0), k = 1..n-1 (pairwise trace-orthogonal)."""
    out = []
    for k in range(1, n):
        out.append([1] * k + [-k] + [0] * (n - k - 1))
    return out


def trace_orthonormal_basis(n: int) -> list[np.ndarray]:
    """Basis of N orthonormal for (A, B) -> Tr(AB): diagonal part first."""
    out = []
    for k, diag in enumerate(_diag_basis(n), start=1):
        s = sqrt_rational(Fraction(1, k * (k + 1)))
        B = mat([[0] * n for _ in range(n)])
        for i, x in enumerate(diag):
            B[i, i] = canon(x * s)
        out.append(B)
    s = sqrt_rational(Fraction(1, 2))
    for i, j in combinations(range(n), 2):
        B = mat([[0] * n for _ in range(n)])
        B[i, j] = B[j, i] = s
        out.append(B)
    return out


class TraceCoords:
    """Trace-orthogonal rational coordinates z_k on N with Tr(Y^2) = sum w_k z_k^2.

    ``to_z`` rewrites a polynomial in the SymSpace coordinates in terms of
    the z_k; ``metric`` holds the w_k.  The orthonormal coordinates are
    u_k = sqrt(w_k) z_k.
    """

    def __init__(self, n: int):
        self.n = n
        self.space = sym_space(n)
        m = self.space.dim
        self.vs = VarSet([f"z{k}" for k in range(1, m + 1)])
        self.matrices = []
        self.metric = []
        for k, diag in enumerate(_diag_basis(n), start=1):
            B = mat([[0] * n for _ in range(n)])
            for i, x in enumerate(diag):
                B[i, i] = x
            self.matrices.append(B)
            self.metric.append(Fraction(1, k * (k + 1)))
        for i, j in combinations(range(n), 2):
            B = mat([[0] * n for _ in range(n)])
            B[i, j] = B[j, i] = Fraction(1, 2)
            self.matrices.append(B)
            self.metric.append(Fraction(2))
        # z_k = Tr(Y B_k) and Tr(B_j B_k) = delta_jk / w_k, so Y = sum_k w_k z_k B_k
        Y = mat([[Poly.zero(self.vs)] * n for _ in range(n)])
        for k, (B, w) in enumerate(zip(self.matrices, self.metric)):
            Y = Y + B * (self.vs[f"z{k + 1}"] * w)
        self.generic = Y
        self.bindings = {nm: Y[i - 1, j - 1] for nm, (i, j) in self.space.position.items()}

    def to_z(self, p: Poly) -> Poly:
        return p.substitute(self.bindings, self.vs)

    def from_z_bindings(self) -> dict:
        """z_k = Tr(Y B_k) as linear forms in the SymSpace coordinates."""
        return {f"z{k + 1}": self.space.linear_form(B) for k, B in enumerate(self.matrices)}


@lru_cache(maxsize=None)
def trace_coords(n: int) -> TraceCoords:
    return TraceCoords(n)


# -- sampling ------------------------------------------------------------

def cayley(S) -> np.ndarray:
    """(I - S)(I + S)^-1, an exact orthogonal matrix for skew rational S."""
    S = mat(S)
    n = S.shape[0]
    Id = identity(n)
    P = Id + S
    try:
        Pinv = mat(inverse(P.tolist()))
    except ZeroDivisionError:
        raise ZeroDivisionError("I + S is singular; resample S") from None
    return canon_matrix((Id - S).dot(Pinv))


def random_skew(n: int, rng: random.Random, bound: int = 3) -> np.ndarray:
    S = mat([[0] * n for _ in range(n)])
    for i, j in combinations(range(n), 2):
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        S[i, j], S[j, i] = x, -x
    return S


def random_orthogonal(n: int, rng: random.Random) -> np.ndarray:
    return cayley(random_skew(n, rng))


def _conjugate(Q, D):
    return canon_matrix(Q.dot(D).dot(Q.T))


def _diag(values) -> np.ndarray:
    n = len(values)
    D = mat([[0] * n for _ in range(n)])
    for i, x in enumerate(values):
        D[i, i] = x
    return D


def _centered(values):
    shift = Fraction(sum(values), len(values))
    return [canon(x - shift) for x in values]


def random_traceless(n: int, rng: random.Random, bound: int = 5) -> np.ndarray:
    """Random rational trace-zero symmetric matrix (not conjugated)."""
    A = mat([[0] * n for _ in range(n)])
    for i in range(n):
        for j in range(i, n):
            A[i, j] = A[j, i] = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
    t = Fraction(trace(A), n)
    for i in range(n):
        A[i, i] = canon(A[i, i] - t)
    return A


def random_degenerate(n: int, seed: int | random.Random, ties: int = 1) -> np.ndarray:
    """Q diag(lambda) Q^T with ``ties`` extra coincidences among eigenvalues."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if not 1 <= ties <= n - 1:
        raise ValueError("ties must be between 1 and n-1")
    distinct = n - ties
    values = rng.sample(range(-9, 10), distinct)
    values += [values[0]] * ties
    rng.shuffle(values)
    return _conjugate(random_orthogonal(n, rng), _diag(_centered(values)))


def random_regular(n: int, seed: int | random.Random) -> np.ndarray:
    """Q diag(lambda) Q^T with pairwise distinct eigenvalues."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    values = rng.sample(range(-9, 10), n)
    return _conjugate(random_orthogonal(n, rng), _diag(_centered(values)))


# -- the J-model ---------------------------------------------------------

def build_J(n: int) -> np.ndarray:
    l = n // 2
    J = mat([[0] * n for _ in range(n)])
    for i in range(l):
        J[i, i + l] = J[i + l, i] = 1
    if n % 2:
        J[n - 1, n - 1] = 1
    return J


def build_K(n: int) -> np.ndarray:
    """Base change with K^T K = J (blocks I/sqrt2, I/sqrt2 ; iI/sqrt2, -iI/sqrt2)."""
    l = n // 2
    r = sqrt_rational(Fraction(1, 2))
    K = mat([[0] * n for _ in range(n)])
    for i in range(l):
        K[i, i] = K[i, i + l] = r
        K[i + l, i] = canon(I * r)
        K[i + l, i + l] = canon(-I * r)
    if n % 2:
        K[n - 1, n - 1] = 1
    return K


def swap_index(n: int, i: int) -> int:
    """The involution i <-> i + l on 1..n (the last index is fixed for odd n)."""
    l = n // 2
    if i <= l:
        return i + l
    if i <= 2 * l:
        return i - l
    return i


_J_VARS = {
    3: [(1, 1), (1, 2), (2, 1), (3, 1), (3, 2)],
    4: [(1, 1), (1, 2), (1, 3), (1, 4), (2, 4), (2, 1), (3, 1), (4, 1), (4, 2)],
}


def _j_variables(n: int) -> list[tuple[int, int]]:
    if n in _J_VARS:
        return _J_VARS[n]
    l = n // 2
    diag = [(i, i) for i in range(1, (l if n % 2 else l - 1) + 1)]
    off = []
    seen = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or (i, j) in seen:
                continue
            partner = (swap_index(n, j), swap_index(n, i))
            seen.update({(i, j), partner})
            off.append(min((i, j), partner))
    return diag + sorted(off)


class JSpace:
    """Trace-zero matrices X with X^T = J X J, coordinates x_ij.

    Relations: x_ij = x_{p(j) p(i)} for the swap p, plus trace zero, which
    eliminates x_ll (even n) or x_nn (odd n).
    """

    def __init__(self, n: int):
        self.n = n
        self.l = n // 2
        self.pairs = _j_variables(n)
        self.vs = VarSet([f"x{i}{j}" for i, j in self.pairs])
        self.dim = len(self.pairs)
        self.index = {p: k for k, p in enumerate(self.pairs)}
        self.position = {f"x{i}{j}": (i, j) for i, j in self.pairs}
        M = mat([[None] * n for _ in range(n)])
        for (i, j) in self.pairs:
            v = self.vs[f"x{i}{j}"]
            M[i - 1, j - 1] = v
            M[swap_index(n, j) - 1, swap_index(n, i) - 1] = v
        l = self.l
        diag = Poly.zero(self.vs)
        if n % 2:
            for i in range(1, l + 1):
                diag = diag - M[i - 1, i - 1] * 2
            M[n - 1, n - 1] = diag
        else:
            for i in range(1, l):
                diag = diag - M[i - 1, i - 1]
            M[l - 1, l - 1] = diag
            M[2 * l - 1, 2 * l - 1] = diag
        for i in range(n):
            for j in range(n):
                if M[i, j] is None:
                    raise AssertionError(f"entry ({i + 1},{j + 1}) left undetermined")
        self.generic = M

    def name(self, i: int, j: int) -> str:
        return f"x{i}{j}"

    def entry(self, i: int, j: int) -> Poly:
        """x_ij rewritten in the chosen coordinates."""
        return self.generic[i - 1, j - 1]

    def coords(self, X) -> dict:
        return {f"x{i}{j}": canon(X[i - 1, j - 1]) for i, j in self.pairs}

    def matrix(self, point: dict) -> np.ndarray:
        return mat([[self.generic[i, j].eval(point) for j in range(self.n)] for i in range(self.n)])

    def contains(self, X) -> bool:
        J = build_J(self.n)
        return trace(X) == 0 and all(
            canon(x - y) == 0 for x, y in zip(X.T.flat, J.dot(X).dot(J).flat)
        )


@lru_cache(maxsize=None)
def j_space(n: int) -> JSpace:
    return JSpace(n)


@lru_cache(maxsize=None)
def sigma_map(n: int) -> dict:
    """x_ij -> (K^-1 Y K)_ij as polynomials in the real coordinates."""
    S = sym_space(n)
    Js = j_space(n)
    K = build_K(n)
    Kinv = canon_matrix(build_J(n).dot(K.T))
    X = Kinv.dot(S.generic).dot(K)
    return {f"x{i}{j}": X[i - 1, j - 1] for i, j in Js.pairs}


@lru_cache(maxsize=None)
def sigma_inverse_map(n: int) -> dict:
    """Real coordinate -> entry of K X K^-1 in the J-coordinates."""
    S = sym_space(n)
    Js = j_space(n)
    K = build_K(n)
    Kinv = canon_matrix(build_J(n).dot(K.T))
    Y = K.dot(Js.generic).dot(Kinv)
    return {nm: Y[i - 1, j - 1] for nm, (i, j) in S.position.items()}


def sigma(p: Poly) -> Poly:
    """Pull a J-coordinate polynomial back to the real coordinates."""
    n = _infer_n(p)
    return p.substitute(sigma_map(n), sym_space(n).vs)


def sigma_inverse(p: Poly) -> Poly:
    n = _infer_n(p)
    return p.substitute(sigma_inverse_map(n), j_space(n).vs)


def _infer_n(p: Poly) -> int:
    names = set(p.vs.names)
    for n in range(2, 12):
        if names == set(sym_space(n).vs.names) or names == set(j_space(n).vs.names):
            return n
    raise ValueError(f"cannot infer matrix size from variables {p.vs}")


# -- JSON ----------------------------------------------------------------

def matrix_to_json(M, kind: str = "symmetric") -> dict:
    return {
        "n": int(M.shape[0]),
        "kind": kind,
        "entries": [[format_scalar(canon(x)) for x in row] for row in M],
    }


def matrix_from_json(data: dict) -> tuple[np.ndarray, str]:
    n = int(data["n"])
    rows = data["entries"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("entries must form an n x n array")
    M = mat([[parse_scalar(str(x)) for x in r] for r in rows])
    kind = data.get("kind", "symmetric")
    checks = {
        "symmetric": is_symmetric,
        "skew": is_skew,
        "orthogonal": lambda Q: all(canon(x) == y for x, y in zip(Q.T.dot(Q).flat, identity(n).flat)),
    }
    if kind not in checks:
        raise ValueError(f"unknown matrix kind {kind!r}")
    if not checks[kind](M):
        raise ValueError(f"matrix is not {kind}")
    return M, kind
