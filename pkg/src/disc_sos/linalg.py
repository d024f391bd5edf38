"""Exact linear algebra over the scalar tower.

Dense routines take lists of rows.  :class:`Echelon` works on sparse
vectors (dicts) and is what the polynomial-span computations use.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import combinations
from math import lcm

from .exactalg import canon, inv

__all__ = [
    "rref",
    "rank",
    "rank_fraction_free",
    "nullspace",
    "inverse",
    "det",
    "det_expand",
    "ldlt",
    "Echelon",
    "LDLError",
]


class LDLError(ArithmeticError):
    pass


def rref(rows):
    """Reduced row echelon form; returns ``(R, pivot_columns)``."""
    A = [[canon(x) for x in r] for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        f = inv(A[r][c])
        A[r] = [canon(x * f) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                g = A[i][c]
                A[i] = [canon(x - g * y) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def rank_fraction_free(rows) -> int:
    """Bareiss elimination on a rational matrix, rows cleared to integers."""
    M = []
    for r in rows:
        d = 1
        for x in r:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
        M.append([int(Fraction(x) * d) for x in r])
    if not M:
        return 0
    m, n = len(M), len(M[0])
    rk, prev = 0, 1
    for c in range(n):
        p = next((i for i in range(rk, m) if M[i][c]), None)
        if p is None:
            continue
        M[rk], M[p] = M[p], M[rk]
        piv = M[rk][c]
        for i in range(rk + 1, m):
            M[i] = [(piv * M[i][j] - M[i][c] * M[rk][j]) // prev for j in range(n)]
        prev = piv
        rk += 1
        if rk == m:
            break
    return rk


def nullspace(rows, ncols: int | None = None):
    """Basis of ``{x : A x = 0}`` as a list of coefficient lists."""
    if not rows:
        if ncols is None:
            raise ValueError("nullspace of an empty matrix needs ncols")
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    ncols = len(rows[0])
    R, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for i, pc in enumerate(piv):
            v[pc] = canon(-R[i][fcol])
        basis.append(v)
    return basis


def inverse(M):
    n = len(M)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in R]


def det(M):
    """Determinant over a field, by elimination."""
    A = [[canon(x) for x in r] for r in M]
    n = len(A)
    result = 1
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            result = -result
        piv = A[c][c]
        result = canon(result * piv)
        f = inv(piv)
        for i in range(c + 1, n):
            if A[i][c] != 0:
                g = canon(A[i][c] * f)
                A[i] = [canon(x - g * y) for x, y in zip(A[i], A[c])]
    return canon(result)


def det_expand(M, zero=0):
    """Division-free determinant (Laplace over column subsets, memoised).

    Works over any commutative ring, e.g. matrices of :class:`Poly`.
    """
    n = len(M)
    if n == 0:
        return 1
    # minors of the last k rows, keyed by their column set
    level = {(c,): M[n - 1][c] for c in range(n)}
    for k in range(2, n + 1):
        row = M[n - k]
        nxt = {}
        for cols in combinations(range(n), k):
            total = zero
            for pos, c in enumerate(cols):
                a = row[c]
                if a == 0:
                    continue
                sub = level[cols[:pos] + cols[pos + 1:]]
                if sub == 0:
                    continue
                term = a * sub
                total = total + term if pos % 2 == 0 else total - term
            nxt[cols] = total
        level = nxt
    return level[tuple(range(n))]


def ldlt(Q):
    """Congruence ``P Q P^T = L D L^T`` with unit lower-triangular ``L``.

    Returns ``(L, D, perm)``; row ``i`` of ``P`` is ``e_{perm[i]}``.  A zero
    pivot triggers a symmetric swap with a later non-zero diagonal entry.
    """
    n = len(Q)
    A = [[canon(x) for x in r] for r in Q]
    perm = list(range(n))
    L = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    D = []
    for k in range(n):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][i] != 0), None)
            if p is None:
                if any(A[i][j] != 0 for i in range(k, n) for j in range(k, n)):
                    raise LDLError("no non-zero pivot left; matrix is indefinite with zero diagonal")
                D.extend([0] * (n - k))
                break
            A[k], A[p] = A[p], A[k]
            for r in A:
                r[k], r[p] = r[p], r[k]
            perm[k], perm[p] = perm[p], perm[k]
            for j in range(k):
                L[k][j], L[p][j] = L[p][j], L[k][j]
        d = A[k][k]
        D.append(d)
        f = inv(d)
        for i in range(k + 1, n):
            L[i][k] = canon(A[i][k] * f)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = canon(A[i][j] - L[i][k] * A[k][j])
        for i in range(k + 1, n):
            A[i][k] = A[k][i] = 0
    return L, D, perm


class Echelon:
    """Incremental echelon basis of sparse vectors ``{key: scalar}``.

    Pivot of a stored row is its largest key.  ``add`` reports whether the
    vector was new; when it was dependent, the combination of earlier inputs
    it equals is returned so kernels of linear maps come for free.
    """

    def __init__(self, track: bool = True):
        self.rows: dict = {}
        self.track = track
        self.count = 0
        self.relations: list[dict] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec, combo=None):
        vec = {k: canon(v) for k, v in vec.items() if v != 0}
        combo = dict(combo or {})
        heap = [-k for k in vec]
        heapq.heapify(heap)
        while heap:
            k = -heapq.heappop(heap)
            c = vec.get(k)
            if c is None or c == 0:
                continue
            if k not in self.rows:
                heapq.heappush(heap, -k)
                break
            row, rcombo = self.rows[k]
            for kk, v in row.items():
                nv = canon(vec.get(kk, 0) - c * v)
                if nv != 0:
                    if kk not in vec:
                        heapq.heappush(heap, -kk)
                    vec[kk] = nv
                else:
                    vec.pop(kk, None)
            if self.track:
                for t, v in rcombo.items():
                    nv = canon(combo.get(t, 0) - c * v)
                    if nv != 0:
                        combo[t] = nv
                    else:
                        combo.pop(t, None)
        return vec, combo

    def add(self, vec, tag=None):
        """Insert; returns True if independent of what is already stored."""
        if tag is None:
            tag = self.count
        self.count += 1
        vec, combo = self.reduce(vec, {tag: 1} if self.track else None)
        if not vec:
            if self.track:
                self.relations.append(combo)
            return False
        k = max(vec)
        f = inv(vec[k])
        vec = {kk: canon(v * f) for kk, v in vec.items()}
        combo = {t: canon(v * f) for t, v in combo.items()}
        self.rows[k] = (vec, combo)
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]
