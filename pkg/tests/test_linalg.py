from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from disc_sos.exactalg import sqrt
from disc_sos.linalg import Echelon, LDLError, det, det_expand, inverse, ldlt, nullspace, rank, rank_fraction_free

small = st.integers(-6, 6)
square = st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n))


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


@given(square)
def test_det_routes_agree(M):
    assert det(M) == det_expand(M)


@given(square)
def test_rank_routes_agree(M):
    assert rank(M) == rank_fraction_free(M)
    assert (rank(M) == len(M)) == (det(M) != 0)


@given(square)
def test_inverse(M):
    if det(M) != 0:
        n = len(M)
        assert matmul(M, inverse(M)) == [[int(i == j) for j in range(n)] for i in range(n)]


@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_nullspace(rows):
    ker = nullspace(rows, 5)
    assert len(ker) == 5 - rank(rows)
    for v in ker:
        assert all(sum(r[j] * v[j] for j in range(5)) == 0 for r in rows)


@given(square)
def test_ldlt_reconstructs(M):
    n = len(M)
    Q = matmul(M, [list(r) for r in zip(*M)])  # symmetric PSD
    Q = [[Q[i][j] + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    L, D, perm = ldlt(Q)
    P = [[Q[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    LD = [[L[i][k] * D[k] for k in range(n)] for i in range(n)]
    assert matmul(LD, [list(r) for r in zip(*L)]) == P
    assert all(d > 0 for d in D)


def test_ldlt_permutes_past_zero_pivot():
    Q = [[0, 0, 0], [0, 2, 1], [0, 1, 3]]
    L, D, perm = ldlt(Q)
    assert perm[0] != 0
    assert sorted(D) == [0, 2, Fraction(5, 2)]


def test_ldlt_gives_up_on_zero_diagonal():
    with pytest.raises(LDLError):
        ldlt([[0, 1], [1, 0]])


def test_tower_entries():
    r = sqrt(2)
    assert det([[r, 1], [1, r]]) == 1
    assert rank([[r, 2], [1, r]]) == 1


def test_echelon_relations():
    ech = Echelon(track=True)
    assert ech.add({1: 1, 2: 1}, "a")
    assert ech.add({2: 1, 3: 1}, "b")
    assert not ech.add({1: 2, 2: 4, 3: 2}, "d")
    rel = ech.relations[-1]
    assert rel == {"d": 1, "a": -2, "b": -2}


def test_det_expand_of_polynomials():
    from disc_sos.polyring import VarSet

    x, y = VarSet(["x", "y"]).gens()
    assert det_expand([[x, y], [y, x]], x * 0) == x * x - y * y


def test_singular_inverse():
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])
