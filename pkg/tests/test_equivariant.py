import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from disc_sos.certificates import _ratio
from disc_sos.equivariant import (
    D_r,
    G_invariant,
    G_invariant_naive,
    H,
    gamma,
    generic_tmap,
    induced_action,
    is_zero_wedge,
    kappa,
    minor_count,
    pairing,
    pfaffian,
    tangent_gram_det,
    tangent_matrix,
    tangent_minors,
    tmap,
    tmap_vanishes,
    tstar,
    wedge,
)
from disc_sos.linalg import det
from disc_sos.polyring import VarSet
from disc_sos.symspace import (
    canon_matrix,
    disc_matrix,
    discriminant,
    is_skew,
    is_symmetric,
    j_space,
    mat,
    random_degenerate,
    random_orthogonal,
    random_regular,
    random_skew,
    random_traceless,
    sym_space,
    trace,
    unit,
)

seeds = st.integers(0, 10**6)


def diag(*xs):
    n = len(xs)
    return mat([[xs[i] if i == j else 0 for j in range(n)] for i in range(n)])


def test_H_examples():
    A = diag(1, -1, 0)
    assert (H(1, A) == A).all()
    assert H(2, A).tolist() == [[Fraction(1, 3), 0, 0], [0, Fraction(1, 3), 0], [0, 0, Fraction(-2, 3)]]


@given(seeds, st.integers(3, 5))
def test_H_is_equivariant_and_traceless(seed, n):
    rng = random.Random(seed)
    A = random_traceless(n, rng)
    Q = random_orthogonal(n, rng)
    B = canon_matrix(Q.dot(A).dot(Q.T))
    for i in range(1, n):
        assert trace(H(i, A)) == 0
        assert (canon_matrix(Q.dot(H(i, A)).dot(Q.T)) == H(i, B)).all()


def test_tmap_on_diagonal_matrices():
    assert is_zero_wedge(tmap(diag(2, -4, 2)))
    assert not is_zero_wedge(tmap(diag(1, 2, -3)))
    Q = random_orthogonal(3, random.Random(5))
    assert not is_zero_wedge(tmap(canon_matrix(Q.dot(diag(1, 2, -3)).dot(Q.T))))


def test_generic_tmap_degrees():
    for n in (3, 4):
        for p in generic_tmap(n).values():
            assert not p.terms or (p.is_homogeneous() and p.degree() == n * (n - 1) // 2)
    assert len(generic_tmap(3)) == 10


@pytest.mark.parametrize("n", [3, 4, 5])
def test_tmap_zero_iff_degenerate(n):
    rng = random.Random(n)
    for _ in range(200):
        D = random_degenerate(n, rng)
        R = random_regular(n, rng)
        assert tmap_vanishes(D) and not tmap_vanishes(R)


@pytest.mark.parametrize("n", [3, 4])
def test_rank_test_agrees_with_minors(n):
    rng = random.Random(10 + n)
    for _ in range(20):
        A = random_degenerate(n, rng) if rng.random() < 0.5 else random_traceless(n, rng)
        assert tmap_vanishes(A) == is_zero_wedge(tmap(A))


def test_deeper_strata_vanish():
    assert tmap_vanishes(random_degenerate(5, 3, ties=2))


def _coordinate_action(Q, n):
    S = sym_space(n)
    names = S.vs.names
    cols = []
    for E in S.basis():
        c = S.coords(canon_matrix(Q.dot(E).dot(Q.T)))
        cols.append([c[v] for v in names])
    return [[cols[t][s] for t in range(len(names))] for s in range(len(names))]


@given(seeds)
def test_tmap_equivariance(seed):
    rng = random.Random(seed)
    A = random_traceless(3, rng)
    Q = random_orthogonal(3, rng)
    R = _coordinate_action(Q, 3)
    lhs = tmap(canon_matrix(Q.dot(A).dot(Q.T)))
    assert lhs == induced_action(R, tmap(A), 2)


def test_tstar_cyclic_matrix():
    A = mat([[0, 1, 0, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 0, 1, 0]])
    J = j_space(4)
    assert J.contains(A)
    assert tstar(wedge(4, "x31", "x41", "x42"), 4, "J").eval(J.coords(A)) == 1


def test_tstar_vanishes_on_degenerate_points():
    m = len(sym_space(3).vs)
    polys = [tstar({S: 1}, 3, "real") for S in combinations(range(m), 2)]
    rng = random.Random(2)
    points = [diag(2, -4, 2)] + [random_degenerate(3, rng) for _ in range(20)]
    for A in points:
        c = sym_space(3).coords(A)
        assert all(p.eval(c) == 0 for p in polys)


def test_tstar_is_linear():
    xi = wedge(3, "a", "d", coords="real")
    eta = wedge(3, "e", "f", coords="real")
    both = {**xi, **{k: 3 * v for k, v in eta.items()}}
    assert tstar(both, 3, "real") == tstar(xi, 3, "real") + tstar(eta, 3, "real") * 3
    assert not tstar({}, 3, "real").terms


def test_wedge_sign_convention():
    assert wedge(4, "x41", "x31", "x42") == {k: -v for k, v in wedge(4, "x31", "x41", "x42").items()}
    assert wedge(4, "x31", "x31", "x42") == {}


def test_pairing_alternates():
    xi = wedge(3, "a", "d", coords="real")
    v, w = [1, 2, 3, 4, 5], [0, 1, -1, 2, 7]
    assert pairing(xi, [v, w]) == -pairing(xi, [w, v])
    assert pairing(xi, [v, v]) == 0
    assert pairing(xi, [v, w]) == v[0] * w[2] - v[2] * w[0]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_kappa_matrix_units(n):
    sgn = -1 if n % 4 in (0, 3) else 1
    K = kappa([unit(n, i, i + 1) + unit(n, i + 1, i) for i in range(1, n)])
    assert (K == unit(n, 1, n) + unit(n, n, 1) * sgn).all()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_kappa_symmetry_type(n):
    rng = random.Random(n)
    K = kappa([random_traceless(n, rng) for _ in range(n - 1)])
    assert is_skew(K) if n % 4 in (0, 3) else is_symmetric(K)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_kappa_kills_tmap(n):
    rng = random.Random(20 + n)
    for _ in range(10):
        A = random_traceless(n, rng)
        assert not any(x != 0 for x in kappa([H(k, A) for k in range(1, n)]).flat)


def test_pfaffian_small():
    a = VarSet(["a"]).gens()[0]
    assert pfaffian([[0, a], [-a, 0]]) == a
    # ((0, I), (-I, 0)) of size 4 has Pfaffian -1 = (-1)^(m(m-1)/2), m = 2
    assert pfaffian(mat([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])) == -1
    with pytest.raises(ValueError):
        pfaffian(mat([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]))


@pytest.mark.parametrize("size", [4, 6])
def test_pfaffian_squared_is_det(size):
    rng = random.Random(size)
    for _ in range(50):
        C = random_skew(size, rng)
        assert pfaffian(C) ** 2 == det(C.tolist())


@pytest.mark.parametrize("n", [4, 6])
def test_G_normalization(n):
    args = []
    for i in range(1, n // 2 + 1):
        args.append(unit(n, 2 * i - 1, 2 * i - 1) - unit(n, 2 * i, 2 * i))
        args.append((unit(n, 2 * i - 1, 2 * i) + unit(n, 2 * i, 2 * i - 1)) * Fraction(1, 2))
    assert G_invariant(args) == 1


@given(seeds)
def test_G_alternating_and_matching_formula(seed):
    rng = random.Random(seed)
    ms = [random_traceless(4, rng) for _ in range(4)]
    g = G_invariant(ms)
    assert g == G_invariant_naive(ms)
    i, j = rng.sample(range(4), 2)
    swapped = list(ms)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert G_invariant(swapped) == -g


def test_G_rejects_odd_n():
    with pytest.raises(ValueError):
        G_invariant([random_traceless(3, random.Random(0)) for _ in range(3)])


def test_gamma():
    rng = random.Random(4)
    for _ in range(10):
        A = random_traceless(4, rng)
        assert not any(x != 0 for x in gamma([H(k, A) for k in range(1, 4)]).flat)
    B = gamma([random_traceless(4, rng) for _ in range(3)])
    assert is_symmetric(B) and trace(B) == 0 and any(x != 0 for x in B.flat)


def test_tangent_minor_counts():
    assert len(tangent_minors(3)) == minor_count(3) == 10
    assert len(tangent_minors(4)) == minor_count(4) == 84
    assert len(tangent_minors(3, space="M")) == minor_count(3, space="M") == 20
    with pytest.raises(ValueError):
        tangent_minors(3, 4)


def test_tangent_constant_n3():
    D = D_r(3)
    assert D == discriminant(3) * 8
    assert tangent_gram_det(3) == D


def test_tangent_constant_n4():
    assert _ratio(D_r(4), discriminant(4)) == 64


def test_tangent_minors_n5_by_evaluation():
    # too large to expand; compare det(X^T W X) with delta at random points
    rows, metric, _ = tangent_matrix(5)
    S = sym_space(5)
    rng = random.Random(0)
    for k in range(4):
        A = random_degenerate(5, rng) if k == 0 else random_traceless(5, rng)
        pt = S.coords(A)
        X = [[e.eval(pt) for e in r] for r in rows]
        G = [[sum(X[s][i] * X[s][j] * metric[s] for s in range(len(X))) for j in range(10)] for i in range(10)]
        assert det(G) == 1024 * disc_matrix(A)
