import json
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from disc_sos.exactalg import I, sqrt
from disc_sos.polyring import LaurentPoly, Poly, VarSet, bombieri, monomials
from disc_sos.symspace import cayley, random_skew
from strategies import VS3, forms, polys

x, y, z = VS3.gens()


def test_basic_arithmetic():
    p = (x + y) ** 2
    assert p == x * x + 2 * x * y + y * y
    assert str(p) == "x^2 + 2*x*y + y^2"
    assert (x - x).is_zero()
    assert p.degree() == 2 and p.is_homogeneous()
    assert (p + 1).is_homogeneous() is False


def test_tower_coefficients():
    p = x * sqrt(2) + y * I
    assert not p.is_real()
    assert p.re() == x * sqrt(2)
    assert p.im() == y
    assert p * p.conj() == 2 * x * x + y * y


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Poly.zero(VS3)


@given(polys())
def test_square_matches_product(p):
    assert p.square() == p * p
    assert p ** 3 == p * p * p


@given(polys(), polys())
def test_degree_of_product(p, q):
    if p.terms and q.terms:
        assert (p * q).degree() == p.degree() + q.degree()


@given(polys(), polys())
def test_leibniz(p, q):
    assert (p * q).diff("x") == p.diff("x") * q + p * q.diff("x")


@given(polys(), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_eval_is_a_homomorphism(p, a, b, c):
    pt = {"x": a, "y": b, "z": c}
    q = p * p + 3 * p
    v = p.eval(pt)
    assert q.eval(pt) == v * v + 3 * v


@given(polys())
def test_substitute_then_eval(p):
    vs = VarSet(["u", "v"])
    u, v = vs.gens()
    img = p.substitute({"x": u + v, "y": u - v, "z": 2 * u}, vs)
    pt = {"u": 2, "v": -1}
    assert img.eval(pt) == p.eval({"x": 1, "y": 3, "z": 4})


@given(polys(coeffs=st.sampled_from([1, -2, Fraction(3, 7), sqrt(2), I, 1 + sqrt(3) * I])))
def test_json_round_trip(p):
    data = json.loads(json.dumps(p.to_json()))
    assert Poly.from_json(data) == p


def test_from_json_rejects_unknown_variables():
    with pytest.raises(ValueError):
        Poly.from_json({"vars": ["x"], "terms": [{"coeff": "1", "mono": {"q": 1}}]})


def test_monomial_count():
    assert len(monomials(VS3, 3)) == 10
    assert len(monomials(VarSet(list("abcde")), 3)) == 35


def test_bombieri_values():
    # <x^a, x^a> = a!/d!
    assert bombieri(x * x, x * x) == 1
    assert bombieri(x * y, x * y) == Fraction(1, 2)
    assert bombieri(x * y, x * x) == 0
    # weighted version for the form 2x^2 + y^2 + ...
    assert bombieri(x * x, x * x, [2, 1, 1]) == Fraction(1, 4)


def _rotate(p, Q):
    names = VS3.names
    gens = VS3.gens()
    images = {}
    for i, name in enumerate(names):
        img = Poly.zero(VS3)
        for j in range(3):
            img = img + gens[j] * Q[i, j]
        images[name] = img
    return p.substitute(images, VS3)


@given(forms(), forms(), st.integers(0, 10_000))
def test_bombieri_orthogonal_invariance(p, q, seed):
    Q = cayley(random_skew(3, random.Random(seed)))
    assert bombieri(_rotate(p, Q), _rotate(q, Q)) == bombieri(p, q)


@given(forms())
def test_bombieri_positive(p):
    assume(p.terms)
    assert bombieri(p, p) > 0


def test_laurent_poly():
    chi = LaurentPoly.from_weights([(1,), (0,), (-1,)], 1)
    assert str(chi) == "t+1+t^-1"
    assert chi.dimension() == 3
    sq = chi * chi
    assert sq.coefficient((0,)) == 3
    assert (sq - chi * chi).terms == {}
    assert chi.dual() == chi
