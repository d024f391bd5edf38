import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from disc_sos.certificates import (
    BUILTIN_NAMES,
    Certificate,
    PipelineError,
    builtin,
    generate_from_module,
    generate_from_span,
    generate_n3_five,
    generate_n4_seven,
    normalize_term,
    quick_reject,
    rank_exact,
    rank_matrix,
    specialize,
    verify,
    weighted_sum,
)
from disc_sos.equivariant import tangent_minors
from disc_sos.exactalg import sqrt
from disc_sos.reptheory import vanishing_forms
from disc_sos.symspace import discriminant, random_degenerate, sym_space

a, b, d, e, f = sym_space(3).vs.gens()


@pytest.fixture(scope="module")
def seven():
    return generate_n4_seven()


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_verify(name):
    cert = builtin(name)
    rep = verify(cert)
    assert rep.valid, rep.problems
    assert rep.summary() == f"valid, c=1, {cert.term_count} terms"
    assert not quick_reject(cert)


def test_builtin_weights():
    assert [w for w, _ in builtin("domokos3-five").terms] == [27, 1, 1, 4, 4]
    assert [w for w, _ in builtin("kummer3-seven").terms] == [15, 15, 15, 1, 1, 1, 1]
    assert builtin("two-by-two").term_count == 2


def test_printed_terms():
    five = builtin("domokos3-five")
    assert five.terms[0][1] == a * e * f - b * e * f - d * e * e + d * f * f
    kummer = builtin("kummer3-seven")
    assert kummer.terms[0][1] == a * d * e + 2 * b * d * e - d * d * f + e * e * f


def test_four_square_offdiagonal():
    lhs = (27 * (-d * e * e + d * f * f) ** 2 + (-2 * d ** 3 + d * e * e + d * f * f) ** 2
           + 4 * (-2 * d * d * e + e ** 3 + e * f * f) ** 2 + 4 * (2 * d * d * f - e * e * f - f ** 3) ** 2)
    s = d * d + e * e + f * f
    assert lhs == 4 * s ** 3 - 108 * d * d * e * e * f * f
    cert = builtin("domokos3-four-offdiag")
    assert weighted_sum(cert.terms) == lhs


def test_kummer_specialization():
    spec = specialize(builtin("kummer3-seven"), {"a": 0, "b": 0})
    six = builtin("lax3-six-offdiag")
    assert spec.terms == six.terms
    assert verify(spec).valid


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("nope")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_json_round_trip(name):
    cert = builtin(name)
    again = Certificate.from_json(json.loads(cert.dumps()))
    assert again == cert


def _perturb(cert, k, delta):
    terms = list(cert.terms)
    w, g = terms[k]
    key = next(iter(g.terms))
    bumped = g + type(g)(g.vs, {g.vs.unpack(key): delta})
    terms[k] = (w, bumped)
    return Certificate(cert.n, terms, cert.constant, cert.provenance, cert.specialize)


def test_perturbed_certificate_is_invalid():
    bad = _perturb(builtin("domokos3-five"), 0, 1)
    rep = verify(bad)
    assert not rep.valid and rep.difference.terms
    assert quick_reject(bad)


@given(st.sampled_from(BUILTIN_NAMES), st.integers(0, 3), st.sampled_from([1, -1, Fraction(1, 3)]), st.integers(0, 99))
@settings(max_examples=20)
def test_quick_check_is_a_sound_rejector(name, k, delta, seed):
    cert = builtin(name)
    k = k % cert.term_count
    bad = _perturb(cert, k, delta)
    if quick_reject(bad, seed=seed):
        assert not verify(bad).valid


def test_sign_and_degree_checks():
    cert = builtin("domokos3-five")
    neg = Certificate(3, [(-1, cert.terms[0][1])] + cert.terms[1:], 1)
    assert any("positive" in p for p in verify(neg).problems)
    low = Certificate(3, [(1, a * b)] + cert.terms[1:], 1)
    assert any("homogeneous" in p for p in verify(low).problems)
    cplx = Certificate(3, cert.terms, sqrt(-1))
    assert not verify(cplx).valid


def test_threads_give_the_same_answer():
    cert = builtin("kummer3-seven")
    assert verify(cert, threads=2).valid
    assert weighted_sum(cert.terms, 2) == weighted_sum(cert.terms, 1)


def test_normalize_term():
    w, g = normalize_term(Fraction(1, 3), (a * 6 - d * 4) * sqrt(2) * -1)
    assert (w, g) == (Fraction(1, 3) * 2 * 4, 3 * a - 2 * d)


def test_generate_n3_five():
    cert = generate_n3_five()
    ref = builtin("domokos3-five")
    assert verify(cert).valid and cert.term_count == 5
    assert cert.info["constant_before_scaling"] == Fraction(1, 108)
    for (w1, f1), (w2, f2) in zip(cert.terms, ref.terms):
        assert w1 == w2 and f1 in (f2, -f2)


def _check_invariants(cert, samples=100):
    deg = cert.n * (cert.n - 1) // 2
    rng = random.Random(1)
    S = sym_space(cert.n)
    points = [S.coords(random_degenerate(cert.n, rng)) for _ in range(samples)]
    for w, g in cert.terms:
        assert w > 0
        assert g.is_homogeneous() and g.degree() == deg
        assert all(g.eval(p) == 0 for p in points)


def test_gram_route_on_vanishing_cubics():
    cert = generate_from_module(vanishing_forms(3, 3), 3)
    assert verify(cert).valid and cert.term_count == 7
    _check_invariants(cert)


def test_gram_route_is_basis_independent():
    basis = vanishing_forms(3, 3)
    rng = random.Random(7)
    mixed = []
    for i in range(7):
        g = basis[i] * 0
        for h in basis:
            g = g + h * rng.randint(-3, 3)
        mixed.append(g + basis[i] * 10)
    c1 = generate_from_module(basis, 3)
    c2 = generate_from_module(mixed, 3)
    assert verify(c1).valid and verify(c2).valid
    assert weighted_sum(c1.terms) == weighted_sum(c2.terms) == discriminant(3)
    ratio = c2.info["constant_before_scaling"] / c1.info["constant_before_scaling"]
    assert ratio == 1


def test_gram_route_on_tangent_minors():
    minors = [m for *_, m in tangent_minors(3)]
    cert = generate_from_span(minors, 3)
    assert verify(cert).valid
    assert cert.term_count == cert.info["rank"] == 7


def test_gram_route_rejects_a_non_invariant_span():
    # the five printed squares do not span an SO_3-stable subspace
    polys = [g for _, g in builtin("domokos3-five").terms]
    with pytest.raises(PipelineError) as err:
        generate_from_module(polys, 3)
    assert err.value.step == "constant"


def test_gram_route_rejects_dependent_basis():
    basis = vanishing_forms(3, 3)
    with pytest.raises(ValueError):
        generate_from_module(basis + [basis[0] * 2], 3)


def test_generate_n4_seven(seven):
    rep = verify(seven)
    assert rep.valid and seven.term_count == 7
    assert seven.info["real_form_dimension"] == 7
    _check_invariants(seven, samples=20)
    again = Certificate.from_json(json.loads(seven.dumps()))
    assert verify(again).valid


def test_mu_upper_bounds(seven):
    best = {2: builtin("two-by-two"), 3: builtin("domokos3-five"), 4: seven}
    assert {n: c.term_count for n, c in best.items()} == {2: 2, 3: 5, 4: 7}


@pytest.mark.parametrize("a0,want", [(Fraction(-1, 5), 5), (Fraction(1, 3), 5), (Fraction(1, 4), 6), (0, 7), (Fraction(2, 7), 7)])
def test_rank_matrix(a0, want):
    assert rank_exact(rank_matrix(0, 0, a0, 0, 0)) == want


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=5, max_size=5))
def test_rank_matrix_symmetric_and_at_least_five(a):
    M = rank_matrix(*a)
    assert all(M[i][j] == M[j][i] for i in range(7) for j in range(7))
    assert rank_exact(M) >= 5
