"""Shared hypothesis strategies."""
from fractions import Fraction

from hypothesis import strategies as st

from disc_sos.exactalg import I, canon, sqrt
from disc_sos.polyring import Poly, VarSet

RADICALS = [1, 2, 3, 6]

rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def tower(draw, real=False):
    """Elements of Q(i, sqrt2, sqrt3) with small coefficients."""
    total = 0
    for m in RADICALS:
        r = 1 if m == 1 else sqrt(m)
        total = total + draw(rationals) * r
        if not real:
            total = total + draw(rationals) * r * I
    return canon(total)


VS3 = VarSet(["x", "y", "z"])


@st.composite
def polys(draw, vs=VS3, max_terms=5, max_deg=3, coeffs=None):
    if coeffs is None:
        coeffs = st.integers(-5, 5)
    out = Poly.zero(vs)
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in vs.names)
        out = out + Poly(vs, {exps: draw(coeffs)})
    return out


@st.composite
def forms(draw, vs=VS3, degree=3, max_terms=6):
    from disc_sos.polyring import monomials

    monos = monomials(vs, degree)
    out = Poly.zero(vs)
    for _ in range(draw(st.integers(1, max_terms))):
        out = out + Poly(vs, {draw(st.sampled_from(monos)): draw(st.integers(-5, 5))})
    return out
