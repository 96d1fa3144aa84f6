"""Property-based checks of the algebraic invariants."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mckayfix.cyclo import get_field
from mckayfix.hilb import alpha_image
from mckayfix.poly import Poly, act
from mckayfix.sod import counts_from_geometry, exchange_matches_reality, sod_counts
from oracles import eval_numeric, mat_to_numpy, numeric_act, to_complex
from conftest import context, locus

CONDUCTORS = (4, 8, 12, 20, 24, 40)
GEOMETRY_CASES = [("G12", None), ("G13", None), ("G22", None),
                  ("G2mm2", 3), ("G2mm2", 4), ("G2mm2", 5), ("G2mm2", 6)]
ALL_CASES = GEOMETRY_CASES + [("Gmm2", 3), ("Gmm2", 4)]

small = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def field_elements(draw, conductor: int, nonzero: bool = False):
    fld = get_field(conductor)
    coeffs = draw(st.lists(small, min_size=fld.degree, max_size=fld.degree))
    a = fld.from_coefficients(coeffs)
    if nonzero and a.is_zero():
        a = a + 1
    return a


@st.composite
def triples(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    return tuple(draw(field_elements(n)) for _ in range(3)) + (draw(field_elements(n, nonzero=True)),)


@settings(max_examples=1000, deadline=None)
@given(triples())
def test_field_axioms(t):
    a, b, c, u = t
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert u * u.inv() == 1
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert a - a == 0 and a.conj().conj() == a


@settings(max_examples=1000, deadline=None)
@given(st.sampled_from(CONDUCTORS), st.integers(-100, 100), st.integers(-100, 100))
def test_roots_of_unity_multiply(n, j, k):
    fld = get_field(n)
    assert fld.root_of_unity(j) * fld.root_of_unity(k) == fld.root_of_unity(j + k)
    assert fld.root_of_unity(j) ** n == 1


@settings(max_examples=300, deadline=None)
@given(triples())
def test_field_against_complex_embedding(t):
    a, b, _, u = t
    assert abs(to_complex(a * b) - to_complex(a) * to_complex(b)) < 1e-6
    assert abs(to_complex(a / u) - to_complex(a) / to_complex(u)) < 1e-6
    assert abs(to_complex(a.conj()) - to_complex(a).conjugate()) < 1e-9


def random_poly(draw, fld, max_deg: int = 5) -> Poly:
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)),
        st.integers(-4, 4).filter(bool), min_size=1, max_size=5))
    return Poly(fld, {(i, j, 0): c for (i, j), c in terms.items()})


@pytest.mark.parametrize("name,m", ALL_CASES)
def test_action_homomorphism(name, m):
    ctx = context(name, m)
    elems = ctx.G.elements
    fld = ctx.case.field

    @settings(max_examples=200, deadline=None, suppress_health_check=list(HealthCheck))
    @given(st.data())
    def check(data):
        g = elems[data.draw(st.integers(0, len(elems) - 1))]
        h = elems[data.draw(st.integers(0, len(elems) - 1))]
        f1 = random_poly(data.draw, fld)
        f2 = random_poly(data.draw, fld, 3)
        assert act(g * h, f1) == act(g, act(h, f1))
        assert act(g, f1 * f2) == act(g, f1) * act(g, f2)
        assert act(g, f1 + f2) == act(g, f1) + act(g, f2)

    check()


@pytest.mark.parametrize("name,m", [("G12", None), ("G2mm2", 3)])
def test_action_matches_numeric_oracle(name, m):
    ctx = context(name, m)
    elems = ctx.G.elements
    fld = ctx.case.field

    @settings(max_examples=50, deadline=None, suppress_health_check=list(HealthCheck))
    @given(st.data())
    def check(data):
        g = elems[data.draw(st.integers(0, len(elems) - 1))]
        f = random_poly(data.draw, fld, 4)
        x0, y0 = complex(0.3, -1.1), complex(-0.7, 0.4)
        got = eval_numeric(act(g, f), x0, y0)
        want = numeric_act(mat_to_numpy(g), f, x0, y0)
        assert abs(got - want) < 1e-6 * max(1.0, abs(want))

    check()


@pytest.mark.parametrize("name,m", GEOMETRY_CASES)
def test_alpha_squared_preserves_modules(name, m):
    ctx = context(name, m)
    for o in locus(name, m).curves:
        spans = [o.model.ambient] + [p.span for p in o.model.points]
        for s in spans:
            assert alpha_image(alpha_image(s, ctx.alpha), ctx.alpha) == s


@pytest.mark.parametrize("name,m", GEOMETRY_CASES)
def test_exchange_is_symmetric(name, m):
    rep = locus(name, m)
    kinds = {o.label: o.result for o in rep.curves}
    for label, res in kinds.items():
        if res.kind == "exchanged":
            assert kinds[res.partner].kind == "exchanged" and kinds[res.partner].partner == label


@pytest.mark.parametrize("name,m", GEOMETRY_CASES)
def test_exchanged_iff_character_not_real(name, m):
    ctx = context(name, m)
    assert exchange_matches_reality(locus(name, m).curves, ctx.curve_irreps, ctx.ht) == []


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 3), st.integers(0, 12), st.data())
def test_count_bookkeeping(r, C, data):
    X = data.draw(st.integers(0, C // 2))
    P = data.draw(st.integers(0, C - 2 * X))
    c = counts_from_geometry(r, P, C, X)
    assert c.n - 2 * c.P == c.C - c.X >= 0
    assert c.total == c.n + r + 1


@pytest.mark.parametrize("name,m", GEOMETRY_CASES)
def test_count_bookkeeping_on_cases(name, m):
    c = sod_counts(len(context(name, m).case.branch_factors), locus(name, m).curves)
    assert c.n - 2 * c.P == c.C - c.X >= 0
