"""Exact scalar/polynomial kernel: frozen values plus algebraic properties."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from anticanon.exact import (
    ExactScalar,
    Poly,
    RatFunc,
    exact_divide,
    format_poly,
    grlex_key,
    poly_det,
    poly_det_cofactor,
    poly_divmod,
    poly_gcd,
    ratmat_inverse,
    squarefree_decompose,
    squarefree_part,
)
from anticanon.errors import SingularMatrix
from anticanon.polyparse import parse_poly, parse_scalar


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


def test_scalar_arithmetic_frozen():
    a = ExactScalar(Fraction(1, 2), Fraction(3))
    b = ExactScalar(2, -1)
    assert (a + b) == ExactScalar(Fraction(5, 2), 2)
    assert (a * b) == ExactScalar(4, Fraction(11, 2))
    assert b.conjugate() == ExactScalar(2, 1)
    assert b.abs2() == Fraction(5)
    assert (b * b.inverse()) == ExactScalar(1)


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        ExactScalar(0.5)
    with pytest.raises(TypeError):
        ExactScalar(1) * 0.5


def test_scalar_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        ExactScalar(0).inverse()


scalars = st.builds(
    ExactScalar,
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
)


@given(scalars, scalars, scalars)
@settings(max_examples=60, deadline=None)
def test_scalar_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@given(scalars)
@settings(max_examples=40, deadline=None)
def test_scalar_inverse_roundtrip(a):
    if a == ExactScalar(0):
        return
    assert a * a.inverse() == ExactScalar(1)


# ---------------------------------------------------------------------------
# polynomials: construction and normalization
# ---------------------------------------------------------------------------


def test_poly_drops_unused_variables():
    p = parse_poly("z2^2 + 1", variables={"z1", "z2"})
    assert p.vars == ("z2",)


def test_poly_natural_variable_order():
    p = parse_poly("z10 + z2")
    assert p.vars == ("z2", "z10")
    assert str(p) == "z2 + z10"


def test_poly_str_frozen_examples():
    assert str(parse_poly("(1+i)*x*y - i*y^2")) == "(1+i)*x*y - i*y^2"
    assert str(parse_poly("2i")) == "2*i"
    assert str(Poly.zero()) == "0"
    assert str(parse_poly("x - x")) == "0"


@st.composite
def small_polys(draw, var_names=("x", "y")):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        expo = tuple(draw(st.integers(0, 3)) for _ in var_names)
        terms[expo] = draw(scalars)
    return Poly(terms, var_names)


@given(small_polys())
@settings(max_examples=60, deadline=None)
def test_poly_format_parse_roundtrip(p):
    assert parse_poly(str(p)) == p


@given(small_polys(), small_polys(), small_polys())
@settings(max_examples=60, deadline=None)
def test_poly_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p


@given(small_polys(), small_polys())
@settings(max_examples=40, deadline=None)
def test_poly_degree_of_product(p, q):
    if p.is_zero() or q.is_zero():
        assert (p * q).is_zero()
    else:
        assert (p * q).total_degree() == p.total_degree() + q.total_degree()


def test_grlex_orders_by_total_degree_then_tuple():
    assert grlex_key((0, 2)) < grlex_key((3, 0))
    assert grlex_key((1, 1)) < grlex_key((2, 0))


def test_derivative_and_eval():
    p = parse_poly("x^2*y + 3*x")
    assert str(p.derivative("x")) == "2*x*y + 3"
    val = p.eval_exact({"x": ExactScalar(2), "y": ExactScalar(0, 1)})
    assert val == ExactScalar(6, 4)
    assert p.eval_complex({"x": 2.0, "y": 1j}) == pytest.approx(6 + 4j)


def test_substitute_composes():
    p = parse_poly("x^2 + y")
    q = p.substitute({"x": parse_poly("u + 1"), "y": parse_poly("u")})
    assert q == parse_poly("u^2 + 3*u + 1")


# ---------------------------------------------------------------------------
# division, gcd, squarefree structure
# ---------------------------------------------------------------------------


def test_divmod_and_exact_divide():
    num = parse_poly("x^2 - y^2")
    den = parse_poly("x - y")
    q, r = poly_divmod(num, den)
    assert r.is_zero() and q == parse_poly("x + y")
    assert exact_divide(num, den) == q
    _q2, r2 = poly_divmod(parse_poly("x^2 + 1"), den)
    assert not r2.is_zero()


def test_gcd_frozen_examples():
    g = poly_gcd(parse_poly("z2^2*z1"), parse_poly("z2^3"))
    assert g.monic() == parse_poly("z2^2")
    g2 = poly_gcd(parse_poly("x^2 - 1"), parse_poly("x^2 - 2*x + 1"))
    assert g2.monic() == parse_poly("x - 1")
    assert poly_gcd(parse_poly("x"), parse_poly("y")).is_constant()


@given(small_polys(), small_polys(), small_polys())
@settings(max_examples=25, deadline=None)
def test_gcd_divides_both_arguments(p, q, m):
    pm, qm = p * m, q * m
    if pm.is_zero() and qm.is_zero():
        return
    g = poly_gcd(pm, qm)
    assert not g.is_zero()
    if not pm.is_zero():
        assert poly_divmod(pm, g)[1].is_zero()
    if not qm.is_zero():
        assert poly_divmod(qm, g)[1].is_zero()
    if not m.is_zero() and not pm.is_zero() and not qm.is_zero():
        assert poly_divmod(g, m)[1].is_zero()


def test_squarefree_decomposition_frozen():
    p = parse_poly("x^3 - 2*x^2 + x")       # x * (x-1)^2
    scale, factors = squarefree_decompose(p)
    assert scale == ExactScalar(1)
    assert [(str(f), m) for f, m in factors] == [("x", 1), ("x - 1", 2)]

    cube = parse_poly("z2^3")
    _s, fs = squarefree_decompose(cube)
    assert [(str(f), m) for f, m in fs] == [("z2", 3)]

    assert str(squarefree_part(parse_poly("x^2*y^3"))) == "x*y"


@given(small_polys(var_names=("x",)), st.integers(1, 3))
@settings(max_examples=25, deadline=None)
def test_squarefree_reassembles(p, mult):
    if p.is_zero() or p.is_constant():
        return
    target = p ** mult
    scale, factors = squarefree_decompose(target)
    rebuilt = Poly.const(scale)
    for f, m in factors:
        rebuilt = rebuilt * f ** m
    assert rebuilt == target
    for f, _m in factors:
        assert poly_gcd(f, f.derivative(f.vars[0])).is_constant()


# ---------------------------------------------------------------------------
# determinants and rational matrices
# ---------------------------------------------------------------------------


def _mat(rows):
    return [[parse_poly(e) for e in row] for row in rows]


def test_poly_det_frozen():
    m = _mat([["z2", "0"], ["z1", "z2"]])
    assert poly_det(m) == parse_poly("z2^2")
    m3 = _mat([["z2", "0", "0"], ["z1", "z2", "0"], ["0", "z1", "z2"]])
    assert poly_det(m3) == parse_poly("z2^3")


@given(st.lists(st.lists(small_polys(), min_size=3, max_size=3),
                min_size=3, max_size=3))
@settings(max_examples=20, deadline=None)
def test_bareiss_matches_cofactor(m):
    assert poly_det(m) == poly_det_cofactor(m)


def test_ratmat_inverse_frozen():
    m = [[RatFunc(parse_poly("1")), RatFunc(parse_poly("0"))],
         [RatFunc(parse_poly("x")), RatFunc(parse_poly("1"))]]
    inv = ratmat_inverse(m)
    assert str(inv[1][0]) == "-x"
    ident = [[sum((m[i][k] * inv[k][j] for k in range(2)),
                  RatFunc(Poly.zero())) for j in range(2)] for i in range(2)]
    assert str(ident[0][0]) == "1" and str(ident[0][1]) == "0"


def test_ratmat_inverse_singular():
    m = [[RatFunc(parse_poly("x")), RatFunc(parse_poly("x"))],
         [RatFunc(parse_poly("1")), RatFunc(parse_poly("1"))]]
    with pytest.raises(SingularMatrix):
        ratmat_inverse(m)


def test_ratfunc_reduces_and_derivative():
    f = RatFunc(parse_poly("x^2 - 1"), parse_poly("x - 1"))
    assert str(f) == "x + 1"
    g = RatFunc(parse_poly("1"), parse_poly("x"))
    assert str(g.derivative("x")) == "(-1)/(x^2)"


def test_parse_scalar():
    assert parse_scalar("1+i") == ExactScalar(1, 1)
    assert parse_scalar("-3/2") == ExactScalar(Fraction(-3, 2))
    with pytest.raises(Exception):
        parse_scalar("x + 1")
