"""Vector fields, brackets, localization, and span/subalgebra diagnostics."""

import pytest
from hypothesis import given, settings, strategies as st

from anticanon.errors import ChartMismatch, DegenerateBasis
from anticanon.exact import ExactScalar, Poly
from anticanon.fields import (
    Chart,
    FieldBasis,
    ProjectiveBasis,
    VectorField,
    affine_field,
    bracket,
    euler_field,
    projective_field,
    span_membership,
)
from anticanon.polyparse import parse_poly


def _vf(*components):
    return affine_field(len(components), components)


def test_chart_variables():
    assert Chart.affine(3).variables == ("z1", "z2", "z3")
    assert Chart.projective(2, 0).variables == ("z1", "z2")
    assert Chart.projective(2, 1).variables == ("z0", "z2")
    with pytest.raises(ValueError):
        Chart.projective(2, 3)


def test_apply_to_is_derivation():
    v = _vf("z1", "z2^2")
    f = parse_poly("z1*z2")
    g = parse_poly("z1 + z2")
    lhs = v.apply_to(f * g)
    rhs = v.apply_to(f) * g + f * v.apply_to(g)
    assert lhs == rhs


def test_bracket_frozen_example():
    v = _vf("1", "0")            # d/dz1
    w = _vf("0", "z1^2")         # z1^2 d/dz2
    b = bracket(v, w)
    assert b.components == (Poly.zero(), parse_poly("2*z1"))


def test_bracket_chart_mismatch():
    v = _vf("1", "0")
    w = affine_field(3, ("1", "0", "0"))
    with pytest.raises(ChartMismatch):
        bracket(v, w)


coeffs = st.sampled_from(["0", "1", "i", "z1", "z2", "z1*z2", "z1^2", "1+z2"])
fields2 = st.builds(lambda a, b: _vf(a, b), coeffs, coeffs)


@given(fields2, fields2)
@settings(max_examples=40, deadline=None)
def test_bracket_antisymmetry(v, w):
    assert bracket(v, w).components == (-bracket(w, v)).components


@given(fields2, fields2, fields2)
@settings(max_examples=30, deadline=None)
def test_bracket_jacobi_identity(u, v, w):
    total = (bracket(u, bracket(v, w)) + bracket(v, bracket(w, u))
             + bracket(w, bracket(u, v)))
    assert total.is_zero()


# ---------------------------------------------------------------------------
# projective fields and localization
# ---------------------------------------------------------------------------


def test_euler_field_localizes_to_zero():
    e = euler_field(2)
    for i in range(3):
        assert e.localize(i).is_zero()


def test_euler_shift_does_not_change_localization():
    v = projective_field(2, ("z1", "0", "0"))
    e = euler_field(2)
    shifted = projective_field(
        2, tuple(v.forms[j] + e.forms[j] for j in range(3)))
    for i in range(3):
        assert v.localize(i).components == shifted.localize(i).components


def test_localization_frozen_toric():
    v1 = projective_field(2, ("0", "z1", "0"))
    v2 = projective_field(2, ("0", "0", "z2"))
    u0_1, u0_2 = v1.localize(0), v2.localize(0)
    assert u0_1.components == (parse_poly("z1"), Poly.zero())
    assert u0_2.components == (Poly.zero(), parse_poly("z2"))


def test_chart_overlap_transition():
    """Localizations to different charts agree under the coordinate change.

    On the overlap U0 /\\ U1 the U0 coordinates (a, b) = (z1/z0, z2/z0) and
    the U1 coordinates (c, d) = (z0/z1, z2/z1) satisfy c = 1/a, d = b/a; a
    field (A(a,b), B(a,b)) on U0 pushes to
    (-A/a^2, B/a - A*b/a^2) in U1 coordinates.
    """
    v = projective_field(2, ("z1 + z2", "2*z0", "z0 - z2"))
    u0 = v.localize(0)       # components in z1, z2 (ratios over z0)
    u1 = v.localize(1)       # components in z0, z2 (ratios over z1)

    import random

    rng = random.Random(7)
    for _ in range(20):
        a = complex(rng.uniform(0.5, 2), rng.uniform(0.5, 2))
        b = complex(rng.uniform(0.5, 2), rng.uniform(0.5, 2))
        A = u0.components[0].eval_complex({"z1": a, "z2": b})
        B = u0.components[1].eval_complex({"z1": a, "z2": b})
        c, d = 1 / a, b / a
        C = u1.components[0].eval_complex({"z0": c, "z2": d})
        D = u1.components[1].eval_complex({"z0": c, "z2": d})
        assert C == pytest.approx(-A / a ** 2, rel=1e-12)
        assert D == pytest.approx(B / a - A * b / a ** 2, rel=1e-12)


def test_projective_field_requires_linear_forms():
    with pytest.raises(ValueError):
        projective_field(2, ("z1^2", "0", "0"))


# ---------------------------------------------------------------------------
# span membership and certificates
# ---------------------------------------------------------------------------


def test_span_membership_positive():
    basis = [_vf("z1", "0"), _vf("0", "z2")]
    target = _vf("2*z1", "-3*z2")
    res = span_membership(target, basis)
    assert res.in_span
    assert res.coefficients == (ExactScalar(2), ExactScalar(-3))


def test_span_membership_certificate_names_monomial():
    basis = [_vf("z1", "0"), _vf("0", "z2")]
    target = _vf("0", "z1")
    res = span_membership(target, basis)
    assert not res.in_span
    assert "d2" in res.certificate and "z1" in res.certificate


def test_span_handles_same_monomial_in_different_components():
    basis = [_vf("z1", "0"), _vf("z1 + z2", "0")]
    target = _vf("z2", "0")
    res = span_membership(target, basis)
    assert res.in_span
    assert res.coefficients == (ExactScalar(-1), ExactScalar(1))


# ---------------------------------------------------------------------------
# bases: rank, degeneracy, witnesses
# ---------------------------------------------------------------------------


def test_degenerate_basis_detected():
    basis = FieldBasis([_vf("z1", "0"), _vf("2*z1", "0")])
    assert basis.generic_rank == 1
    with pytest.raises(DegenerateBasis):
        basis.require_nondegenerate()


def test_sigma_frozen_triangular():
    basis = FieldBasis([_vf("1", "0"), _vf("z1", "1")])
    sig = basis.sigma
    assert [[str(e) for e in row] for row in sig] == [["1", "0"], ["-z1", "1"]]


def test_abelian_and_subalgebra_witnesses():
    toric = FieldBasis([_vf("z1", "0"), _vf("0", "z2")])
    assert toric.is_abelian() and toric.is_subalgebra()

    shear = FieldBasis([_vf("1", "0"), _vf("z1", "1")])
    assert not shear.is_abelian()
    assert shear.is_subalgebra()
    a, b, br = shear.abelian_witness()
    assert (a, b) == (0, 1) and str(br) == "d1"

    bad = FieldBasis([_vf("1", "0"), _vf("0", "z1^2")])
    w = bad.subalgebra_witness()
    assert w is not None
    a, b, br, cert = w
    assert (a, b) == (0, 1)
    assert br.components == (Poly.zero(), parse_poly("2*z1"))
    assert "z1" in cert


def test_projective_basis_localize_all_charts():
    fields = [projective_field(2, ("0", "z1", "0")),
              projective_field(2, ("0", "0", "z2"))]
    pb = ProjectiveBasis(fields)
    for i in range(3):
        local = pb.localize(i)
        assert isinstance(local, FieldBasis)
        assert local.chart.index == i
    assert pb.localize(0).generic_rank == 2
