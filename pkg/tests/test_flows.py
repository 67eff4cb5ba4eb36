"""Flow integration: accuracy, blowup detection, divisor invariance."""

import cmath
import math

import numpy as np
import pytest

from anticanon.divisor import divisor_affine
from anticanon.errors import BlowupDetected
from anticanon.fields import FieldBasis, affine_field
from anticanon.flows import (
    flow_invariance_probe,
    integrate_flow,
    sample_divisor_points,
)
from anticanon.polyparse import parse_poly
from anticanon.sampling import rng_for


def test_rk4_matches_linear_exponential():
    """d/dt z = i z from z(0) = 1 lands on exp(i t_max)."""
    field = affine_field(1, ("i*z1",))
    traj = integrate_flow(field, [1.0 + 0.0j], t_max=1.0, steps=1000)
    assert traj.shape == (1001, 1)
    assert traj[-1, 0] == pytest.approx(cmath.exp(1j), abs=1e-10)


def test_rk4_matches_scalar_riccati():
    """d/dt z = z^2 from z(0) = 1/2 equals 1/(2 - t)."""
    field = affine_field(1, ("z1^2",))
    traj = integrate_flow(field, [0.5 + 0.0j], t_max=1.0, steps=2000)
    assert traj[-1, 0] == pytest.approx(1.0, abs=1e-9)


def test_blowup_detected():
    field = affine_field(1, ("z1^2",))
    # 1/(1 - t) leaves any ball before t = 1
    with pytest.raises(BlowupDetected):
        integrate_flow(field, [1.0 + 0.0j], t_max=1.0, steps=4000, bound=1e4)


def test_observer_sees_every_step():
    field = affine_field(1, ("z1",))
    seen = []
    integrate_flow(field, [1.0 + 0.0j], t_max=1.0, steps=10,
                   observer=lambda t, z: seen.append((t, complex(z[0]))))
    assert len(seen) == 11
    assert seen[0][0] == 0.0 and seen[-1][0] == pytest.approx(1.0)
    assert seen[-1][1] == pytest.approx(math.e, rel=1e-5)


def test_sample_divisor_points_land_on_section():
    section = parse_poly("z1*z2 - 1")
    rng = rng_for(11, "sample")
    pts = sample_divisor_points(section, ("z1", "z2"), rng, count=4)
    assert len(pts) == 4
    for p in pts:
        val = section.eval_complex({"z1": complex(p[0]), "z2": complex(p[1])})
        norm = float(np.linalg.norm(p))
        assert abs(val) < 1e-10 * (1.0 + norm ** 2)
        assert norm <= 6.0 + 1e-9


def test_sample_constant_section_yields_nothing():
    rng = rng_for(11, "sample")
    assert sample_divisor_points(parse_poly("1"), ("z1",), rng) == []


def test_invariance_for_tangent_basis():
    """Fields tangent to their own determinant divisor keep it invariant."""
    basis = FieldBasis([affine_field(2, ("z1", "0")),
                        affine_field(2, ("0", "z2"))])
    section = divisor_affine(basis).section
    report = flow_invariance_probe(basis, section, rng_for(1234, "flow"))
    assert report.sample_points
    assert report.max_residual < 1e-6
    assert not report.any_blowup


def test_invariance_fails_for_transverse_field():
    """A field pushing off its divisor shows a macroscopic residual."""
    basis = FieldBasis([affine_field(2, ("1", "0")),
                        affine_field(2, ("0", "z1^2"))])
    section = divisor_affine(basis).section     # z1^2
    report = flow_invariance_probe(basis, section, rng_for(1234, "flow"))
    residuals = {fr.field_index: fr.max_residual for fr in report.per_field}
    assert residuals[0] > 1e-2        # translation leaves z1 = 0 immediately
    assert residuals[1] < 1e-6        # z1^2 d2 preserves z1 = 0


def test_probe_counts_blowups_separately():
    """A quadratic field blowing up from divisor points is recorded, and the
    clean per-field residual only covers surviving trajectories."""
    basis = FieldBasis([affine_field(2, ("z1", "0")),
                        affine_field(2, ("0", "z2^2"))])
    section = divisor_affine(basis).section     # z1 * z2^2
    report = flow_invariance_probe(basis, section, rng_for(3, "flow"),
                                   t_max=1.0, steps=500)
    assert report.sample_points
    for fr in report.per_field:
        for pf in fr.points:
            assert isinstance(pf.blew_up, bool)
            assert pf.max_residual >= 0.0
