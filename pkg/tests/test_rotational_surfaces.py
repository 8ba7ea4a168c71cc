import math

import numpy as np
import pytest

from rotsurf.errors import SpecError
from rotsurf.profile_curves import CurveSpec, evaluate_jet, tabulate
from rotsurf.pseudo_algebra import inner
from rotsurf.rotational_surfaces import (
    SurfaceSpec,
    connection_table,
    embed,
    frame,
    gaussian_curvature_from_sff,
    mean_curvature_vector,
    mean_curvature_from_sff,
    scalar_invariants,
    second_fundamental,
    surface_from_dict,
    surface_to_dict,
)

from conftest import make_surface


def test_embed_elliptic_custom_curve():
    curve = tabulate(lambda s: (math.sin(s), math.cos(s), 1.0, 0.0), (-0.5, 0.5), 101, kind="elliptic")
    spec = SurfaceSpec("elliptic", curve)
    np.testing.assert_allclose(embed(spec, math.pi / 2, 0.0), [0, 1, 0, 1], atol=1e-12)


def test_embed_hyperbolic_at_t0_is_profile():
    spec = make_surface("hyperbolic_thm5_i", {"delta1": 1, "delta2": 2})
    for s in (0.2, 0.7):
        x = evaluate_jet(spec.curve, s).x
        np.testing.assert_allclose(embed(spec, 0.0, s), [x[0], x[1], 0.0, x[3]], atol=1e-15)


def test_embed_parabolic_origin():
    spec = make_surface("parabolic_thm7", {"mu1": 1, "mu2": 1})
    x1 = evaluate_jet(spec.curve, 0.0).x[0]
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(embed(spec, 0.0, 0.0), [x1, r, r, 0.0], atol=1e-14)


def test_elliptic_e2():
    spec = make_surface("elliptic_thm2_ii")
    for t in (0.0, 0.4, 2.5):
        fr = frame(spec, t, 0.3)
        np.testing.assert_allclose(fr.e2, [0, 0, -math.sin(t), math.cos(t)], atol=1e-15)
        assert inner(fr.e2, fr.e2) == pytest.approx(-1.0)


def test_hyperbolic_e3_sign():
    spec = make_surface("hyperbolic_thm5_i", {"delta1": 1, "delta2": 2})
    assert spec.epsilon == -1
    fr = frame(spec, 0.2, 0.4)
    assert inner(fr.e3, fr.e3) == pytest.approx(-1.0)


def test_parabolic_e3_spacelike():
    fr = frame(make_surface("parabolic_thm7"), 0.3, 0.4)
    assert inner(fr.e3, fr.e3) == pytest.approx(1.0)


def test_frame_orthonormal_and_tangent(family_surface):
    spec = family_surface
    h = 1e-5
    for t in np.linspace(*spec.t_domain, 5)[1:-1]:
        for s in np.linspace(*spec.s_domain, 7)[1:-1]:
            fr = frame(spec, t, s)
            gram = np.array([[inner(u, v) for v in fr.vectors] for u in fr.vectors])
            np.testing.assert_allclose(gram, np.diag(fr.signs), atol=1e-10)
            d_s = (embed(spec, t, s + h) - embed(spec, t, s - h)) / (2 * h)
            np.testing.assert_allclose(d_s, fr.e1, atol=1e-6)


def test_invariants_elliptic_family_i():
    inv = scalar_invariants(make_surface("elliptic_thm2_i", {"delta1": 2, "delta3": 1}), 0.4)
    assert (inv.a, inv.b, inv.c, inv.d, inv.K) == pytest.approx((0, 1, 0, 2, 0))
    assert inv.H == pytest.approx((-1.0, 0.5))


def test_invariants_parabolic_origin():
    inv = scalar_invariants(make_surface("parabolic_thm7", {"mu1": 1, "mu2": 1}), 0.0)
    assert inv.a == pytest.approx(1.0)
    assert inv.b == pytest.approx(0.0, abs=1e-14)
    assert inv.K == pytest.approx(0.0, abs=1e-14)


def test_invariants_elliptic_family_ii():
    spec = make_surface("elliptic_thm2_ii", {"lambda1": 1, "lambda2": 1, "lambda3": 3})
    inv = scalar_invariants(spec, 0.0)
    assert (inv.a, inv.b, inv.c, inv.d) == pytest.approx((1 / math.sqrt(2), math.sqrt(2), 0, 3))


def test_d_matches_finite_difference_of_normal():
    # d is the e3-component of the derivative of e1 along s, up to the frame sign
    spec = make_surface("elliptic_thm2_ii", {"lambda1": 1, "lambda2": 1, "lambda3": 3})
    s, h = 0.3, 1e-5
    de1 = (frame(spec, 0.0, s + h).e1 - frame(spec, 0.0, s - h).e1) / (2 * h)
    fr = frame(spec, 0.0, s)
    inv = scalar_invariants(spec, s)
    assert abs(inner(de1, fr.e3)) == pytest.approx(abs(inv.d), rel=1e-8)


def test_second_fundamental_examples():
    sff = second_fundamental(make_surface("elliptic_thm2_i", {"delta1": 2, "delta3": 1}), 0.5)
    np.testing.assert_allclose(sff.h3, [[-2, 0], [0, 0]])
    np.testing.assert_allclose(sff.h4, [[0, 0], [0, 1]])
    spec = make_surface("hyperbolic_thm5_i", {"delta1": 1, "delta2": 2})
    inv = scalar_invariants(spec, 0.5)
    assert second_fundamental(spec, 0.5).h4[1, 1] == pytest.approx(inv.b)
    assert second_fundamental(make_surface("parabolic_thm7"), 0.5).h4[0, 0] == pytest.approx(0.0, abs=1e-14)


def test_curvature_consistency(family_surface):
    spec = family_surface
    for s in np.linspace(*spec.s_domain, 9)[1:-1]:
        inv = scalar_invariants(spec, s)
        fr = frame(spec, 0.1, s)
        K = gaussian_curvature_from_sff(second_fundamental(spec, s), fr.signs)
        assert K == pytest.approx(inv.K, abs=1e-10)
        np.testing.assert_allclose(mean_curvature_from_sff(spec, s, 0.1),
                                   mean_curvature_vector(spec, s, 0.1), atol=1e-10)


def test_minimal_has_zero_H():
    for fam in ("elliptic_minimal", "hyperbolic_minimal"):
        spec = make_surface(fam)
        for s in np.linspace(*spec.s_domain, 9)[1:-1]:
            np.testing.assert_allclose(mean_curvature_vector(spec, s), 0, atol=1e-12)


def test_parabolic_H_form():
    spec = make_surface("parabolic_thm7")
    inv = scalar_invariants(spec, 0.4)
    assert inv.H == pytest.approx((inv.c / 2, inv.a / 2))


def test_connection_examples():
    spec = make_surface("elliptic_thm2_i", {"delta1": 2, "delta3": 1})
    table = connection_table(spec, 0.5, 0.3)
    np.testing.assert_allclose(table.entries[(1, 2)], 0, atol=1e-15)
    np.testing.assert_allclose(table.coefficients(2, 2), [0, 0, 0, -1], atol=1e-15)


def test_connection_oracle(family_surface):
    spec = family_surface
    rng = np.random.default_rng(3)
    (sa, sb), (ta, tb) = spec.s_domain, spec.t_domain
    for _ in range(20):
        s = rng.uniform(sa + 0.05 * (sb - sa), sb - 0.05 * (sb - sa))
        t = rng.uniform(ta + 0.05 * (tb - ta), tb - 0.05 * (tb - ta))
        closed = connection_table(spec, s, t)
        fd = connection_table(spec, s, t, oracle=True, h=1e-4)
        for key, v in closed.entries.items():
            assert np.linalg.norm(fd.entries[key] - v) <= 1e-6, key


def test_surface_spec_errors():
    curve = CurveSpec("elliptic_thm2_i", {"delta1": 2, "delta3": 1})
    with pytest.raises(SpecError):
        SurfaceSpec("hyperbolic", curve)
    with pytest.raises(SpecError) as exc:
        surface_from_dict({"kind": "elliptic", "curve": {"family": "elliptic_thm2_i", "s_domain": [0, 1],
                                                          "params": {"delta1": 2}}})
    assert exc.value.path == "$.curve.params.delta3"


def test_surface_round_trip(family_surface):
    assert surface_from_dict(surface_to_dict(family_surface)) == family_surface
