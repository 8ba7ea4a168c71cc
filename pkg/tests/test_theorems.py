import math

import numpy as np
import pytest

from rotsurf.classifier import default_s_grid
from rotsurf.errors import InvalidParams
from rotsurf.profile_curves import CurveSpec
from rotsurf.rotational_surfaces import SurfaceSpec, scalar_invariants
from rotsurf.theorems import THEOREMS, perturbed_parabolic_curve, stated_C, verify_theorem

from conftest import make_surface


@pytest.mark.parametrize("theorem", THEOREMS)
def test_default_instances_pass(theorem):
    report = verify_theorem(theorem)
    assert report.passed, [l for l in report.lines if not l.passed]


def test_family_i_first_kind_f3():
    report = verify_theorem("T2", {"delta1": 2, "delta3": 1})
    assert report.passed
    verdict = next(l for l in report.lines if l.name == "verdict")
    assert verdict.measured == "first_kind"


def test_family_ii_lines():
    report = verify_theorem("T2", {"family": "elliptic_thm2_ii", "lambda1": 2, "lambda2": 1, "lambda3": 1})
    names = {l.name for l in report.lines}
    assert "stated C equals recovered C" in names
    assert report.passed


def test_T5_harmonic_instance():
    report = verify_theorem("T5", {"delta1": 1, "delta2": 1})
    assert report.passed
    assert next(l for l in report.lines if l.name == "verdict").measured == "harmonic"


def test_T7_examples():
    for params in ({"mu1": 1, "mu2": 1, "mu4": 0, "epsilon": 1}, {"mu1": 2, "mu2": 1, "mu4": 1, "epsilon": -1}):
        report = verify_theorem("T7", params)
        assert report.passed


def test_T6_accepts_surface_spec():
    spec = make_surface("hyperbolic_thm5_ii", {"lambda1": 2, "lambda2": 1, "lambda3": 1})
    assert verify_theorem("T6", spec).passed


def test_stated_C_constant_in_ambient():
    for fam, params in (("elliptic_thm2_ii", {"lambda1": 1.5, "lambda2": 1, "lambda3": 0.7}),
                        ("hyperbolic_thm5_ii", {"lambda1": 3, "lambda2": 1, "lambda3": 2})):
        spec = make_surface(fam, params)
        C = np.array([stated_C(spec, t, s) for t in (0.1, 0.5) for s in default_s_grid(spec, 9)])
        assert np.max(np.ptp(C, axis=0)) <= 1e-12


def test_perturbed_curve_is_flat_but_off_family():
    curve = CurveSpec("parabolic_thm7", {"mu1": 1, "mu2": 1}, (0, 1))
    spec = SurfaceSpec("parabolic", perturbed_parabolic_curve(curve))
    family = SurfaceSpec("parabolic", curve)
    for s in (0.2, 0.5, 0.8):
        assert abs(scalar_invariants(spec, s).K) <= 1e-10
        assert abs(scalar_invariants(spec, s).c - scalar_invariants(family, s).c) > 1e-3


@pytest.mark.parametrize("theorem,params", [
    ("T2", {"family": "hyperbolic_thm5_i", "delta1": 1, "delta2": 2}),
    ("T5", {"family": "elliptic_thm2_i", "delta1": 1, "delta3": 2}),
    ("T1", {"delta1": 2, "delta3": 1}),
    ("T4", {"delta1": 1, "delta2": 2}),
    ("C1", {"family": "elliptic_thm2_i", "delta1": 2, "delta3": 1}),
    ("T7", {"mu1": 0.0}),
    ("T8", {"family": "elliptic_thm2_i", "delta1": 2, "delta3": 1}),
    ("T9", None),
])
def test_invalid_params(theorem, params):
    with pytest.raises(InvalidParams):
        verify_theorem(theorem, params)


def test_report_serializes():
    doc = verify_theorem("T3").to_dict()
    assert doc["theorem"] == "T3" and doc["passed"] is True
    assert all({"name", "passed", "measured", "threshold", "detail"} <= set(l) for l in doc["lines"])
