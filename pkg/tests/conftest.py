import math

import numpy as np
import pytest

from rotsurf.profile_curves import CurveSpec, tabulate
from rotsurf.rotational_surfaces import SurfaceSpec

# one representative instance per built-in family
FAMILY_INSTANCES = {
    "elliptic_thm2_i": ({"delta1": 2.0, "delta3": 1.0}, (0.0, 1.0)),
    "elliptic_thm2_ii": ({"lambda1": 1.0, "lambda2": 1.0, "lambda3": 2.0}, (0.0, 1.0)),
    "elliptic_minimal": ({"r": 1.0}, (-0.5, 0.5)),
    "hyperbolic_thm5_i": ({"delta1": 1.0, "delta2": 2.0}, (0.0, 1.0)),
    "hyperbolic_thm5_ii": ({"lambda1": math.sqrt(2.0), "lambda2": 1.0, "lambda3": 2.0}, (0.0, 1.0)),
    "hyperbolic_minimal": ({"r": 1.0}, (-1.0, 1.0)),
    "parabolic_thm7": ({"mu1": 1.0, "mu2": 1.0, "mu4": 0.0, "epsilon": 1.0}, (0.0, 1.0)),
}


def make_surface(family, params=None, s_domain=None, t_domain=None):
    default_params, default_dom = FAMILY_INSTANCES.get(family, ({}, (0.0, 1.0)))
    curve = CurveSpec(family, params if params is not None else default_params,
                      s_domain or default_dom)
    return SurfaceSpec(curve.kind, curve, t_domain)


def quadratic_elliptic_surface():
    """x3 = s^2 + 1 with angle theta(s) = s; not in any theorem family."""
    def point(v):
        from scipy.integrate import quad
        speed = lambda w: math.sqrt(1.0 + 4.0 * w * w)
        x1 = quad(lambda w: speed(w) * math.cos(w), 0.0, v, epsabs=1e-13, epsrel=1e-13)[0]
        x2 = quad(lambda w: speed(w) * math.sin(w), 0.0, v, epsabs=1e-13, epsrel=1e-13)[0]
        return (x1, x2, v * v + 1.0, 0.0)
    curve = tabulate(point, (-0.05, 1.05), 1101, kind="elliptic", s_domain=(0.0, 1.0))
    return SurfaceSpec("elliptic", curve)


@pytest.fixture(params=sorted(FAMILY_INSTANCES))
def family_surface(request):
    return make_surface(request.param)


@pytest.fixture(scope="session")
def quadratic_surface():
    return quadratic_elliptic_surface()


# acceptance criteria outcomes, filled by test_acceptance and echoed at the end of the run
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
