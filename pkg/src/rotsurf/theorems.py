"""Numerical verification harness for the classification theorems.

Each check returns a :class:`Report` made of individual pass/fail lines with the
measured number and the threshold it was held to.

Theorem ids:
    T1, T4  harmonic Gauss map implies constant Gaussian curvature (elliptic, hyperbolic)
    T2, T5  flat surfaces with pointwise 1-type Gauss map: families (i) and (ii)
    T3, T6  non-minimal: first kind iff parallel mean curvature vector
    T7      flat parabolic: pointwise 1-type iff the stated profile, and then f = 0
    T8      flat parabolic: harmonic iff parallel mean curvature vector
    C1, C2  minimal surfaces have pointwise 1-type Gauss map of the first kind
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Union

import numpy as np
from scipy.integrate import quad

from .classifier import (
    CLOSED_FORM_TOLERANCES,
    classify,
    default_s_grid,
    default_t,
    is_parallel_mean_curvature,
    recover_f_and_C,
    sample_gauss_map,
)
from .errors import InvalidParams, SpecError
from .gauss_map import laplacian_coeffs
from .profile_curves import CurveSpec, tabulate
from .pseudo_algebra import from_null_basis, wedge
from .rotational_surfaces import (
    SurfaceSpec,
    frame,
    mean_curvature_vector,
    scalar_invariants,
    surface_from_dict,
)

THEOREMS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "C1", "C2")

FLAT_TOL = 1e-10
K_STDEV_TOL = 1e-8
HARMONIC_COEFF_TOL = 1e-9
HARMONIC_NORM_TOL = 1e-8
F_REL_TOL = 1e-6
F_ABS_TOL = 1e-8
C_SPREAD_TOL = 1e-6
MINIMAL_TOL = 1e-10
PARALLEL_TOL = 1e-9
PERTURBATION = 0.5
# coarse on purpose: roundoff in the tabulated second derivative grows like 1/spacing^2
PERTURBED_SAMPLES = 121

DEFAULTS = {
    "T1": ("elliptic_thm2_i", {"delta1": 1.0, "delta3": 1.0}, (0.0, 1.0)),
    "T2": ("elliptic_thm2_i", {"delta1": 2.0, "delta3": 1.0}, (0.0, 1.0)),
    "T3": ("elliptic_thm2_i", {"delta1": 2.0, "delta3": 1.0}, (0.0, 1.0)),
    "T4": ("hyperbolic_thm5_i", {"delta1": 1.0, "delta2": 1.0}, (0.0, 1.0)),
    "T5": ("hyperbolic_thm5_i", {"delta1": 1.0, "delta2": 2.0}, (0.0, 1.0)),
    "T6": ("hyperbolic_thm5_i", {"delta1": 1.0, "delta2": 2.0}, (0.0, 1.0)),
    "T7": ("parabolic_thm7", {"mu1": 1.0, "mu2": 1.0, "mu4": 0.0, "epsilon": 1.0}, (0.0, 1.0)),
    "T8": ("parabolic_thm7", {"mu1": 1.0, "mu2": 1.0, "mu4": 0.0, "epsilon": 1.0}, (0.0, 1.0)),
    "C1": ("elliptic_minimal", {"r": 1.0}, (-0.5, 0.5)),
    "C2": ("hyperbolic_minimal", {"r": 1.0}, (-1.0, 1.0)),
}

KIND_OF = {"T1": "elliptic", "T2": "elliptic", "T3": "elliptic", "C1": "elliptic",
           "T4": "hyperbolic", "T5": "hyperbolic", "T6": "hyperbolic", "C2": "hyperbolic",
           "T7": "parabolic", "T8": "parabolic"}


@dataclass(frozen=True)
class ReportLine:
    name: str
    passed: bool
    measured: Union[float, str]
    threshold: Optional[float] = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": self.measured,
                "threshold": self.threshold, "detail": self.detail}


@dataclass
class Report:
    theorem: str
    surface: dict
    lines: List[ReportLine] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(line.passed for line in self.lines)

    def add(self, name, passed, measured, threshold=None, detail=""):
        if isinstance(measured, (np.floating, np.integer)):
            measured = float(measured)
        self.lines.append(ReportLine(name, bool(passed), measured, threshold, detail))

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "passed": self.passed, "surface": self.surface,
                "lines": [line.to_dict() for line in self.lines]}


# --- closed forms stated by the theorems ---------------------------------------

def stated_f(curve: CurveSpec) -> Optional[Callable[[float], float]]:
    """The f of Delta G = f (G + C) that the theorems give for a built-in family."""
    p = curve.params
    if curve.family == "elliptic_thm2_i":
        value = p["delta1"] ** 2 - 1.0 / p["delta3"] ** 2
        return lambda s: value
    if curve.family == "elliptic_thm2_ii":
        l1, l2, l3 = p["lambda1"], p["lambda2"], p["lambda3"]
        return lambda s: (l3 * l3 / (1 + l1 * l1) - 1.0) / (l1 * s + l2) ** 2
    if curve.family == "hyperbolic_thm5_i":
        value = 1.0 / p["delta1"] ** 2 - p["delta2"] ** 2
        return lambda s: value
    if curve.family == "hyperbolic_thm5_ii":
        l1, l2, l3 = p["lambda1"], p["lambda2"], p["lambda3"]
        return lambda s: (1.0 - l3 * l3 / (l1 * l1 - 1)) / (l1 * s + l2) ** 2
    if curve.family == "parabolic_thm7":
        return lambda s: 0.0
    return None


def stated_C(spec: SurfaceSpec, t: float, s: float) -> Optional[np.ndarray]:
    """The frame-expressed constant bivector of family (ii), expanded in ambient coordinates."""
    p = spec.curve.params
    fr = frame(spec, t, s)
    if spec.curve.family == "elliptic_thm2_ii":
        l1 = p["lambda1"]
        return l1 * l1 * wedge(fr.e1, fr.e2) + l1 * math.sqrt(1 + l1 * l1) * wedge(fr.e2, fr.e4)
    if spec.curve.family == "hyperbolic_thm5_ii":
        l1 = p["lambda1"]
        return -l1 * l1 * wedge(fr.e1, fr.e2) + l1 * math.sqrt(l1 * l1 - 1) * wedge(fr.e2, fr.e4)
    return None


def perturbed_parabolic_curve(curve: CurveSpec, kappa: float = PERTURBATION,
                              count: int = PERTURBED_SAMPLES) -> CurveSpec:
    """A flat parabolic profile that is *not* in the harmonic family.

    p stays linear (so b = 0 and the surface is flat) while x1' gains a
    kappa * s^2 term, making c(s) differ from eps*mu1/(mu1 s + mu2).  q follows
    from the unit-speed condition.  Returned as a tabulated custom curve.
    """
    p = curve.params
    m1, m2, m4, m5, eps = p["mu1"], p["mu2"], p["mu4"], p["mu5"], p["epsilon"]
    s0 = curve.s_domain[0]

    def x1_prime(v):
        return eps * math.log(m1 * v + m2) + m4 + kappa * v * v

    def point(v):
        u = m1 * v + m2
        x1 = eps / m1 * u * math.log(u) + (m4 - eps) * v + m5 + kappa * v**3 / 3
        q = quad(lambda w: (x1_prime(w) ** 2 - 1.0) / (2 * m1), s0, v,
                 epsabs=1e-13, epsrel=1e-13)[0]
        return from_null_basis(x1, u, q)

    return tabulate(point, curve.s_domain, count, kind="parabolic")


# --- harness -------------------------------------------------------------------

def _resolve_spec(theorem: str, params) -> SurfaceSpec:
    kind = KIND_OF[theorem]
    if isinstance(params, SurfaceSpec):
        spec = params
    else:
        family, values, s_dom = DEFAULTS[theorem]
        t_dom = None
        if params:
            params = dict(params)
            if "curve" in params:
                try:
                    spec = surface_from_dict(params)
                except SpecError as exc:
                    raise InvalidParams(str(exc)) from None
                return _check_kind(theorem, spec)
            family = params.pop("family", family)
            s_dom = tuple(params.pop("s_domain", s_dom))
            t_dom = params.pop("t_domain", None)
            values = params if family != DEFAULTS[theorem][0] else {**values, **params}
        try:
            spec = SurfaceSpec(kind, CurveSpec(family, values, s_dom), t_dom)
        except (SpecError, ValueError) as exc:
            raise InvalidParams(str(exc)) from None
    return _check_kind(theorem, spec)


def _check_kind(theorem, spec):
    kind = KIND_OF[theorem]
    if spec.kind != kind:
        raise InvalidParams(f"{theorem} concerns {kind} surfaces, got {spec.kind}")
    allowed = {
        "T2": ("elliptic_thm2_i", "elliptic_thm2_ii"),
        "T5": ("hyperbolic_thm5_i", "hyperbolic_thm5_ii"),
        "T7": ("parabolic_thm7",),
    }.get(theorem)
    if allowed and spec.curve.family not in allowed:
        raise InvalidParams(f"{theorem} concerns the families {allowed}, got {spec.curve.family}")
    return spec


def _spec_summary(spec: SurfaceSpec) -> dict:
    return {"kind": spec.kind, "family": spec.curve.family, "params": dict(spec.curve.params),
            "s_domain": list(spec.s_domain), "t_domain": list(spec.t_domain)}


def _max_abs_K(spec, grid):
    return max(abs(scalar_invariants(spec, s).K) for s in grid)


def _max_lmn(spec, grid):
    return max(max(abs(x) for x in laplacian_coeffs(spec, s)) for s in grid)


def _harmonic_implies_constant_K(report, spec, grid):
    worst = _max_lmn(spec, grid)
    if worst > HARMONIC_COEFF_TOL:
        raise InvalidParams(f"{report.theorem} needs a harmonic instance; max |L|,|M|,|N| = {worst:.3e}")
    report.add("harmonic instance (max |L|,|M|,|N|)", True, worst, HARMONIC_COEFF_TOL)
    invs = [scalar_invariants(spec, s) for s in grid]
    K = np.array([inv.K for inv in invs])
    bc = np.array([inv.b * inv.c for inv in invs])
    report.add("stdev(K)", np.std(K) <= K_STDEV_TOL, float(np.std(K)), K_STDEV_TOL)
    spread = float(np.max(bc) - np.min(bc))
    report.add("b*c constant (spread)", spread <= K_STDEV_TOL, spread, K_STDEV_TOL)


def _flat_classification(report, spec, grid):
    t = default_t(spec)
    flat = _max_abs_K(spec, grid)
    report.add("flat (max |K|)", flat <= FLAT_TOL, flat, FLAT_TOL)
    f_ref = stated_f(spec.curve)
    result = classify(spec, grid, t, f_reference=f_ref)
    family_ii = spec.curve.family.endswith("_ii")
    f_zero = all(abs(f_ref(s)) <= 1e-12 for s in grid)
    expected = "harmonic" if f_zero else ("second_kind" if family_ii else "first_kind")
    report.add("verdict", result.verdict == expected, result.verdict, None, f"expected {expected}")
    match = result.f_formula_match
    if f_zero:
        report.add("f = 0", match["max_abs_error"] <= F_ABS_TOL, match["max_abs_error"], F_ABS_TOL)
    else:
        report.add("f matches stated formula (max rel error)", match["max_rel_error"] <= F_REL_TOL,
                   match["max_rel_error"], F_REL_TOL)
    if family_ii and not f_zero:
        G, dG = sample_gauss_map(spec, grid, t)
        half = len(grid) // 2
        lo = recover_f_and_C(G[:half], dG[:half])
        hi = recover_f_and_C(G[half:], dG[half:])
        diff = float(np.max(np.abs(lo.C - hi.C)))
        report.add("recovered C agrees across half-grids", diff <= C_SPREAD_TOL, diff, C_SPREAD_TOL)
        stated = np.array([stated_C(spec, t, s) for s in grid])
        spread = float(np.max(np.ptp(stated, axis=0)))
        report.add("stated C constant in ambient coordinates (spread)", spread <= C_SPREAD_TOL,
                   spread, C_SPREAD_TOL)
        gap = float(np.max(np.abs(stated - result.C)))
        report.add("stated C equals recovered C", gap <= C_SPREAD_TOL, gap, C_SPREAD_TOL)
    return result


def _parallel_agreement(report, spec, grid, target=("first_kind", "harmonic"), label=None):
    result = classify(spec, grid, default_t(spec))
    parallel, worst = is_parallel_mean_curvature(spec, grid, PARALLEL_TOL)
    kind_ok = result.verdict in target
    label = label or "parallel H <=> " + "/".join(target)
    report.add(label, parallel == kind_ok, f"parallel={parallel} verdict={result.verdict}",
               None, f"max |M|,|N| = {worst:.3e}")
    return result, parallel


def _max_H(spec, grid):
    t = default_t(spec)
    return max(float(np.max(np.abs(mean_curvature_vector(spec, s, t)))) for s in grid)


def verify_theorem(theorem: str, params=None, s_count: int = 25) -> Report:
    """Check one theorem or corollary numerically.

    ``params`` may be a :class:`SurfaceSpec`, a surface JSON document, or a flat
    mapping of family constants with optional ``family``, ``s_domain`` and
    ``t_domain`` keys.  Omitted values fall back to a default instance.

    Raises:
        InvalidParams: the instance does not belong to the family the theorem
            concerns, or violates its hypothesis (e.g. T1 on a non-harmonic
            surface).
    """
    theorem = theorem.upper()
    if theorem not in THEOREMS:
        raise InvalidParams(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    spec = _resolve_spec(theorem, params)
    grid = default_s_grid(spec, s_count)
    report = Report(theorem, _spec_summary(spec))

    if theorem in ("T1", "T4"):
        _harmonic_implies_constant_K(report, spec, grid)
    elif theorem in ("T2", "T5"):
        _flat_classification(report, spec, grid)
    elif theorem in ("T3", "T6"):
        h_max = _max_H(spec, grid)
        report.add("non-minimal (max |H| coordinate)", True, h_max, None,
                   "minimal" if h_max <= MINIMAL_TOL else "non-minimal")
        _parallel_agreement(report, spec, grid)
    elif theorem in ("C1", "C2"):
        h_max = _max_H(spec, grid)
        if h_max > MINIMAL_TOL:
            raise InvalidParams(f"{theorem} needs a minimal surface; max |H| = {h_max:.3e}")
        report.add("minimal (max |H| coordinate)", True, h_max, MINIMAL_TOL)
        result, _ = _parallel_agreement(report, spec, grid)
        report.add("verdict first kind", result.verdict in ("first_kind", "harmonic"), result.verdict)
    elif theorem == "T7":
        flat = _max_abs_K(spec, grid)
        report.add("flat (max |K|)", flat <= FLAT_TOL, flat, FLAT_TOL)
        result = classify(spec, grid, default_t(spec), f_reference=stated_f(spec.curve))
        report.add("verdict harmonic", result.verdict == "harmonic", result.verdict)
        report.add("max |Delta G|", result.max_deltaG <= HARMONIC_NORM_TOL, result.max_deltaG,
                   HARMONIC_NORM_TOL)
        report.add("f = 0", float(np.max(np.abs(result.f))) == 0.0, float(np.max(np.abs(result.f))))
        other = SurfaceSpec("parabolic", perturbed_parabolic_curve(spec.curve), spec.t_domain)
        flat_other = _max_abs_K(other, grid)
        bad = classify(other, grid, default_t(other))
        report.add("perturbed flat curve is flat", flat_other <= FLAT_TOL, flat_other, FLAT_TOL)
        report.add("perturbed flat curve is not pointwise 1-type", bad.verdict == "not_one_type",
                   bad.verdict, None, f"residual {bad.residual:.3e}")
    elif theorem == "T8":
        flat = _max_abs_K(spec, grid)
        if flat > FLAT_TOL:
            raise InvalidParams(f"T8 concerns flat surfaces; max |K| = {flat:.3e}")
        report.add("flat (max |K|)", True, flat, FLAT_TOL)
        _parallel_agreement(report, spec, grid, ("harmonic",))
        if spec.curve.family == "parabolic_thm7":
            other = SurfaceSpec("parabolic", perturbed_parabolic_curve(spec.curve), spec.t_domain)
            _parallel_agreement(report, other, grid, ("harmonic",),
                                "perturbed curve: parallel H <=> harmonic")
    return report
