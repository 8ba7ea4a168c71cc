"""Rotational surfaces of elliptic, hyperbolic and parabolic type in R^4_2.

Given a unit-speed spacelike profile curve, each surface type is the orbit of the
curve under a one-parameter group of isometries:

* elliptic:   phi(t, s) = (x1, x2, x3 cos t, x3 sin t)
* hyperbolic: phi(t, s) = (x1 cosh t, x2, x1 sinh t, x4)
* parabolic:  phi(t, s) = x1 eps1 + p xi2 + (q - t^2 p) xi3 + sqrt2 t p eps4

The adapted frame (e1, e2 tangent, e3, e4 normal) and the scalar functions
a, b, c, d of s determine the second fundamental form, H, K and the covariant
derivatives of the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import AdmissibilityError, SpecError
from .profile_curves import (
    CUSTOM,
    DEGENERACY_TOL,
    KINDS,
    CurveSpec,
    admissibility,
    curve_from_dict,
    curve_to_dict,
    evaluate_jet,
    radius_coordinate,
)
from .pseudo_algebra import XI2, XI3, basis_vector, from_null_basis, inner

SQRT2 = math.sqrt(2.0)
ADMISSIBILITY_PROBES = 33

DEFAULT_T_DOMAIN = {
    "elliptic": (0.0, 2.0 * math.pi),
    "hyperbolic": (-1.0, 1.0),
    "parabolic": (-1.0, 1.0),
}


@dataclass(frozen=True)
class SurfaceSpec:
    kind: str
    curve: CurveSpec
    t_domain: Tuple[float, float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"kind must be one of {KINDS}", "$.kind")
        if self.curve.family == CUSTOM:
            object.__setattr__(self, "curve", self.curve.with_kind(self.kind))
        elif self.curve.kind != self.kind:
            raise SpecError(f"curve family {self.curve.family} does not build a {self.kind} surface",
                            "$.curve.family")
        dom = self.t_domain if self.t_domain is not None else DEFAULT_T_DOMAIN[self.kind]
        a, b = (float(x) for x in dom)
        if not a < b:
            raise SpecError("t_domain must be an increasing interval [a, b]", "$.t_domain")
        object.__setattr__(self, "t_domain", (a, b))
        self._check_admissible()

    def _check_admissible(self):
        signs = set()
        for s in np.linspace(*self.curve.s_domain, ADMISSIBILITY_PROBES):
            flags = admissibility(self.curve, float(s), self.kind)
            if not flags.ok:
                raise AdmissibilityError(f"{self.kind} surface is not admissible at s={float(s)!r}")
            if flags.epsilon is not None:
                signs.add(flags.epsilon)
        if len(signs) > 1:
            raise AdmissibilityError("(x1')^2 - 1 changes sign on s_domain; the frame degenerates")

    @property
    def s_domain(self):
        return self.curve.s_domain

    @property
    def epsilon(self) -> Optional[int]:
        if self.kind != "hyperbolic":
            return None
        return admissibility(self.curve, self.curve.s_domain[0], self.kind).epsilon


@dataclass(frozen=True)
class FramePoint:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    signs: Tuple[int, int, int, int]

    @property
    def vectors(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3, self.e4])


@dataclass(frozen=True)
class InvariantSample:
    """Scalar invariants at s.  ``d`` is None for parabolic surfaces and
    ``epsilon`` is set only for hyperbolic ones.  ``H`` holds the coefficients of
    the mean curvature vector along (e3, e4)."""

    s: float
    kind: str
    a: float
    b: float
    c: float
    d: Optional[float]
    epsilon: Optional[int]
    H: Tuple[float, float]
    K: float
    da: float
    db: float
    dc: float
    dd: Optional[float]


@dataclass(frozen=True)
class SecondFundamentalForm:
    h3: np.ndarray
    h4: np.ndarray


@dataclass(frozen=True)
class ConnectionTable:
    """Ambient covariant derivatives keyed by (i, A) for the derivative of e_A along e_i."""

    entries: Dict[Tuple[int, int], np.ndarray]
    frame: FramePoint

    def coefficients(self, i: int, A: int) -> np.ndarray:
        """Expansion of an entry in the frame, using the frame's sign pattern."""
        v = self.entries[(i, A)]
        return np.array([inner(v, e) * sg for e, sg in zip(self.frame.vectors, self.frame.signs)])


def surface_from_dict(doc, path: str = "$") -> SurfaceSpec:
    if not isinstance(doc, dict):
        raise SpecError("surface spec must be an object", path)
    for key in ("kind", "curve"):
        if key not in doc:
            raise SpecError("missing field", f"{path}.{key}")
    curve = curve_from_dict(doc["curve"], f"{path}.curve")
    t_dom = doc.get("t_domain")
    if t_dom is not None and not (isinstance(t_dom, (list, tuple)) and len(t_dom) == 2):
        raise SpecError("t_domain must be [a, b]", f"{path}.t_domain")
    try:
        return SurfaceSpec(doc["kind"], curve, None if t_dom is None else tuple(t_dom))
    except SpecError as exc:
        raise SpecError(exc.reason, path + exc.path[1:]) from None


def surface_to_dict(spec: SurfaceSpec) -> dict:
    return {"kind": spec.kind, "curve": curve_to_dict(spec.curve), "t_domain": list(spec.t_domain)}


def with_domain(spec: SurfaceSpec, s_domain=None, t_domain=None) -> SurfaceSpec:
    curve = spec.curve if s_domain is None else replace(spec.curve, s_domain=tuple(s_domain))
    return SurfaceSpec(spec.kind, curve, t_domain or spec.t_domain)


# --- embedding and frame ------------------------------------------------------

def embed(spec: SurfaceSpec, t: float, s: float) -> np.ndarray:
    x = evaluate_jet(spec.curve, s).x
    if spec.kind == "elliptic":
        return np.array([x[0], x[1], x[2] * math.cos(t), x[2] * math.sin(t)])
    if spec.kind == "hyperbolic":
        return np.array([x[0] * math.cosh(t), x[1], x[0] * math.sinh(t), x[3]])
    x1 = x[0]
    p = (x[1] + x[2]) / SQRT2
    q = (-x[1] + x[2]) / SQRT2
    return from_null_basis(x1, p, q - t * t * p, SQRT2 * t * p)


def _hyperbolic_norm(x1p: float):
    q = x1p * x1p - 1.0
    if abs(q) <= DEGENERACY_TOL:
        raise AdmissibilityError("(x1')^2 - 1 vanishes; hyperbolic normal frame degenerates")
    eps = 1 if q > 0 else -1
    return eps, math.sqrt(eps * q)


def frame(spec: SurfaceSpec, t: float, s: float) -> FramePoint:
    v = evaluate_jet(spec.curve, s, position=False).d1
    ct, st = math.cos(t), math.sin(t)
    if spec.kind == "elliptic":
        x1p, x2p, x3p = v[0], v[1], v[2]
        r = math.sqrt(1.0 + x3p * x3p)
        e1 = np.array([x1p, x2p, x3p * ct, x3p * st])
        e2 = np.array([0.0, 0.0, -st, ct])
        e3 = np.array([-x2p, x1p, 0.0, 0.0]) / r
        e4 = np.array([x3p * x1p, x3p * x2p, r * r * ct, r * r * st]) / r
        return FramePoint(e1, e2, e3, e4, (1, -1, 1, -1))
    if spec.kind == "hyperbolic":
        x1p, x2p, x4p = v[0], v[1], v[3]
        eps, r = _hyperbolic_norm(x1p)
        ch, sh = math.cosh(t), math.sinh(t)
        e1 = np.array([x1p * ch, x2p, x1p * sh, x4p])
        e2 = np.array([sh, 0.0, ch, 0.0])
        e3 = np.array([0.0, x4p, 0.0, x2p]) / r
        w = 1.0 - x1p * x1p
        e4 = np.array([w * ch, -x1p * x2p, w * sh, -x1p * x4p]) / r
        return FramePoint(e1, e2, e3, e4, (1, -1, eps, -eps))
    x1p = v[0]
    pp = (v[1] + v[2]) / SQRT2
    qp = (-v[1] + v[2]) / SQRT2
    if abs(pp) <= DEGENERACY_TOL:
        raise AdmissibilityError("p'(s) vanishes; parabolic normal frame degenerates")
    eps1, eps4 = basis_vector(1), basis_vector(4)
    e1 = x1p * eps1 + pp * XI2 + (qp - t * t * pp) * XI3 + SQRT2 * t * pp * eps4
    e2 = -SQRT2 * t * XI3 + eps4
    e3 = eps1 + (x1p / pp) * XI3
    e4 = x1p * eps1 + pp * XI2 + (1.0 / pp + qp - t * t * pp) * XI3 + SQRT2 * t * pp * eps4
    return FramePoint(e1, e2, e3, e4, (1, -1, 1, -1))


def frame_signs(spec: SurfaceSpec) -> Tuple[int, int, int, int]:
    if spec.kind == "hyperbolic":
        eps = spec.epsilon
        return (1, -1, eps, -eps)
    return (1, -1, 1, -1)


def rotation_speed(spec: SurfaceSpec, s: float) -> float:
    """|d phi/dt|: x3, x1 or sqrt2 p depending on the kind."""
    r = radius_coordinate(spec.curve, s)
    return SQRT2 * r if spec.kind == "parabolic" else r


# --- scalar invariants --------------------------------------------------------

def _elliptic_invariants(jet, x3):
    (x1p, x2p, x3p), (x1pp, x2pp, x3pp), (x1ppp, x2ppp, x3ppp) = (
        jet.d1[:3], jet.d2[:3], jet.d3[:3])
    r = math.sqrt(1.0 + x3p * x3p)
    r1 = x3p * x3pp / r
    num = x1pp * x2p - x2pp * x1p
    num1 = x1ppp * x2p - x2ppp * x1p
    a, da = x3p / r, x3pp / r - x3p * r1 / r**2
    b, db = r / x3, r1 / x3 - r * x3p / x3**2
    c, dc = x3pp / r, x3ppp / r - x3pp * r1 / r**2
    d, dd = num / r, num1 / r - num * r1 / r**2
    return a, b, c, d, None, da, db, dc, dd


def _hyperbolic_invariants(jet, x1):
    x1p, x2p, x4p = jet.d1[0], jet.d1[1], jet.d1[3]
    x1pp, x2pp, x4pp = jet.d2[0], jet.d2[1], jet.d2[3]
    x1ppp, x2ppp, x4ppp = jet.d3[0], jet.d3[1], jet.d3[3]
    eps, r = _hyperbolic_norm(x1p)
    r1 = eps * x1p * x1pp / r
    num = x2pp * x4p - x4pp * x2p
    num1 = x2ppp * x4p - x4ppp * x2p
    a, da = x1p / r, x1pp / r - x1p * r1 / r**2
    b, db = r / x1, r1 / x1 - r * x1p / x1**2
    c, dc = x1pp / r, x1ppp / r - x1pp * r1 / r**2
    d, dd = num / r, num1 / r - num * r1 / r**2
    return a, b, c, d, eps, da, db, dc, dd


def _parabolic_invariants(jet, p):
    x1_1, p1, _ = jet.null_components(1)
    x1_2, p2, _ = jet.null_components(2)
    x1_3, p3, _ = jet.null_components(3)
    if abs(p1) <= DEGENERACY_TOL:
        raise AdmissibilityError("p'(s) vanishes; parabolic normal frame degenerates")
    a, da = p1 / p, p2 / p - p1 * p1 / p**2
    b, db = p2 / p1, p3 / p1 - p2 * p2 / p1**2
    c = x1_2 - p2 * x1_1 / p1
    dc = x1_3 - (p3 * x1_1 + p2 * x1_2) / p1 + p2 * p2 * x1_1 / p1**2
    return a, b, c, None, None, da, db, dc, None


def scalar_invariants(spec: SurfaceSpec, s: float) -> InvariantSample:
    """a, b, c, d with their s-derivatives, plus H (along e3, e4) and K."""
    jet = evaluate_jet(spec.curve, s, position=spec.curve.family == CUSTOM)
    rad = radius_coordinate(spec.curve, s, jet)
    if spec.kind == "elliptic":
        a, b, c, d, eps, da, db, dc, dd = _elliptic_invariants(jet, rad)
        H, K = (-d / 2, (c + b) / 2), c * b
    elif spec.kind == "hyperbolic":
        a, b, c, d, eps, da, db, dc, dd = _hyperbolic_invariants(jet, rad)
        H, K = (eps * d / 2, -eps * (c + eps * b) / 2), c * b
    else:
        a, b, c, d, eps, da, db, dc, dd = _parabolic_invariants(jet, rad)
        H, K = (c / 2, (a + b) / 2), a * b
    return InvariantSample(float(s), spec.kind, a, b, c, d, eps, H, K, da, db, dc, dd)


def second_fundamental(spec: SurfaceSpec, s: float) -> SecondFundamentalForm:
    inv = scalar_invariants(spec, s)
    a, b, c, d = inv.a, inv.b, inv.c, inv.d
    if spec.kind == "elliptic":
        h3, h4 = [[-d, 0.0], [0.0, 0.0]], [[-c, 0.0], [0.0, b]]
    elif spec.kind == "hyperbolic":
        h3, h4 = [[d, 0.0], [0.0, 0.0]], [[c, 0.0], [0.0, -inv.epsilon * b]]
    else:
        h3, h4 = [[c, 0.0], [0.0, 0.0]], [[-b, 0.0], [0.0, a]]
    return SecondFundamentalForm(np.array(h3), np.array(h4))


def gaussian_curvature_from_sff(sff: SecondFundamentalForm, signs) -> float:
    """K = sum over normal directions r of eps_r (h_11 h_22 - h_12 h_21)."""
    return float(sum(sg * (h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0])
                     for h, sg in ((sff.h3, signs[2]), (sff.h4, signs[3]))))


def mean_curvature_from_sff(spec: SurfaceSpec, s: float, t: float = 0.0) -> np.ndarray:
    """H = (1/2) sum_r sum_i eps_i eps_r h^r_ii e_r, assembled in ambient coordinates."""
    sff = second_fundamental(spec, s)
    fr = frame(spec, t, s)
    sg = fr.signs
    H = np.zeros(4)
    for h, er, eps_r in ((sff.h3, fr.e3, sg[2]), (sff.h4, fr.e4, sg[3])):
        H += 0.5 * eps_r * (sg[0] * h[0, 0] + sg[1] * h[1, 1]) * er
    return H


def mean_curvature_vector(spec: SurfaceSpec, s: float, t: float = 0.0) -> np.ndarray:
    """Closed-form H = H_3 e3 + H_4 e4 in ambient coordinates."""
    inv = scalar_invariants(spec, s)
    fr = frame(spec, t, s)
    return inv.H[0] * fr.e3 + inv.H[1] * fr.e4


# --- covariant derivatives of the frame --------------------------------------

def connection_coefficients(inv: InvariantSample) -> Dict[Tuple[int, int], Tuple[float, ...]]:
    """Frame expansions of the ambient derivative of e_A along e_i (i = 1, 2)."""
    a, b, c, d = inv.a, inv.b, inv.c, inv.d
    zero = (0.0, 0.0, 0.0, 0.0)
    if inv.kind == "elliptic":
        return {(1, 1): (0, 0, -d, c), (2, 1): (0, a * b, 0, 0),
                (1, 2): zero, (2, 2): (a * b, 0, 0, -b),
                (1, 3): (d, 0, 0, -a * d), (2, 3): zero,
                (1, 4): (c, 0, -a * d, 0), (2, 4): (0, b, 0, 0)}
    if inv.kind == "hyperbolic":
        e = inv.epsilon
        return {(1, 1): (0, 0, e * d, -e * c), (2, 1): (0, a * b, 0, 0),
                (1, 2): zero, (2, 2): (a * b, 0, 0, b),
                (1, 3): (-d, 0, 0, -e * a * d), (2, 3): zero,
                (1, 4): (-c, 0, -e * a * d, 0), (2, 4): (0, -e * b, 0, 0)}
    return {(1, 1): (0, 0, c, b), (2, 1): (0, a, 0, 0),
            (1, 2): zero, (2, 2): (a, 0, 0, -a),
            (1, 3): (-c, 0, 0, c), (2, 3): zero,
            (1, 4): (b, 0, c, 0), (2, 4): (0, a, 0, 0)}


def connection_table(spec: SurfaceSpec, s: float, t: float, oracle: bool = False,
                     h: float = 1e-4) -> ConnectionTable:
    """Ambient derivatives of the frame fields along e1 and e2.

    With ``oracle=False`` the entries come from the closed-form tables.  With
    ``oracle=True`` they are central differences of the frame fields along the
    coordinate lines: e1 is d/ds and e2 is (+-1/|phi_t|) d/dt, with |phi_t| and
    the orientation taken from a finite difference of the embedding.
    """
    fr = frame(spec, t, s)
    if not oracle:
        coeffs = connection_coefficients(scalar_invariants(spec, s))
        basis = fr.vectors
        return ConnectionTable({k: np.asarray(v, dtype=float) @ basis for k, v in coeffs.items()}, fr)

    phi_t = (embed(spec, t + h, s) - embed(spec, t - h, s)) / (2 * h)
    rho = math.sqrt(abs(float(inner(phi_t, phi_t))))
    orient = math.copysign(1.0, float(inner(phi_t, fr.e2)) * fr.signs[1])
    plus_s, minus_s = frame(spec, t, s + h).vectors, frame(spec, t, s - h).vectors
    plus_t, minus_t = frame(spec, t + h, s).vectors, frame(spec, t - h, s).vectors
    d_s = (plus_s - minus_s) / (2 * h)
    d_t = orient * (plus_t - minus_t) / (2 * h * rho)
    entries = {}
    for A in range(4):
        entries[(1, A + 1)] = d_s[A]
        entries[(2, A + 1)] = d_t[A]
    return ConnectionTable(entries, fr)
