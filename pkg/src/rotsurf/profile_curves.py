"""Profile curves: built-in closed-form families and tabulated custom curves.

A profile curve is a unit-speed spacelike curve x(s) in R^4_2.  For each curve we
need a *jet* at s: the position and the first three arc-length derivatives, all
in standard coordinates.  Derivatives of the built-in families are exact closed
forms; positions that are only known as integrals are obtained by adaptive
quadrature anchored at the left end of ``s_domain`` (translation constants do not
affect any invariant).

Custom curves are given as uniformly spaced sample tables.  Their jets come from
the degree-6 interpolant through the 7 nearest nodes; at a node this is the usual
7-point central stencil, 4th-order accurate or better for all three derivatives.
The third derivative carries a roundoff floor of roughly ``eps_machine / h**3``
(about 1e-7 for h = 1e-3), so invariants of custom curves are much less precise
than those of the built-in families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import KroghInterpolator

from .errors import AdmissibilityError, DomainError, SpecError
from .pseudo_algebra import from_null_basis, inner

KINDS = ("elliptic", "hyperbolic", "parabolic")

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
DEFAULT_UNIT_SPEED_TOL = 1e-10
DEGENERACY_TOL = 1e-12
STENCIL_SIZE = 7

SQRT2 = math.sqrt(2.0)


# --- jet helpers: (f', f'', f''') of A*trig(theta) given theta', theta'' ---------

def _cos_jet(amp, th, th1, th2):
    c, s = math.cos(th), math.sin(th)
    return amp * c, -amp * s * th1, -amp * (c * th1 * th1 + s * th2)


def _sin_jet(amp, th, th1, th2):
    c, s = math.cos(th), math.sin(th)
    return amp * s, amp * c * th1, amp * (-s * th1 * th1 + c * th2)


def _cosh_jet(amp, th, th1, th2):
    ch, sh = math.cosh(th), math.sinh(th)
    return amp * ch, amp * sh * th1, amp * (ch * th1 * th1 + sh * th2)


def _sinh_jet(amp, th, th1, th2):
    ch, sh = math.cosh(th), math.sinh(th)
    return amp * sh, amp * ch * th1, amp * (sh * th1 * th1 + ch * th2)


def _columns(*comps):
    """Stack four (f', f'', f''') triples into a (3, 4) derivative array."""
    return np.array(comps, dtype=float).T


def _integrate(fn: Callable[[float], float], a: float, b: float) -> float:
    if a == b:
        return 0.0
    val, _ = quad(fn, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
    return val


# --- built-in families -------------------------------------------------------

@dataclass(frozen=True)
class _Family:
    kind: str
    required: tuple
    defaults: Mapping[str, float]
    derivatives: Callable  # (params, s) -> (3, 4) array
    position: Callable  # (params, s, s0) -> (4,) array
    radius: Callable  # (params, s) -> the coordinate that must stay positive
    check: Callable  # (params) -> None, raises SpecError


def _nonzero(name):
    def check(p):
        if p[name] == 0:
            raise SpecError(f"{name} must be non-zero", f"$.params.{name}")
    return check


def _ell_i_derivs(p, s):
    th = -p["delta1"] * s + p["delta2"]
    return _columns(_cos_jet(1.0, th, -p["delta1"], 0.0), _sin_jet(1.0, th, -p["delta1"], 0.0),
                    (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))


def _ell_i_position(p, s, s0):
    th = -p["delta1"] * s + p["delta2"]
    return np.array([-math.sin(th) / p["delta1"] + p["delta4"],
                     math.cos(th) / p["delta1"] + p["delta4b"],
                     p["delta3"], 0.0])


def _ell_ii_angle(p, s):
    l1, l2, l3, l4 = p["lambda1"], p["lambda2"], p["lambda3"], p["lambda4"]
    amp = math.sqrt(1.0 + l1 * l1)
    u = l1 * s + l2
    k = l3 / (l1 * amp)
    return amp, -k * math.log(u) + l4, -k * l1 / u, k * l1 * l1 / (u * u)


def _ell_ii_derivs(p, s):
    amp, th, th1, th2 = _ell_ii_angle(p, s)
    return _columns(_cos_jet(amp, th, th1, th2), _sin_jet(amp, th, th1, th2),
                    (p["lambda1"], 0.0, 0.0), (0.0, 0.0, 0.0))


def _ell_ii_position(p, s, s0):
    def vel(i):
        return lambda x: _ell_ii_derivs(p, x)[0, i]
    return np.array([_integrate(vel(0), s0, s), _integrate(vel(1), s0, s),
                     p["lambda1"] * s + p["lambda2"], 0.0])


def _check_ell_ii(p):
    _nonzero("lambda1")(p)


def _ell_min_derivs(p, s):
    r = p["r"]
    x3 = math.sqrt(r * r - s * s)
    return _columns((r / x3, r * s / x3**3, r * (r * r + 2 * s * s) / x3**5),
                    (0.0, 0.0, 0.0),
                    (-s / x3, -r * r / x3**3, -3 * r * r * s / x3**5),
                    (0.0, 0.0, 0.0))


def _ell_min_position(p, s, s0):
    r = p["r"]
    return np.array([r * math.asin(s / r) + p["x1_offset"], p["x2_offset"],
                     math.sqrt(r * r - s * s), 0.0])


def _check_positive(name):
    def check(p):
        if not p[name] > 0:
            raise SpecError(f"{name} must be positive", f"$.params.{name}")
    return check


def _hyp_i_derivs(p, s):
    th = -p["delta2"] * s + p["delta3"]
    return _columns((0.0, 0.0, 0.0), _cosh_jet(1.0, th, -p["delta2"], 0.0),
                    (0.0, 0.0, 0.0), _sinh_jet(1.0, th, -p["delta2"], 0.0))


def _hyp_i_position(p, s, s0):
    th = -p["delta2"] * s + p["delta3"]
    return np.array([p["delta1"], -math.sinh(th) / p["delta2"] + p["delta4"], 0.0,
                     -math.cosh(th) / p["delta2"] + p["delta4b"]])


def _check_hyp_i(p):
    _check_positive("delta1")(p)
    _nonzero("delta2")(p)


def _hyp_ii_angle(p, s):
    l1, l2, l3, l4 = p["lambda1"], p["lambda2"], p["lambda3"], p["lambda4"]
    amp = math.sqrt(l1 * l1 - 1.0)
    u = l1 * s + l2
    k = l3 / (l1 * amp)
    return amp, k * math.log(u) + l4, k * l1 / u, -k * l1 * l1 / (u * u)


def _hyp_ii_derivs(p, s):
    amp, th, th1, th2 = _hyp_ii_angle(p, s)
    return _columns((p["lambda1"], 0.0, 0.0), _sinh_jet(amp, th, th1, th2),
                    (0.0, 0.0, 0.0), _cosh_jet(amp, th, th1, th2))


def _hyp_ii_position(p, s, s0):
    def vel(i):
        return lambda x: _hyp_ii_derivs(p, x)[0, i]
    return np.array([p["lambda1"] * s + p["lambda2"], _integrate(vel(1), s0, s), 0.0,
                     _integrate(vel(3), s0, s)])


def _check_hyp_ii(p):
    if not p["lambda1"] ** 2 - 1.0 > 0:
        raise SpecError("lambda1**2 - 1 must be positive", "$.params.lambda1")


def _hyp_min_derivs(p, s):
    r = p["r"]
    x1 = math.sqrt(s * s + r * r)
    return _columns((s / x1, r * r / x1**3, -3 * r * r * s / x1**5),
                    (r / x1, -r * s / x1**3, r * (2 * s * s - r * r) / x1**5),
                    (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))


def _hyp_min_position(p, s, s0):
    r = p["r"]
    return np.array([math.sqrt(s * s + r * r), r * math.asinh(s / r) + p["x2_offset"], 0.0,
                     p["x4_offset"]])


def _par_null_derivs(p, s):
    """(x1, p, q) derivative triples of the flat harmonic parabolic family."""
    m1, m2, m4, eps = p["mu1"], p["mu2"], p["mu4"], p["epsilon"]
    u = m1 * s + m2
    x1d = (eps * math.log(u) + m4, eps * m1 / u, -eps * m1 * m1 / (u * u))
    pd = (m1, 0.0, 0.0)
    qd = ((x1d[0] ** 2 - 1.0) / (2 * m1),
          x1d[0] * x1d[1] / m1,
          (x1d[1] ** 2 + x1d[0] * x1d[2]) / m1)
    return x1d, pd, qd


def _par_derivs(p, s):
    x1d, pd, qd = _par_null_derivs(p, s)
    rows = [from_null_basis(x1d[k], pd[k], qd[k]) for k in range(3)]
    return np.array(rows)


def _par_position(p, s, s0):
    m1, m2, m4, m5, eps = p["mu1"], p["mu2"], p["mu4"], p["mu5"], p["epsilon"]
    u = m1 * s + m2
    x1 = eps / m1 * (math.log(u) * u) + (m4 - eps) * s + m5
    q = _integrate(lambda x: _par_null_derivs(p, x)[2][0], s0, s)
    return from_null_basis(x1, u, q)


def _check_par(p):
    _nonzero("mu1")(p)
    if p["epsilon"] not in (1, -1):
        raise SpecError("epsilon must be +1 or -1", "$.params.epsilon")


FAMILIES = {
    "elliptic_thm2_i": _Family(
        "elliptic", ("delta1", "delta3"), {"delta2": 0.0, "delta4": 0.0, "delta4b": None},
        _ell_i_derivs, _ell_i_position, lambda p, s: p["delta3"], _nonzero("delta1")),
    "elliptic_thm2_ii": _Family(
        "elliptic", ("lambda1", "lambda2", "lambda3"), {"lambda4": 0.0},
        _ell_ii_derivs, _ell_ii_position, lambda p, s: p["lambda1"] * s + p["lambda2"],
        _check_ell_ii),
    "elliptic_minimal": _Family(
        "elliptic", ("r",), {"x1_offset": 0.0, "x2_offset": 0.0},
        _ell_min_derivs, _ell_min_position,
        lambda p, s: math.sqrt(p["r"] ** 2 - s * s) if abs(s) < p["r"] else 0.0,
        _check_positive("r")),
    "hyperbolic_thm5_i": _Family(
        "hyperbolic", ("delta1", "delta2"), {"delta3": 0.0, "delta4": 0.0, "delta4b": None},
        _hyp_i_derivs, _hyp_i_position, lambda p, s: p["delta1"], _check_hyp_i),
    "hyperbolic_thm5_ii": _Family(
        "hyperbolic", ("lambda1", "lambda2", "lambda3"), {"lambda4": 0.0},
        _hyp_ii_derivs, _hyp_ii_position, lambda p, s: p["lambda1"] * s + p["lambda2"],
        _check_hyp_ii),
    "hyperbolic_minimal": _Family(
        "hyperbolic", ("r",), {"x2_offset": 0.0, "x4_offset": 0.0},
        _hyp_min_derivs, _hyp_min_position, lambda p, s: math.sqrt(s * s + p["r"] ** 2),
        _check_positive("r")),
    "parabolic_thm7": _Family(
        "parabolic", ("mu1", "mu2"), {"mu4": 0.0, "mu5": 0.0, "epsilon": 1.0},
        _par_derivs, _par_position, lambda p, s: p["mu1"] * s + p["mu2"], _check_par),
}

CUSTOM = "custom_analytic"
FAMILY_NAMES = tuple(FAMILIES) + (CUSTOM,)


# --- spec and jet types ------------------------------------------------------

@dataclass(frozen=True)
class CurveSpec:
    """A profile curve: family name, named constants and the arc-length domain.

    For ``custom_analytic`` curves ``samples`` holds rows ``(s, x1, x2, x3, x4)``
    on a uniform grid and ``kind`` says which surface type the table is meant for.
    Translation constants that the closed forms share between two coordinates
    (``delta4``) can be decoupled with ``delta4b``; by default both coordinates
    use the same value.
    """

    family: str
    params: Mapping[str, float] = field(default_factory=dict)
    s_domain: tuple = (0.0, 1.0)
    samples: Optional[np.ndarray] = None
    kind: Optional[str] = None

    def __post_init__(self):
        if self.family not in FAMILY_NAMES:
            raise SpecError(f"unknown family {self.family!r}; expected one of {FAMILY_NAMES}",
                            "$.family")
        a, b = (float(x) for x in self.s_domain)
        if not a < b:
            raise SpecError("s_domain must be an increasing interval [a, b]", "$.s_domain")
        object.__setattr__(self, "s_domain", (a, b))

        if self.family == CUSTOM:
            self._init_custom()
        else:
            fam = FAMILIES[self.family]
            if self.kind is not None and self.kind != fam.kind:
                raise SpecError(f"family {self.family} is of {fam.kind} type, not {self.kind}",
                                "$.kind")
            object.__setattr__(self, "kind", fam.kind)
            params = {}
            for name in fam.required:
                if name not in self.params:
                    raise SpecError("missing required parameter", f"$.params.{name}")
            for name, value in self.params.items():
                if name not in fam.required and name not in fam.defaults:
                    raise SpecError("unknown parameter", f"$.params.{name}")
                params[name] = float(value)
            for name, default in fam.defaults.items():
                params.setdefault(name, default)
            for pair in (("delta4b", "delta4"),):
                if pair[0] in params and params[pair[0]] is None:
                    params[pair[0]] = params[pair[1]]
            fam.check(params)
            object.__setattr__(self, "params", MappingProxyType(params))
            for end in (a, b):
                if not fam.radius(params, end) > 0:
                    raise AdmissibilityError(
                        f"{self.family}: positivity fails at s={end!r} on the domain")

    def _init_custom(self):
        if self.samples is None:
            raise SpecError("custom_analytic curves need a samples table", "$.samples")
        if self.kind is not None and self.kind not in KINDS:
            raise SpecError(f"kind must be one of {KINDS}", "$.kind")
        table = np.array(self.samples, dtype=float)
        if table.ndim != 2 or table.shape[1] != 5:
            raise SpecError("samples must be rows [s, x1, x2, x3, x4]", "$.samples")
        if table.shape[0] < STENCIL_SIZE:
            raise SpecError(f"need at least {STENCIL_SIZE} samples", "$.samples")
        steps = np.diff(table[:, 0])
        h = float(np.mean(steps))
        if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
            raise SpecError("samples must be uniformly spaced in increasing s", "$.samples")
        a, b = self.s_domain
        slack = 1e-9 * h
        if a < table[0, 0] - slack or b > table[-1, 0] + slack:
            raise SpecError("s_domain must lie inside the sampled range", "$.s_domain")
        table.setflags(write=False)
        object.__setattr__(self, "samples", table)
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    @property
    def spacing(self) -> Optional[float]:
        if self.samples is None:
            return None
        return float((self.samples[-1, 0] - self.samples[0, 0]) / (len(self.samples) - 1))

    def with_kind(self, kind: str) -> "CurveSpec":
        return self if self.kind == kind else replace(self, kind=kind)


@dataclass(frozen=True)
class CurveJet:
    """Position and arc-length derivatives at ``s`` in standard coordinates.

    ``x`` is ``None`` when the jet was evaluated without position.
    """

    s: float
    x: Optional[np.ndarray]
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    def null_components(self, order: int):
        """(x1, p, q) of the requested derivative order (0 = position)."""
        v = self.x if order == 0 else (self.d1, self.d2, self.d3)[order - 1]
        if v is None:
            raise ValueError("jet was evaluated without position")
        return v[0], (v[1] + v[2]) / SQRT2, (-v[1] + v[2]) / SQRT2


@dataclass(frozen=True)
class UnitSpeedReport:
    grid: np.ndarray
    residuals: np.ndarray
    tol: float

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


@dataclass(frozen=True)
class AdmissibilityFlags:
    positivity: bool
    nondegenerate_normal: bool
    epsilon: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.positivity and self.nondegenerate_normal


# --- operations --------------------------------------------------------------

def _check_domain(spec: CurveSpec, s: float):
    a, b = spec.s_domain
    slack = 1e-12 * max(1.0, abs(a), abs(b))
    if not (a - slack <= s <= b + slack):
        raise DomainError(f"s={s!r} outside s_domain [{a!r}, {b!r}]")


def _custom_jet(spec: CurveSpec, s: float, position: bool) -> CurveJet:
    table = spec.samples
    n = len(table)
    h = spec.spacing
    centre = int(round((s - table[0, 0]) / h))
    lo = min(max(centre - STENCIL_SIZE // 2, 0), n - STENCIL_SIZE)
    window = table[lo:lo + STENCIL_SIZE]
    # scaled abscissa keeps the divided differences well conditioned
    z0 = window[STENCIL_SIZE // 2, 0]
    interp = KroghInterpolator((window[:, 0] - z0) / h, window[:, 1:])
    ders = interp.derivatives((s - z0) / h, der=4)
    scale = np.array([1.0, 1.0 / h, 1.0 / h**2, 1.0 / h**3])[:, None]
    ders = ders * scale
    return CurveJet(s, ders[0] if position else None, ders[1], ders[2], ders[3])


def radius_coordinate(spec: CurveSpec, s: float, jet: Optional[CurveJet] = None) -> float:
    """The coordinate whose positivity the surface needs: x3, x1 or p by kind."""
    if spec.family != CUSTOM:
        return float(FAMILIES[spec.family].radius(spec.params, s))
    jet = jet if jet is not None and jet.x is not None else _custom_jet(spec, s, True)
    if spec.kind == "elliptic":
        return float(jet.x[2])
    if spec.kind == "hyperbolic":
        return float(jet.x[0])
    if spec.kind == "parabolic":
        return float(jet.null_components(0)[1])
    raise SpecError("custom curve has no kind; set it or attach it to a surface", "$.kind")


def evaluate_jet(spec: CurveSpec, s: float, *, position: bool = True) -> CurveJet:
    """Position and first three derivatives of the profile curve at ``s``.

    Raises:
        DomainError: ``s`` lies outside ``spec.s_domain``.
        AdmissibilityError: the family's positivity condition fails at ``s``.
    """
    s = float(s)
    _check_domain(spec, s)
    if spec.family == CUSTOM:
        jet = _custom_jet(spec, s, True)
        if spec.kind is not None and not radius_coordinate(spec, s, jet) > 0:
            raise AdmissibilityError(f"positivity fails at s={s!r}")
        return jet if position else replace(jet, x=None)
    fam = FAMILIES[spec.family]
    if not fam.radius(spec.params, s) > 0:
        raise AdmissibilityError(f"{spec.family}: positivity fails at s={s!r}")
    d = fam.derivatives(spec.params, s)
    x = fam.position(spec.params, s, spec.s_domain[0]) if position else None
    return CurveJet(s, x, d[0], d[1], d[2])


def check_unit_speed(spec: CurveSpec, grid, tol: float = DEFAULT_UNIT_SPEED_TOL) -> UnitSpeedReport:
    """Residual |<x', x'> - 1| at each grid point.

    The full quadratic form covers all three kinds: for parabolic curves
    x2'^2 - x3'^2 equals -2 p' q'.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    velocities = [evaluate_jet(spec, s, position=False).d1 for s in grid]
    res = np.array([abs(float(inner(v, v)) - 1.0) for v in velocities])
    return UnitSpeedReport(grid, res, tol)


def admissibility(spec: CurveSpec, s: float, kind: Optional[str] = None,
                  tol: float = DEGENERACY_TOL) -> AdmissibilityFlags:
    """Positivity and normal-bundle non-degeneracy flags at ``s``; never raises
    for geometric failures."""
    kind = kind or spec.kind
    if kind not in KINDS:
        raise SpecError("curve kind unknown; pass kind explicitly", "$.kind")
    spec = spec.with_kind(kind) if spec.family == CUSTOM else spec
    try:
        jet = evaluate_jet(spec, s, position=spec.family == CUSTOM)
    except AdmissibilityError:
        return AdmissibilityFlags(False, False, None)
    positive = radius_coordinate(spec, s, jet) > 0
    if kind == "elliptic":
        return AdmissibilityFlags(bool(positive), True, None)
    if kind == "hyperbolic":
        q = jet.d1[0] ** 2 - 1.0
        return AdmissibilityFlags(bool(positive), bool(abs(q) > tol), 1 if q > 0 else -1)
    pprime = jet.null_components(1)[1]
    return AdmissibilityFlags(bool(positive), bool(abs(pprime) > tol), None)


def tabulate(fn: Callable[[float], "np.ndarray"], s_range, count: int, kind: Optional[str] = None,
             s_domain=None) -> CurveSpec:
    """Build a custom curve by sampling ``fn(s) -> (x1, x2, x3, x4)`` on a uniform grid."""
    s_grid = np.linspace(s_range[0], s_range[1], count)
    table = np.column_stack([s_grid, np.array([fn(s) for s in s_grid], dtype=float)])
    return CurveSpec(CUSTOM, {}, tuple(s_domain or s_range), samples=table, kind=kind)


# --- JSON --------------------------------------------------------------------

def curve_from_dict(doc, path: str = "$") -> CurveSpec:
    if not isinstance(doc, Mapping):
        raise SpecError("curve spec must be an object", path)
    for key in ("family", "s_domain"):
        if key not in doc:
            raise SpecError("missing field", f"{path}.{key}")
    params = doc.get("params", {})
    if not isinstance(params, Mapping):
        raise SpecError("params must be an object", f"{path}.params")
    for name, value in params.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SpecError("parameter must be a number", f"{path}.params.{name}")
    dom = doc["s_domain"]
    if not (isinstance(dom, (list, tuple)) and len(dom) == 2):
        raise SpecError("s_domain must be [a, b]", f"{path}.s_domain")
    try:
        return CurveSpec(doc["family"], dict(params), tuple(dom),
                         samples=doc.get("samples"), kind=doc.get("kind"))
    except SpecError as exc:
        raise SpecError(exc.reason, path + exc.path[1:]) from None
    except (TypeError, ValueError) as exc:
        raise SpecError(str(exc), path) from None


def curve_to_dict(spec: CurveSpec) -> dict:
    doc = {"family": spec.family, "params": dict(spec.params), "s_domain": list(spec.s_domain)}
    if spec.kind is not None and spec.family == CUSTOM:
        doc["kind"] = spec.kind
    if spec.samples is not None:
        doc["samples"] = spec.samples.tolist()
    return doc
