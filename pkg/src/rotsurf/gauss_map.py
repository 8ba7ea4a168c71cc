"""Gauss map G = e1 ^ e2 and its Laplacian.

For every rotational surface considered here

    Delta G = L(s) e1^e2 + M(s) e2^e3 + N(s) e2^e4,

with L, M, N built from a, b, c, d and their first derivatives.  The Laplacian
uses the sign convention Delta f = -sum_i eps_i (e_i e_i f - (nabla_{e_i} e_i) f).

:func:`laplacian_oracle` evaluates that operator directly with nested central
differences of ``embed`` and ``gauss_map``.  It never touches a, b, c, d or the
connection tables, which makes it an independent check of the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from .errors import StepError
from .pseudo_algebra import BIVECTOR_PAIRS, inner, inner_bivector, wedge
from .rotational_surfaces import (
    FramePoint,
    InvariantSample,
    SurfaceSpec,
    embed,
    frame,
    scalar_invariants,
)

DEFAULT_ORACLE_STEP = 1e-3


@dataclass(frozen=True)
class GaussMapSample:
    t: float
    s: float
    G: np.ndarray
    L: float
    M: float
    N: float
    deltaG_frame: np.ndarray  # along (e1^e2, e2^e3, e2^e4)
    deltaG_ambient: np.ndarray


def gauss_map(spec: SurfaceSpec, t: float, s: float) -> np.ndarray:
    fr = frame(spec, t, s)
    return wedge(fr.e1, fr.e2)


def coefficients_from_invariants(inv: InvariantSample, printed: bool = False) -> Tuple[float, float, float]:
    """L, M, N for one invariant sample.

    For the elliptic type the e2^e3 coefficient of Delta G is
    -(d' + a d (b + c)); the printed closed form carries the opposite overall
    sign.  ``printed=True`` returns that printed variant so the two can be
    compared against the oracle.  Only M of the elliptic type is affected.
    """
    a, b, c, d = inv.a, inv.b, inv.c, inv.d
    da, db, dc, dd = inv.da, inv.db, inv.dc, inv.dd
    if inv.kind == "elliptic":
        L = d * d - b * b - c * c
        M = dd + a * d * (b + c)
        N = db + dc + a * d * d
        return L, (M if printed else -M), N
    if inv.kind == "hyperbolic":
        e = inv.epsilon
        L = e * (d * d - c * c - b * b)
        M = e * (dd + e * a * d * (c + e * b))
        N = -e * (dc + e * db + e * a * d * d)
        return L, M, N
    L = c * c - a * a - b * b
    M = dc + c * (a + b)
    N = c * c + da + db
    return L, M, N


def laplacian_coeffs(spec: SurfaceSpec, s: float, printed: bool = False) -> Tuple[float, float, float]:
    return tuple(float(x) for x in coefficients_from_invariants(scalar_invariants(spec, s), printed))


def frame_bivectors(fr: FramePoint) -> np.ndarray:
    """The six e_A ^ e_B (A < B) in ambient coordinates, rows in basis order."""
    v = fr.vectors
    return np.array([wedge(v[i], v[j]) for i, j in BIVECTOR_PAIRS])


def frame_components(bivector, fr: FramePoint) -> np.ndarray:
    """Expansion of an ambient bivector along e_A ^ e_B (A < B).

    The six frame bivectors are mutually orthogonal with squared norms
    sign_A * sign_B, so each coefficient is a single inner product.
    """
    out = []
    for (i, j), w in zip(BIVECTOR_PAIRS, frame_bivectors(fr)):
        out.append(float(inner_bivector(bivector, w)) * fr.signs[i] * fr.signs[j])
    return np.array(out)


def assemble(fr: FramePoint, L: float, M: float, N: float) -> np.ndarray:
    return L * wedge(fr.e1, fr.e2) + M * wedge(fr.e2, fr.e3) + N * wedge(fr.e2, fr.e4)


def laplacian_gauss_map(spec: SurfaceSpec, t: float, s: float, printed: bool = False) -> GaussMapSample:
    fr = frame(spec, t, s)
    L, M, N = laplacian_coeffs(spec, s, printed)
    return GaussMapSample(float(t), float(s), wedge(fr.e1, fr.e2), L, M, N,
                          np.array([L, M, N]), assemble(fr, L, M, N))


# --- finite-difference oracle -------------------------------------------------

def _check_reach(spec: SurfaceSpec, t: float, s: float, reach: float):
    for val, (lo, hi), name in ((s, spec.s_domain, "s"), (t, spec.t_domain, "t")):
        if val - reach < lo or val + reach > hi:
            raise StepError(f"{name}={val!r} is closer than {reach!r} to the boundary of [{lo!r}, {hi!r}]")


def _oracle_single_step(spec: SurfaceSpec, t: float, s: float, h: float) -> np.ndarray:
    phi = lru_cache(maxsize=None)(lambda tt, ss: embed(spec, tt, ss))
    G = lru_cache(maxsize=None)(lambda tt, ss: gauss_map(spec, tt, ss))

    def tangent(i, tt, ss):
        if i == 0:
            return (phi(tt, ss + h) - phi(tt, ss - h)) / (2 * h)
        return (phi(tt + h, ss) - phi(tt - h, ss)) / (2 * h)

    def speed(i, tt, ss):
        v = tangent(i, tt, ss)
        return math.sqrt(abs(float(inner(v, v))))

    def unit(i, tt, ss):
        return tangent(i, tt, ss) / speed(i, tt, ss)

    def along(i, field):
        """Derivative of ``field`` along the unit tangent of coordinate line i."""
        def derived(tt, ss):
            if i == 0:
                diff = field(tt, ss + h) - field(tt, ss - h)
            else:
                diff = field(tt + h, ss) - field(tt - h, ss)
            return diff / (2 * h * speed(i, tt, ss))
        return derived

    units = [unit(0, t, s), unit(1, t, s)]
    gram = np.array([[float(inner(u, v)) for v in units] for u in units])
    first = [along(0, G)(t, s), along(1, G)(t, s)]
    total = np.zeros(6)
    for i in range(2):
        second = along(i, along(i, G))(t, s)
        accel = along(i, lambda tt, ss, i=i: unit(i, tt, ss))(t, s)
        # tangential part of the ambient acceleration, expressed in the unit tangents
        kappa = np.linalg.solve(gram, [float(inner(accel, u)) for u in units])
        correction = kappa[0] * first[0] + kappa[1] * first[1]
        total -= math.copysign(1.0, gram[i, i]) * (second - correction)
    return total


def laplacian_oracle(spec: SurfaceSpec, t: float, s: float, h: float = DEFAULT_ORACLE_STEP,
                     richardson: bool = True) -> np.ndarray:
    """Delta G at (t, s) by central differences on ambient coordinates.

    With ``richardson=True`` the results for steps h and h/2 are combined as
    (4 D(h/2) - D(h)) / 3, cancelling the h^2 error term.

    Raises:
        StepError: the stencil (reach 2h) would leave the domain.
    """
    if not h > 0:
        raise StepError("h must be positive")
    _check_reach(spec, t, s, 2 * h)
    coarse = _oracle_single_step(spec, t, s, h)
    if not richardson:
        return coarse
    fine = _oracle_single_step(spec, t, s, h / 2)
    return (4.0 * fine - coarse) / 3.0
