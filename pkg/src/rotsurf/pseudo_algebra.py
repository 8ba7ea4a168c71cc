"""Linear algebra in R^4 with the neutral metric (+, +, -, -) and its exterior square.

Vectors are plain ``numpy`` arrays of shape ``(..., 4)`` in the standard basis
eps1..eps4.  Bivectors are arrays of shape ``(..., 6)`` in the fixed basis order
(12, 13, 14, 23, 24, 34).  All functions broadcast over leading axes.
"""

from __future__ import annotations

import numpy as np

METRIC_SIGNS = np.array([1.0, 1.0, -1.0, -1.0])

BIVECTOR_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
BIVECTOR_LABELS = ("12", "13", "14", "23", "24", "34")

# <ei^ej, ei^ej> = sign_i * sign_j for the diagonal basis above
BIVECTOR_SIGNS = np.array([METRIC_SIGNS[i] * METRIC_SIGNS[j] for i, j in BIVECTOR_PAIRS])

DEFAULT_LIGHTLIKE_TOL = 1e-12

# null basis used by surfaces of parabolic type
XI2 = np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0)
XI3 = np.array([0.0, -1.0, 1.0, 0.0]) / np.sqrt(2.0)

Vector4 = np.ndarray
Bivector6 = np.ndarray


def basis_vector(i: int) -> Vector4:
    """Standard basis vector eps_i, 1-based to match the usual notation."""
    if not 1 <= i <= 4:
        raise ValueError(f"basis index must be in 1..4, got {i}")
    v = np.zeros(4)
    v[i - 1] = 1.0
    return v


def vector(x1, x2, x3, x4) -> Vector4:
    return np.array([x1, x2, x3, x4], dtype=float)


def inner(u, v):
    """Indefinite inner product u1 v1 + u2 v2 - u3 v3 - u4 v4."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.sum(u * v * METRIC_SIGNS, axis=-1)


def norm_squared(v):
    return inner(v, v)


def causal_character(v, tol: float = DEFAULT_LIGHTLIKE_TOL) -> str:
    """Classify a single vector as spacelike, timelike, lightlike or zero.

    ``tol`` applies both to the quadratic form and to the coordinate norm.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    q = float(inner(v, v))
    if q > tol:
        return "spacelike"
    if q < -tol:
        return "timelike"
    if float(np.linalg.norm(v)) > tol:
        return "lightlike"
    return "zero"


def wedge(u, v) -> Bivector6:
    """Exterior product with coordinates c_ij = u_i v_j - u_j v_i, i < j."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.stack([u[..., i] * v[..., j] - u[..., j] * v[..., i] for i, j in BIVECTOR_PAIRS], axis=-1)


def inner_bivector(a, b):
    """Induced inner product on the exterior square.

    On decomposables this is <a^b, c^d> = <a,c><b,d> - <a,d><b,c>, which in the
    coordinate basis is diagonal with signs (+, -, -, -, -, +).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.sum(a * b * BIVECTOR_SIGNS, axis=-1)


def gram_determinant_form(a, b, c, d):
    """Reference value <a,c><b,d> - <a,d><b,c> used to test :func:`inner_bivector`."""
    return inner(a, c) * inner(b, d) - inner(a, d) * inner(b, c)


def from_null_basis(x1, p, q, x4=0.0):
    """Standard coordinates of x1 eps1 + p xi2 + q xi3 + x4 eps4."""
    r = np.sqrt(2.0)
    return np.array([x1, (p - q) / r, (p + q) / r, x4], dtype=float)


def to_null_basis(v):
    """Return (x1, p, q, x4) with p = (x2 + x3)/sqrt2 and q = (-x2 + x3)/sqrt2."""
    v = np.asarray(v, dtype=float)
    r = np.sqrt(2.0)
    return v[..., 0], (v[..., 1] + v[..., 2]) / r, (-v[..., 1] + v[..., 2]) / r, v[..., 3]
