"""Pointwise 1-type detection: does Delta G = f (G + C) hold on a sample grid?

Substituting u = 1/f makes the relation linear in the unknowns,

    u_i * DeltaG_i - C = G_i        (i = 1..n),

so f at every sample and the constant bivector C come out of one linear least
squares solve.  Samples whose Laplacian is below the harmonic floor are left out
of the solve and get f = 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientSamples, RankDeficientWarning
from .gauss_map import DEFAULT_ORACLE_STEP, gauss_map, laplacian_coeffs, laplacian_gauss_map, laplacian_oracle
from .pseudo_algebra import inner
from .rotational_surfaces import SurfaceSpec, embed, frame, mean_curvature_vector

VERDICTS = ("harmonic", "first_kind", "second_kind", "global_one_type", "not_one_type")

DEFAULT_S_COUNT = 25
DEFAULT_MARGIN = 0.05
MIN_SAMPLES = 3


@dataclass(frozen=True)
class Tolerances:
    harmonic_floor: float = 1e-9
    residual: float = 1e-4
    c_zero: float = 1e-6
    f_constant: float = 1e-6

    def loosened(self, factor: float) -> "Tolerances":
        return Tolerances(*(factor * v for v in (self.harmonic_floor, self.residual,
                                                  self.c_zero, self.f_constant)))


CLOSED_FORM_TOLERANCES = Tolerances()
# finite-difference truncation error dominates on the oracle path
ORACLE_TOLERANCES = CLOSED_FORM_TOLERANCES.loosened(100.0)


@dataclass(frozen=True)
class Recovery:
    f: np.ndarray
    C: np.ndarray
    residual: float
    harmonic: np.ndarray  # boolean mask of samples treated as harmonic
    rank_deficient: bool = False

    @property
    def all_harmonic(self) -> bool:
        return bool(np.all(self.harmonic))


@dataclass(frozen=True)
class ClassificationResult:
    verdict: str
    f_samples: List[Tuple[float, float]]
    C: np.ndarray
    residual: float
    path: str = "closed"
    t_fixed: float = 0.0
    constant_f: bool = False
    rank_deficient: bool = False
    max_deltaG: float = 0.0
    scale: float = 1.0
    f_formula_match: Optional[dict] = None

    @property
    def f(self) -> np.ndarray:
        return np.array([f for _, f in self.f_samples])

    @property
    def s(self) -> np.ndarray:
        return np.array([s for s, _ in self.f_samples])

    def to_dict(self) -> dict:
        doc = {
            "verdict": self.verdict,
            "path": self.path,
            "t_fixed": self.t_fixed,
            "residual": self.residual,
            "C": [float(x) for x in self.C],
            "constant_f": self.constant_f,
            "rank_deficient": self.rank_deficient,
            "max_deltaG": self.max_deltaG,
            "scale": self.scale,
            "f_samples": [[float(s), float(f)] for s, f in self.f_samples],
        }
        if self.f_formula_match is not None:
            doc["f_formula_match"] = dict(self.f_formula_match)
        return doc


def _norms(arr) -> np.ndarray:
    return np.linalg.norm(np.asarray(arr, dtype=float), axis=-1)


def recover_f_and_C(G: Sequence, deltaG: Sequence, harmonic_floor: float = 1e-9) -> Recovery:
    """Solve Delta G_i = f_i (G_i + C) for per-sample f_i and a constant C.

    Args:
        G: Gauss map samples, shape (n, 6).
        deltaG: Laplacian samples, shape (n, 6).
        harmonic_floor: a sample with |Delta G_i| <= floor * max(1, |G_i|) counts
            as harmonic and is excluded from the solve.

    Returns:
        Recovery with f (0 at harmonic samples), C, and the relative residual
        max_i |Delta G_i - f_i (G_i + C)| / max_i |Delta G_i|.  If every sample is
        harmonic, f and C are zero and the residual is 0.

    Raises:
        InsufficientSamples: fewer than three non-harmonic samples.
    """
    G = np.asarray(G, dtype=float)
    dG = np.asarray(deltaG, dtype=float)
    if G.shape != dG.shape or G.ndim != 2 or G.shape[1] != 6:
        raise ValueError("G and deltaG must both have shape (n, 6)")
    harmonic = _norms(dG) <= harmonic_floor * np.maximum(1.0, _norms(G))
    n_active = int(np.sum(~harmonic))
    if n_active == 0:
        return Recovery(np.zeros(len(G)), np.zeros(6), 0.0, harmonic)
    if n_active < MIN_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_SAMPLES} non-harmonic samples, got {n_active}")

    active = np.flatnonzero(~harmonic)
    A = np.zeros((6 * n_active, n_active + 6))
    for k, i in enumerate(active):
        A[6 * k:6 * k + 6, k] = dG[i]
        A[6 * k:6 * k + 6, n_active:] = -np.eye(6)
    rhs = G[active].reshape(-1)
    sol, _, rank, _ = np.linalg.lstsq(A, rhs, rcond=None)
    rank_deficient = rank < n_active + 6
    if rank_deficient:
        warnings.warn("least-squares system is rank deficient; C is the minimal-norm solution",
                      RankDeficientWarning, stacklevel=2)

    f = np.zeros(len(G))
    with np.errstate(divide="ignore"):
        f[active] = 1.0 / sol[:n_active]
    C = sol[n_active:]
    misfit = _norms(dG - f[:, None] * (G + C))
    residual = float(np.max(misfit) / np.max(_norms(dG)))
    return Recovery(f, C, residual, harmonic, bool(rank_deficient))


def default_s_grid(spec: SurfaceSpec, count: int = DEFAULT_S_COUNT, margin: float = DEFAULT_MARGIN) -> np.ndarray:
    a, b = spec.s_domain
    pad = margin * (b - a)
    return np.linspace(a + pad, b - pad, count)


def default_t(spec: SurfaceSpec) -> float:
    return 0.5 * (spec.t_domain[0] + spec.t_domain[1])


def sample_gauss_map(spec: SurfaceSpec, s_grid, t: float, path: str = "closed",
                     h: float = DEFAULT_ORACLE_STEP) -> Tuple[np.ndarray, np.ndarray]:
    """(G, Delta G) on the s-grid at fixed t; ``path`` is ``closed`` or ``oracle``."""
    if path not in ("closed", "oracle"):
        raise ValueError("path must be 'closed' or 'oracle'")
    Gs, dGs = [], []
    for s in s_grid:
        if path == "closed":
            sample = laplacian_gauss_map(spec, t, s)
            Gs.append(sample.G)
            dGs.append(sample.deltaG_ambient)
        else:
            Gs.append(gauss_map(spec, t, s))
            dGs.append(laplacian_oracle(spec, t, s, h))
    return np.array(Gs), np.array(dGs)


def compare_f(s_grid, f, harmonic, f_reference: Callable[[float], float]) -> dict:
    ref = np.array([f_reference(s) for s in s_grid])
    abs_err = np.abs(np.asarray(f) - ref)
    nonzero = np.abs(ref) > 0
    rel = float(np.max(abs_err[nonzero] / np.abs(ref[nonzero]))) if np.any(nonzero) else 0.0
    return {"max_abs_error": float(np.max(abs_err)), "max_rel_error": rel}


def classify_samples(s_grid, G, dG, tolerances: Tolerances = CLOSED_FORM_TOLERANCES,
                     path: str = "closed", t_fixed: float = 0.0,
                     f_reference: Optional[Callable[[float], float]] = None) -> ClassificationResult:
    """Verdict for precomputed samples; see :func:`classify`."""
    s_grid = np.asarray(s_grid, dtype=float)
    G = np.asarray(G, dtype=float)
    dG = np.asarray(dG, dtype=float)
    scale = float(max(1.0, np.max(_norms(G))))
    max_dG = float(np.max(_norms(dG)))
    rec = recover_f_and_C(G, dG, tolerances.harmonic_floor)
    active = ~rec.harmonic
    f_act = rec.f[active]
    constant_f = bool(f_act.size == 0 or np.std(f_act) <= tolerances.f_constant * abs(np.mean(f_act)))
    if rec.all_harmonic:
        verdict = "harmonic"
    elif rec.residual > tolerances.residual:
        verdict = "not_one_type"
    elif np.linalg.norm(rec.C) <= tolerances.c_zero * scale:
        verdict = "first_kind"
    elif constant_f:
        verdict = "global_one_type"
    else:
        verdict = "second_kind"
    match = None if f_reference is None else compare_f(s_grid, rec.f, rec.harmonic, f_reference)
    return ClassificationResult(
        verdict=verdict,
        f_samples=[(float(s), float(f)) for s, f in zip(s_grid, rec.f)],
        C=rec.C,
        residual=rec.residual,
        path=path,
        t_fixed=float(t_fixed),
        constant_f=constant_f,
        rank_deficient=rec.rank_deficient,
        max_deltaG=max_dG,
        scale=scale,
        f_formula_match=match,
    )


def classify(spec: SurfaceSpec, s_grid=None, t_fixed: Optional[float] = None,
             tolerances: Optional[Tolerances] = None, path: str = "closed",
             f_reference: Optional[Callable[[float], float]] = None,
             h: float = DEFAULT_ORACLE_STEP) -> ClassificationResult:
    """Classify the Gauss map of ``spec`` as harmonic, first kind, second kind,
    global 1-type or not 1-type.

    Precedence: harmonic, then not_one_type when the fit residual exceeds the
    threshold, then first_kind when C vanishes, then global_one_type when f is
    constant, else second_kind.  ``path='oracle'`` takes Delta G from the
    finite-difference Laplacian and uses 100x looser tolerances by default.
    """
    s_grid = default_s_grid(spec) if s_grid is None else np.asarray(s_grid, dtype=float)
    t = default_t(spec) if t_fixed is None else float(t_fixed)
    if tolerances is None:
        tolerances = ORACLE_TOLERANCES if path == "oracle" else CLOSED_FORM_TOLERANCES
    G, dG = sample_gauss_map(spec, s_grid, t, path, h)
    return classify_samples(s_grid, G, dG, tolerances, path, t, f_reference)


def is_parallel_mean_curvature(spec: SurfaceSpec, s_grid=None, tol: float = 1e-9) -> Tuple[bool, float]:
    """Whether H is parallel in the normal bundle, judged by max(|M|, |N|) <= tol.

    The normal derivative of H along e1 is (M e3 + N e4)/2 for all three types
    and the derivative along e2 vanishes, so DH = 0 exactly when M = N = 0.
    """
    s_grid = default_s_grid(spec) if s_grid is None else s_grid
    worst = 0.0
    for s in s_grid:
        _, M, N = laplacian_coeffs(spec, s)
        worst = max(worst, abs(M), abs(N))
    return worst <= tol, worst


def normal_derivative_of_H(spec: SurfaceSpec, s: float, t: float, h: float = 1e-4) -> Tuple[np.ndarray, np.ndarray]:
    """Finite-difference normal derivatives D_{e1} H and D_{e2} H in ambient coordinates."""
    fr = frame(spec, t, s)
    normals = ((fr.e3, fr.signs[2]), (fr.e4, fr.signs[3]))

    def normal_part(v):
        return sum(float(inner(v, n)) * sg * n for n, sg in normals)

    dH_s = (mean_curvature_vector(spec, s + h, t) - mean_curvature_vector(spec, s - h, t)) / (2 * h)
    phi_t = (embed(spec, t + h, s) - embed(spec, t - h, s)) / (2 * h)
    rho = math.sqrt(abs(float(inner(phi_t, phi_t))))
    dH_t = (mean_curvature_vector(spec, s, t + h) - mean_curvature_vector(spec, s, t - h)) / (2 * h * rho)
    return normal_part(dH_s), normal_part(dH_t)
