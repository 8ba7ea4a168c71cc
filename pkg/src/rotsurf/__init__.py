"""Rotational surfaces in pseudo-Euclidean 4-space of signature (2, 2).

Builds elliptic, hyperbolic and parabolic rotational surfaces from profile
curves, computes frames and curvature invariants, the Laplacian of the Gauss
map, and classifies the Gauss map as harmonic or pointwise 1-type.
"""

from .classifier import ClassificationResult, Tolerances, classify, is_parallel_mean_curvature, recover_f_and_C
from .errors import (
    AdmissibilityError,
    DomainError,
    InsufficientSamples,
    InvalidParams,
    RankDeficientWarning,
    RotsurfError,
    SpecError,
    StepError,
)
from .gauss_map import gauss_map, laplacian_gauss_map, laplacian_oracle
from .profile_curves import CurveSpec, check_unit_speed, evaluate_jet, tabulate
from .rotational_surfaces import SurfaceSpec, embed, frame, mean_curvature_vector, scalar_invariants
from .theorems import Report, verify_theorem

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "ClassificationResult", "CurveSpec", "DomainError", "InsufficientSamples",
    "InvalidParams", "RankDeficientWarning", "Report", "RotsurfError", "SpecError", "StepError",
    "SurfaceSpec", "Tolerances", "check_unit_speed", "classify", "embed", "evaluate_jet", "frame",
    "gauss_map", "is_parallel_mean_curvature", "laplacian_gauss_map", "laplacian_oracle",
    "mean_curvature_vector", "recover_f_and_C", "scalar_invariants", "tabulate", "verify_theorem",
]
