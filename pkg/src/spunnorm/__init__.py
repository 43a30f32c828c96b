"""Thurston norm balls of cusped 3-manifolds via transversely oriented spun-normal surfaces."""

from .errors import ContractViolation, InputError, ReconstructionError, SpunNormError
from .normball import Pipeline, compute_norm_ball, enumerate_qtons, knot_upper_bound
from .snappea import import_snappea
from .surfaces import analyze, haken_sum, is_embedded, orientation_lifts, reconstruct
from .triangulation import Triangulation, load_native

__all__ = [
    "ContractViolation",
    "InputError",
    "Pipeline",
    "ReconstructionError",
    "SpunNormError",
    "Triangulation",
    "analyze",
    "compute_norm_ball",
    "enumerate_qtons",
    "haken_sum",
    "import_snappea",
    "is_embedded",
    "knot_upper_bound",
    "load_native",
    "orientation_lifts",
    "reconstruct",
]
