"""Mutually unbiased bases, the MUB correlation witness and its separable-state bounds."""

from .mub import MubSet, family_set, hw_set, verify_mub_set
from .optimize import BoundEstimate, OptimizerConfig, lower_bound
from .states import DensityMatrix, is_ppt, magic_simplex_state, werner_state
from .witness import upper_bound, witness_value

__version__ = "0.1.0"

__all__ = [
    "BoundEstimate",
    "DensityMatrix",
    "MubSet",
    "OptimizerConfig",
    "family_set",
    "hw_set",
    "is_ppt",
    "lower_bound",
    "magic_simplex_state",
    "upper_bound",
    "verify_mub_set",
    "werner_state",
    "witness_value",
    "__version__",
]
