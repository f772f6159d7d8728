"""Shared numerical tolerances.

Tests, the CLI and the library all read the same record so a tolerance is
changed in exactly one place.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unitarity: float = 1e-10
    norm: float = 1e-10
    equality: float = 1e-12
    vector_norm: float = 1e-12
    # conditions on canonical coefficients (zeros, reality, ordering)
    condition: float = 1e-9
    # below this a coefficient is treated as zero when fixing phases
    phase_zero: float = 1e-9
    # power iteration stopping rule
    overlap_change: float = 1e-13
    residual: float = 1e-10
    # an environment vector this small cannot be normalised
    zero_environment: float = 1e-14


TOL = Tolerances()
