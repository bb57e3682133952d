"""Entanglement of two trapped electrons with Coulomb and Darwin couplings.

Submodules
----------
constants   physical constants (CODATA 2018)
physics     couplings, zero-point spreads, squeezing bounds, dip locations
static      perturbed ground-state entanglement
gaussian    exact covariance-matrix dynamics of the quadratic model
fock        truncated Fock-space oracle
sweeps      parameter sweeps and CSV output
checks      oracle-check validation harness
"""

__version__ = "0.1.0"

from .constants import CODATA2018, CONSTANTS_VERSION, PhysicalConstants
from .gaussian import (
    entanglement_series,
    entropy_from_occupation,
    max_entropy,
)
from .physics import (
    INTERACTIONS,
    Couplings,
    TrapPair,
    couplings,
    dipole_decoherence_rate,
    dynamic_dip_squeezing,
    squeezing_bounds,
    static_dip_frequency,
    zero_point,
)
from .static import lambda_first_order, lambda_nonrelativistic, static_entropy, two_qubit_entropy

__all__ = [
    "__version__",
    "CODATA2018",
    "CONSTANTS_VERSION",
    "PhysicalConstants",
    "INTERACTIONS",
    "TrapPair",
    "Couplings",
    "couplings",
    "zero_point",
    "dipole_decoherence_rate",
    "dynamic_dip_squeezing",
    "squeezing_bounds",
    "static_dip_frequency",
    "lambda_first_order",
    "lambda_nonrelativistic",
    "static_entropy",
    "two_qubit_entropy",
    "entanglement_series",
    "entropy_from_occupation",
    "max_entropy",
]
