"""Physical constants used by every formula in the package.

Values are CODATA 2018 (SI). They are hard-coded rather than taken from
``scipy.constants`` because newer SciPy releases ship CODATA 2022, and the
numbers reported by this package must not drift with the installed SciPy.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

CONSTANTS_VERSION = "CODATA-2018"


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units."""

    elementary_charge: float = 1.602176634e-19  # C (exact)
    vacuum_permittivity: float = 8.8541878128e-12  # F/m
    vacuum_permeability: float = 1.25663706212e-6  # H/m
    electron_mass: float = 9.1093837015e-31  # kg
    speed_of_light: float = 299792458.0  # m/s (exact)
    reduced_planck: float = 1.054571817e-34  # J s (exact to the digits shown)

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value!r}")

    # short aliases, read-only
    @property
    def e(self) -> float:
        return self.elementary_charge

    @property
    def eps0(self) -> float:
        return self.vacuum_permittivity

    @property
    def mu0(self) -> float:
        return self.vacuum_permeability

    @property
    def m_e(self) -> float:
        return self.electron_mass

    @property
    def c(self) -> float:
        return self.speed_of_light

    @property
    def hbar(self) -> float:
        return self.reduced_planck

    @property
    def coulomb_strength(self) -> float:
        """e^2 / (4 pi eps0), in J m."""
        return self.e**2 / (4.0 * math.pi * self.eps0)

    def maxwell_residual(self) -> float:
        """Relative deviation of mu0 * eps0 * c^2 from one."""
        return self.mu0 * self.eps0 * self.c**2 - 1.0

    def as_dict(self) -> dict:
        return asdict(self)


CODATA2018 = PhysicalConstants()
