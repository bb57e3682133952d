"""Closed-form scalar quantities of two trapped electrons.

Everything here is a pure function of a :class:`TrapPair` (mass, angular
trap frequency, trap separation, squeezing) and the physical constants.
Frequencies are angular frequencies in rad/s throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CODATA2018, PhysicalConstants


@dataclass(frozen=True)
class TrapPair:
    """Two identical harmonic traps centred at -d/2 and +d/2.

    Parameters
    ----------
    omega : float
        Angular trap frequency, rad/s.
    d : float
        Distance between the trap centres, m.
    xi : float
        Squeezing parameter of the initial state. Positive values squeeze
        position. Values outside the separation bounds are accepted; see
        :func:`squeezing_bounds`.
    mass : float
        Particle mass, kg. Defaults to the electron mass.
    """

    omega: float
    d: float
    xi: float = 0.0
    mass: float = CODATA2018.electron_mass

    def __post_init__(self):
        for name in ("omega", "d", "mass"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"TrapPair.{name} must be finite and > 0, got {value!r}")
        if not math.isfinite(self.xi):
            raise ValueError(f"TrapPair.xi must be finite, got {self.xi!r}")

    def with_xi(self, xi: float) -> "TrapPair":
        return TrapPair(self.omega, self.d, xi, self.mass)


@dataclass(frozen=True)
class Couplings:
    """Coulomb and Darwin coupling rates and the shifted oscillation frequency.

    ``g_c`` multiplies the position-position coupling, ``g_d`` the
    momentum-momentum coupling; both in rad/s.
    """

    g_c: float
    g_d: float
    omega_eff: float

    @classmethod
    def from_rates(cls, g_c: float, g_d: float, omega: float) -> "Couplings":
        """Build couplings from arbitrary rates, e.g. for oracle tests."""
        return cls(g_c, g_d, math.sqrt(omega**2 - 4.0 * g_c * g_d))

    def select(self, interaction: str, omega: float) -> "Couplings":
        """Keep only the terms named by ``interaction``.

        ``interaction`` is one of ``coulomb_only``, ``darwin_only``,
        ``coulomb_plus_darwin`` or ``none``.
        """
        g_c, g_d = self.g_c, self.g_d
        if interaction == "coulomb_plus_darwin":
            return self
        if interaction == "coulomb_only":
            g_d = 0.0
        elif interaction == "darwin_only":
            g_c = 0.0
        elif interaction == "none":
            g_c = g_d = 0.0
        else:
            raise ValueError(f"unknown interaction {interaction!r}")
        return Couplings.from_rates(g_c, g_d, omega)


INTERACTIONS = ("coulomb_only", "darwin_only", "coulomb_plus_darwin", "none")


@dataclass(frozen=True)
class ZeroPoint:
    """Ground-state position and momentum spreads."""

    dx: float  # m
    dp: float  # kg m / s


def couplings(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> Couplings:
    """Coupling rates of the leading-order interaction.

    g_C = -e^2 / (4 pi eps0 m omega d^3) comes from the Coulomb potential
    expanded to second order in the displacements; g_D =
    3 omega e^2 / (16 pi eps0 m d c^2) from the Darwin term. The effective
    frequency is evaluated in the closed form

        omega_eff = omega * sqrt(1 + 3 e^4 / (16 pi^2 eps0^2 m^2 omega^2 c^2 d^4))

    which equals sqrt(omega^2 - 4 g_C g_D).
    """
    k = const.coulomb_strength / tp.mass  # e^2 / (4 pi eps0 m), m^3/s^2
    g_c = -k / (tp.omega * tp.d**3)
    g_d = 0.75 * tp.omega * k / (tp.d * const.c**2)
    x = 3.0 * k**2 / (tp.omega**2 * const.c**2 * tp.d**4)
    return Couplings(g_c, g_d, tp.omega * math.sqrt(1.0 + x))


def zero_point(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> ZeroPoint:
    return ZeroPoint(
        dx=math.sqrt(const.hbar / (2.0 * tp.mass * tp.omega)),
        dp=math.sqrt(tp.mass * tp.omega * const.hbar / 2.0),
    )


def static_dip_frequency(d: float, const: PhysicalConstants = CODATA2018) -> float:
    """Trap frequency at which the first-order Coulomb and Darwin amplitudes cancel."""
    return 2.0 * const.c / (math.sqrt(3.0) * d)


def dynamic_dip_squeezing(omega: float, d: float, const: PhysicalConstants = CODATA2018) -> float:
    """Squeezing for which |g_C| exp(-2 xi) equals |g_D| exp(2 xi).

    The ratio |g_C| / |g_D| reduces to 4 c^2 / (3 omega^2 d^2), independent of
    mass and charge. The result may be negative or beyond the separation
    bound; interpreting it is left to the caller.
    """
    return 0.25 * math.log(4.0 * const.c**2 / (3.0 * omega**2 * d**2))


def squeezing_bounds(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> tuple[float, float]:
    """Lower and upper squeezing bounds ``(xi_x, xi_p)``.

    Requiring the squeezed position spread and, a quarter period later, the
    anti-squeezed spread to stay below ``d`` gives ``xi_x <= xi <= xi_p``
    with ``xi_x = -xi_p``.
    """
    xi_p = 0.5 * math.log(2.0 * tp.mass * tp.omega * tp.d**2 / const.hbar)
    return -xi_p, xi_p


def in_squeezing_bounds(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> bool:
    xi_x, xi_p = squeezing_bounds(tp, const)
    return xi_x <= tp.xi <= xi_p


def interaction_phases(
    tp: TrapPair, tau: float, const: PhysicalConstants = CODATA2018
) -> tuple[float, float]:
    """Order-of-magnitude phases ``(g_C tau, g_D tau)`` accumulated in time ``tau``."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    cpl = couplings(tp, const)
    return cpl.g_c * tau, cpl.g_d * tau


def dipole_decoherence_rate(
    omega: float, mass: float = CODATA2018.electron_mass, const: PhysicalConstants = CODATA2018
) -> float:
    """Radiative (dipole emission) decoherence rate mu0 e^2 omega^2 / (6 pi m c), in Hz."""
    if omega <= 0 or mass <= 0:
        raise ValueError("omega and mass must be > 0")
    return const.mu0 * const.e**2 * omega**2 / (6.0 * math.pi * mass * const.c)
