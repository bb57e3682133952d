"""Entanglement of the perturbed ground state.

First-order non-degenerate perturbation theory on the global vacuum |00>
gives the two-qubit state (|00> + lam |11>) / sqrt(1 + lam^2). The
higher-order Darwin terms add amplitudes on a handful of further kets; that
state is built explicitly on a 4x4 two-mode Fock grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA2018, PhysicalConstants
from .physics import TrapPair

# highest occupation reached by the higher-order state is 3
HIGHER_ORDER_LEVELS = 4


def log_in_base(x, base: float):
    if base == 2:
        return np.log2(x)
    return np.log(x) / np.log(base)


def lambda_first_order(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> float:
    """Amplitude of |11> with Coulomb and Darwin couplings.

    lam = e^2 / (8 pi eps0 m omega^2 d^3) * (1 - 3 d^2 omega^2 / (4 c^2))
    """
    lam_nr = lambda_nonrelativistic(tp, const)
    return lam_nr * (1.0 - 3.0 * tp.d**2 * tp.omega**2 / (4.0 * const.c**2))


def lambda_nonrelativistic(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> float:
    """Coulomb-only amplitude of |11>, the c -> infinity limit of :func:`lambda_first_order`."""
    return const.coulomb_strength / (2.0 * tp.mass * tp.omega**2 * tp.d**3)


def plateau_lambda(d: float, mass: float = CODATA2018.electron_mass,
                   const: PhysicalConstants = CODATA2018) -> float:
    """High-frequency limit of the first-order amplitude, -3 e^2 / (32 pi eps0 m d c^2)."""
    return -3.0 * const.coulomb_strength / (8.0 * mass * d * const.c**2)


def two_qubit_entropy(lam: float, mode: str = "exact", base: float = 2.0) -> float:
    """Entanglement entropy of (|00> + lam |11>) / sqrt(1 + lam^2).

    ``mode="exact"`` uses both Schmidt weights; ``mode="small_lambda"`` keeps
    only the leading term -lam^2 log(lam^2). Both return exactly 0 for
    ``lam == 0``.
    """
    if not math.isfinite(lam):
        raise ValueError("lam must be finite")
    if lam == 0.0:
        return 0.0
    lam2 = lam * lam
    if mode == "small_lambda":
        return float(-lam2 * log_in_base(lam2, base))
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    # p1 = lam^2/(1+lam^2); -p0 log p0 = p0 log1p(lam^2) avoids cancellation for tiny lam
    p0 = 1.0 / (1.0 + lam2)
    p1 = lam2 / (1.0 + lam2)
    s = p0 * math.log1p(lam2) - p1 * math.log(p1)
    return s / math.log(base)


def static_entropy(
    tp: TrapPair,
    interaction: str = "coulomb_plus_darwin",
    base: float = 2.0,
    const: PhysicalConstants = CODATA2018,
) -> float:
    """Ground-state entanglement for ``coulomb_only`` or ``coulomb_plus_darwin``."""
    if interaction == "coulomb_only":
        lam = lambda_nonrelativistic(tp, const)
    elif interaction == "coulomb_plus_darwin":
        lam = lambda_first_order(tp, const)
    else:
        raise ValueError(f"unsupported interaction {interaction!r}")
    return two_qubit_entropy(lam, "exact", base)


def higher_order_lambdas(
    tp: TrapPair, const: PhysicalConstants = CODATA2018
) -> tuple[float, float, float]:
    """Amplitude constants of the higher-order perturbed state.

    lam1 equals :func:`lambda_first_order`; lam2 scales as omega^-1/2 and
    lam3 as omega^-1, so neither vanishes at the first-order dip.
    """
    m, w, d, c, hbar = tp.mass, tp.omega, tp.d, const.c, const.hbar
    e2 = const.e**2
    pi_eps = math.pi * const.eps0
    lam1 = e2 / (8.0 * pi_eps * m * d) * (1.0 / (d * w) ** 2 - 3.0 / (4.0 * c**2))
    lam2 = 3.0 * e2 / (8.0 * pi_eps * d**2 * c**2) * math.sqrt(hbar / (2.0 * w * m**3))
    lam3 = hbar * e2 / (32.0 * pi_eps * w * m**2 * c**2 * d**3)
    return lam1, lam2, lam3


@dataclass(frozen=True)
class HigherOrderState:
    """Normalized two-mode state on occupations 0..3 per mode.

    ``amplitudes[n1, n2]`` is the coefficient of |n1 n2>; ``norm2`` is the
    squared norm of the unnormalized vector.
    """

    lam1: float
    lam2: float
    lam3: float
    amplitudes: np.ndarray
    norm2: float

    @property
    def vector(self) -> np.ndarray:
        """Row-major (n1, n2) flattening, length 16."""
        return self.amplitudes.reshape(-1)


def higher_order_state(lams: tuple[float, float, float]) -> HigherOrderState:
    lam1, lam2, lam3 = lams
    a = np.zeros((HIGHER_ORDER_LEVELS, HIGHER_ORDER_LEVELS))
    a[0, 0] = 1.0
    a[1, 1] = lam1
    a[1, 2] = 2.0 * lam2 / 3.0
    a[2, 1] = -2.0 * lam2 / 3.0
    a[0, 1] = lam2
    a[1, 0] = -lam2
    a[1, 3] = lam3 / 4.0
    a[3, 1] = lam3 / 4.0
    a[2, 0] = lam3
    a[0, 2] = lam3
    a[2, 2] = lam3 / 2.0
    norm2 = float(np.sum(a * a))
    return HigherOrderState(lam1, lam2, lam3, a / math.sqrt(norm2), norm2)


def density_matrix(state: HigherOrderState) -> np.ndarray:
    """16x16 projector |psi><psi| in row-major (n1, n2) ordering."""
    v = state.vector
    return np.outer(v, v)


def entropy_from_probabilities(p, base: float = 2.0) -> float:
    """Shannon entropy of a probability vector, zeros dropped.

    The dominant weight is written as 1 - (sum of the rest) so that weights
    far below machine epsilon still contribute their linear term.
    """
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    p = p[p > 0.0]
    if p.size <= 1:
        return 0.0
    rest = p[1:]
    s = -math.log1p(-float(np.sum(rest))) * (1.0 - float(np.sum(rest)))
    s -= float(np.sum(rest * np.log(rest)))
    return s / math.log(base)


def reduced_density(state: HigherOrderState) -> np.ndarray:
    """Mode-1 reduced density matrix obtained from the full projector."""
    n = HIGHER_ORDER_LEVELS
    rho = density_matrix(state).reshape(n, n, n, n)
    return np.einsum("ikjk->ij", rho)


def state_entropy_exact(state: HigherOrderState, base: float = 2.0) -> float:
    """Entropy of mode 1 after tracing out mode 2.

    The spectrum of the reduced matrix is taken from the singular values of
    the 4x4 amplitude matrix. Diagonalizing rho_1 = A A^T directly squares
    the conditioning and loses Schmidt weights below ~1e-16, which is
    exactly the regime of the higher-order amplitudes.
    """
    rho1 = reduced_density(state)
    if np.linalg.eigvalsh(rho1).min() < -1e-10:
        raise FloatingPointError("reduced density matrix is not positive semidefinite")
    schmidt = np.linalg.svd(state.amplitudes, compute_uv=False)
    return entropy_from_probabilities(schmidt**2, base)
