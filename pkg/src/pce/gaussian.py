"""Exact Gaussian dynamics of the two coupled traps.

The quadrature vector is ordered (x1, p1, x2, p2). Covariances follow the
anticommutator convention sigma_ij = <{Y_i, Y_j}> - 2 <Y_i><Y_j>, so the SI
vacuum block is diag(2 dx^2, 2 dp^2) with determinant hbar^2.

Numerics are done in natural units q = x / (sqrt(2) dx), k = p / (sqrt(2) dp),
where [q, k] = i, the vacuum covariance is the identity and every symplectic
eigenvalue of a pure state is 1. Raw SI matrices mix entries near 1e-21 and
1e+21 and are only produced at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from .constants import CODATA2018, PhysicalConstants
from .physics import Couplings, TrapPair, couplings
from .static import log_in_base

OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)
OMEGA_1 = OMEGA[:2, :2]


def quadrature_scale(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> np.ndarray:
    """SI size of one natural quadrature unit, (sqrt(hbar/(m w)), sqrt(m w hbar)) per mode."""
    sx = math.sqrt(const.hbar / (tp.mass * tp.omega))
    sp = math.sqrt(tp.mass * tp.omega * const.hbar)
    return np.array([sx, sp, sx, sp])


@dataclass(frozen=True)
class CovarianceState:
    """Covariance matrix of a two-mode Gaussian state at time ``t``.

    ``natural`` is the dimensionless covariance; ``scale`` maps it to SI via
    ``sigma_SI = diag(scale) @ natural @ diag(scale)``. For pure states built
    from a product of squeezed vacua ``factor`` holds F with
    ``natural = F @ F.T``; it is carried along so that reduced determinants
    can be evaluated without cancellation.
    """

    natural: np.ndarray
    scale: np.ndarray
    t: float = 0.0
    hbar: float = CODATA2018.hbar
    factor: np.ndarray | None = field(default=None, repr=False)

    @property
    def matrix(self) -> np.ndarray:
        """Covariance in SI units."""
        return self.scale[:, None] * self.natural * self.scale[None, :]

    @classmethod
    def from_si(cls, sigma, scale, t=0.0, hbar=CODATA2018.hbar) -> "CovarianceState":
        sigma = np.asarray(sigma, dtype=float)
        natural = sigma / np.outer(scale, scale)
        return cls(natural, np.asarray(scale, dtype=float), t, hbar)


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """H = (1/2) Y^T matrix Y with Y in SI units."""

    matrix: np.ndarray
    scale: np.ndarray
    hbar: float = CODATA2018.hbar

    @property
    def natural(self) -> np.ndarray:
        """Generator matrix in natural units, H / hbar = (1/2) y^T M y (rad/s)."""
        return self.scale[:, None] * self.matrix * self.scale[None, :] / self.hbar


@dataclass(frozen=True)
class SymplecticPropagator:
    """Linear phase-space flow y(t) = S y(0) in natural units."""

    matrix: np.ndarray
    t: float
    scale: np.ndarray

    @property
    def si(self) -> np.ndarray:
        return self.scale[:, None] * self.matrix / self.scale[None, :]


@dataclass(frozen=True)
class KCoefficients:
    k0: complex
    k_plus: float
    k_minus: float
    t: float

    def commutator_residual(self) -> float:
        """|k0|^2 + k-^2 - k+^2 - 1, zero when [a1(t), a1(t)^dagger] = 1."""
        return abs(self.k0) ** 2 + self.k_minus**2 - self.k_plus**2 - 1.0


def initial_covariance(tp: TrapPair, const: PhysicalConstants = CODATA2018) -> CovarianceState:
    """Product of two squeezed vacua; positive ``xi`` squeezes position."""
    z = np.array([math.exp(-tp.xi), math.exp(tp.xi)] * 2)
    factor = np.diag(z)
    return CovarianceState(factor @ factor.T, quadrature_scale(tp, const), 0.0, const.hbar, factor)


def hamiltonian_quadratic_form(
    tp: TrapPair,
    cpl: Couplings | None = None,
    interaction: str = "coulomb_plus_darwin",
    const: PhysicalConstants = CODATA2018,
) -> QuadraticHamiltonian:
    """Quadratic form of sum_i p_i^2/2m + m w^2 x_i^2/2 + 2 m w g_C x1 x2 - (2 g_D/(m w)) p1 p2.

    The Coulomb coupling sits on x1 x2 and the Darwin coupling on p1 p2.
    ``interaction`` zeroes the unwanted cross terms.
    """
    if cpl is None:
        cpl = couplings(tp, const)
    cpl = cpl.select(interaction, tp.omega)
    m, w = tp.mass, tp.omega
    h = np.diag([m * w**2, 1.0 / m, m * w**2, 1.0 / m])
    h[0, 2] = h[2, 0] = 2.0 * m * w * cpl.g_c
    h[1, 3] = h[3, 1] = -2.0 * cpl.g_d / (m * w)
    return QuadraticHamiltonian(h, quadrature_scale(tp, const), const.hbar)


def normal_mode_frequencies(tp: TrapPair, cpl: Couplings) -> tuple[float, float]:
    """Frequencies of the symmetric and antisymmetric modes, sqrt((w +- 2 g_C)(w -+ 2 g_D))."""
    w = tp.omega
    plus = math.sqrt((w + 2.0 * cpl.g_c) * (w - 2.0 * cpl.g_d))
    minus = math.sqrt((w - 2.0 * cpl.g_c) * (w + 2.0 * cpl.g_d))
    return plus, minus


def propagator(h: QuadraticHamiltonian, t: float) -> SymplecticPropagator:
    """exp(Omega M t) via scipy's scaling-and-squaring Pade expm."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    s = expm(OMEGA @ h.natural * t)
    if not np.all(np.isfinite(s)):
        raise FloatingPointError("non-finite propagator; check the quadrature scaling")
    return SymplecticPropagator(s, t, h.scale)


def symplectic_residual(s: SymplecticPropagator | np.ndarray) -> float:
    """max |S Omega S^T - Omega|."""
    m = s.matrix if isinstance(s, SymplecticPropagator) else s
    return float(np.max(np.abs(m @ OMEGA @ m.T - OMEGA)))


def evolve(sigma0: CovarianceState, s: SymplecticPropagator) -> CovarianceState:
    """sigma(t) = S sigma(0) S^T."""
    natural = s.matrix @ sigma0.natural @ s.matrix.T
    natural = 0.5 * (natural + natural.T)
    factor = None if sigma0.factor is None else s.matrix @ sigma0.factor
    return CovarianceState(natural, sigma0.scale, sigma0.t + s.t, sigma0.hbar, factor)


def _mode_slice(mode: int) -> slice:
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    return slice(0, 2) if mode == 1 else slice(2, 4)


def reduced_block(sigma: CovarianceState, mode: int = 1) -> np.ndarray:
    """Diagonal 2x2 SI block of the selected mode."""
    sl = _mode_slice(mode)
    return sigma.matrix[sl, sl].copy()


def effective_occupation(block, hbar: float = CODATA2018.hbar) -> float:
    """Thermal-equivalent occupation sqrt(det block)/(2 hbar) - 1/2 of an SI 2x2 block."""
    block = np.asarray(block, dtype=float)
    det = block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]
    if det < 0:
        raise ValueError("reduced block has negative determinant; covariance convention broken")
    nbar = math.sqrt(det) / (2.0 * hbar) - 0.5
    if nbar < -1e-10:
        raise ValueError(f"occupation {nbar:.3e} below zero; state violates the uncertainty relation")
    return max(nbar, 0.0)


def _pair_excess(rows: np.ndarray) -> float:
    """nu^2 - 1 for two rows of a symplectic matrix, nu^2 = det(rows rows^T).

    Cauchy-Binet writes the determinant as the sum of squared 2x2 minors;
    the symplectic condition m01 + m23 = 1 then removes the leading 1 exactly.
    """
    def minor(j, k):
        return rows[0, j] * rows[1, k] - rows[0, k] * rows[1, j]

    m01, m23 = minor(0, 1), minor(2, 3)
    return -2.0 * m01 * m23 + minor(0, 2) ** 2 + minor(0, 3) ** 2 + minor(1, 2) ** 2 + minor(1, 3) ** 2


def reduced_occupation(sigma: CovarianceState, mode: int = 1) -> float:
    """Effective occupation of one mode, using the pure-state factor when present."""
    if sigma.factor is None:
        return effective_occupation(reduced_block(sigma, mode), sigma.hbar)
    excess = _pair_excess(sigma.factor[_mode_slice(mode), :])
    # nu - 1 = (nu^2 - 1) / (nu + 1)
    nu = math.sqrt(max(1.0 + excess, 0.0))
    return max(0.5 * excess / (nu + 1.0), 0.0)


def entropy_from_occupation(nbar: float, base: float = 2.0) -> float:
    """(n+1) log(n+1) - n log n, with the n = 0 limit equal to 0."""
    if nbar < 0:
        raise ValueError("occupation must be >= 0")
    if nbar == 0.0:
        return 0.0
    s = (nbar + 1.0) * math.log1p(nbar) - nbar * math.log(nbar)
    return s / math.log(base)


def global_symplectic_eigenvalues(sigma: CovarianceState) -> np.ndarray:
    """Symplectic spectrum of the full state in units of hbar (vacuum = 1)."""
    ev = np.linalg.eigvals(1j * OMEGA @ sigma.natural)
    return np.sort(np.abs(ev.real))[::2]


def uncertainty_min_eigenvalue(sigma: CovarianceState) -> float:
    """Smallest eigenvalue of sigma + i hbar Omega, expressed in natural units."""
    return float(np.linalg.eigvalsh(sigma.natural + 1j * OMEGA).min())


def entanglement_series(
    tp: TrapPair,
    interaction: str = "coulomb_plus_darwin",
    times=(),
    base: float = 2.0,
    cpl: Couplings | None = None,
    const: PhysicalConstants = CODATA2018,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Entanglement entropy S(t) starting from the squeezed product state.

    Returns ``(times, S, nbar)``.
    """
    times = np.asarray(times, dtype=float)
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    if times.size > 1 and np.any(np.diff(times) < 0):
        raise ValueError("times must be ascending")
    h = hamiltonian_quadratic_form(tp, cpl, interaction, const)
    sigma0 = initial_covariance(tp, const)
    nbar = np.empty(times.size)
    ent = np.empty(times.size)
    for i, t in enumerate(times):
        sigma = evolve(sigma0, propagator(h, t))
        nbar[i] = reduced_occupation(sigma, 1)
        ent[i] = entropy_from_occupation(nbar[i], base)
    return times, ent, nbar


def default_horizon(cpl: Couplings, periods: float = 4.0) -> float:
    return periods * 2.0 * math.pi / cpl.omega_eff


_TO_NORMAL = np.array(
    [
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, -1.0],
    ]
) / math.sqrt(2.0)


def _oscillator_flow(a: float, b: float, t: np.ndarray) -> np.ndarray:
    """Flow of H = (a q^2 + b k^2)/2 as an array of shape (len(t), 2, 2)."""
    out = np.empty((t.size, 2, 2))
    ab = a * b
    if ab > 0:
        w = math.sqrt(ab)
        c, s = np.cos(w * t), np.sin(w * t)
        out[:, 0, 0] = c
        out[:, 0, 1] = (b / w) * s
        out[:, 1, 0] = -(a / w) * s
        out[:, 1, 1] = c
    elif ab < 0:
        w = math.sqrt(-ab)
        c, s = np.cosh(w * t), np.sinh(w * t)
        out[:, 0, 0] = c
        out[:, 0, 1] = (b / w) * s
        out[:, 1, 0] = (-a / w) * s
        out[:, 1, 1] = c
    else:
        out[:, 0, 0] = 1.0
        out[:, 0, 1] = b * t
        out[:, 1, 0] = -a * t
        out[:, 1, 1] = 1.0
    return out


def normal_modes_bound(tp: TrapPair, cpl: Couplings, interaction: str = "coulomb_plus_darwin") -> bool:
    """True when both normal modes oscillate.

    Once |g_C| exceeds about omega/2 the symmetric or antisymmetric mode
    loses its restoring force and the motion, and the entropy, grow without
    bound; the quadratic model is then outside its range of validity.
    """
    sel = cpl.select(interaction, tp.omega)
    w = tp.omega
    return ((w + 2.0 * sel.g_c) * (w - 2.0 * sel.g_d) > 0
            and (w - 2.0 * sel.g_c) * (w + 2.0 * sel.g_d) > 0)


def propagator_batch(tp: TrapPair, cpl: Couplings, interaction: str, times) -> np.ndarray:
    """Natural-unit propagators at many times, shape (len(times), 4, 4).

    Uses the decoupled symmetric/antisymmetric modes, whose generator
    coefficients are (w + 2 g_C, w - 2 g_D) and (w - 2 g_C, w + 2 g_D).
    Agrees with :func:`propagator` to rounding; intended for dense scans.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    sel = cpl.select(interaction, tp.omega)
    w = tp.omega
    plus = _oscillator_flow(w + 2.0 * sel.g_c, w - 2.0 * sel.g_d, times)
    minus = _oscillator_flow(w - 2.0 * sel.g_c, w + 2.0 * sel.g_d, times)
    block = np.zeros((times.size, 4, 4))
    block[:, 0:2, 0:2] = plus
    block[:, 2:4, 2:4] = minus
    return _TO_NORMAL @ block @ _TO_NORMAL.T


def _batch_excess(rows: np.ndarray) -> np.ndarray:
    """Vectorized :func:`_pair_excess` for rows of shape (T, 2, 4)."""
    def minor(j, k):
        return rows[:, 0, j] * rows[:, 1, k] - rows[:, 0, k] * rows[:, 1, j]

    return (-2.0 * minor(0, 1) * minor(2, 3) + minor(0, 2) ** 2 + minor(0, 3) ** 2
            + minor(1, 2) ** 2 + minor(1, 3) ** 2)


def occupation_batch(tp: TrapPair, cpl: Couplings, interaction: str, times, mode: int = 1) -> np.ndarray:
    """Mode occupation at many times for the squeezed product initial state."""
    z = np.array([math.exp(-tp.xi), math.exp(tp.xi)] * 2)
    s = propagator_batch(tp, cpl, interaction, times)
    rows = s[:, _mode_slice(mode), :] * z[None, None, :]
    excess = _batch_excess(rows)
    nu = np.sqrt(np.maximum(1.0 + excess, 0.0))
    return np.maximum(0.5 * excess / (nu + 1.0), 0.0)


def max_entropy(
    tp: TrapPair,
    interaction: str = "coulomb_plus_darwin",
    horizon: float | None = None,
    samples: int = 4096,
    base: float = 2.0,
    cpl: Couplings | None = None,
    const: PhysicalConstants = CODATA2018,
) -> tuple[float, float]:
    """Largest S(t) on [0, horizon] and where it occurs.

    A uniform scan of ``samples`` points brackets the maximum; a bounded
    Brent search (golden section with parabolic steps) refines it. The
    default horizon is four effective periods. Returns ``(nan, nan)`` when a
    normal mode is unbound (see :func:`normal_modes_bound`).
    """
    full = couplings(tp, const) if cpl is None else cpl
    if horizon is None:
        horizon = default_horizon(full)
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    sel = full.select(interaction, tp.omega)
    if sel.g_c == 0.0 and sel.g_d == 0.0:
        return 0.0, 0.0
    if not normal_modes_bound(tp, full, interaction):
        return math.nan, math.nan

    grid = np.linspace(0.0, horizon, samples)
    vals = occupation_batch(tp, full, interaction, grid)
    i = int(np.argmax(vals))
    if vals[i] == 0.0:
        return 0.0, 0.0
    best_t, best = float(grid[i]), float(vals[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, samples - 1)]
    if hi > lo:
        res = minimize_scalar(
            lambda t: -float(occupation_batch(tp, full, interaction, [t])[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-9 * (hi - lo)},
        )
        if -res.fun > best:
            best_t, best = float(res.x), -float(res.fun)
    # entropy is monotone in the occupation
    return entropy_from_occupation(best, base), best_t


def paper_k_coefficients(tp: TrapPair, cpl: Couplings, t: float) -> KCoefficients:
    """Ladder-operator coefficients of the closed-form solution.

    k0 = cos(w_eff t) - i (w / w_eff) sin(w_eff t);
    k+- = (g_C +- g_D) sin(w_eff t) / w_eff.
    The k+- prefactor is 1/w_eff rather than w/w_eff: the latter carries
    units of frequency, and only 1/w_eff keeps |k0|^2 + k-^2 - k+^2 = 1.
    """
    we = cpl.omega_eff
    s = math.sin(we * t)
    k0 = complex(math.cos(we * t), -tp.omega / we * s)
    return KCoefficients(k0, (cpl.g_c + cpl.g_d) * s / we, (cpl.g_c - cpl.g_d) * s / we, t)


def k_coefficient_moments(tp: TrapPair, cpl: Couplings, t: float) -> np.ndarray:
    """Natural-unit covariance implied by the ladder solution a1(t) = k0 a1 + k- a2 + k+ a2^dag.

    Mode 2 follows a2(t) = k0 a2 - k- a1 - k+ a1^dag. The map is linear in
    (a1, a1^dag, a2, a2^dag), so it is converted to a real 4x4 quadrature
    map and applied to the initial squeezed covariance.
    """
    k = paper_k_coefficients(tp, cpl, t)
    # rows: a1(t), a2(t) as coefficients of (a1, a1^dag, a2, a2^dag)
    a1 = np.array([k.k0, 0.0, k.k_minus, k.k_plus], dtype=complex)
    a2 = np.array([-k.k_minus, -k.k_plus, k.k0, 0.0], dtype=complex)
    # (a, a^dag) -> (q, k) with a = (q + i k)/sqrt(2)
    to_ladder = np.array([[1, 1j], [1, -1j]]) / math.sqrt(2.0)
    big = np.zeros((4, 4), dtype=complex)
    big[0:2, 0:2] = to_ladder
    big[2:4, 2:4] = to_ladder
    rows = []
    for a in (a1, a2):
        coeffs_q = a @ big  # a(t) in terms of (q1, k1, q2, k2)
        # q(t) = (a + a^dag)/sqrt2, k(t) = (a - a^dag)/(i sqrt2)
        rows.append(np.sqrt(2.0) * coeffs_q.real)
        rows.append(np.sqrt(2.0) * coeffs_q.imag)
    s = np.array(rows)
    z = np.diag([math.exp(-tp.xi), math.exp(tp.xi)] * 2)
    return s @ z @ z @ s.T


def paper_sigma_closed_form(tp: TrapPair, cpl: Couplings, t: float) -> float:
    """Reference closed form for the mode-1 symplectic eigenvalue, kept for cross-checks only.

    Parse used: -1/2 + sqrt(2)/(4 w_eff^2) * sqrt(B), where B is the sum of
      3 e^{-4 xi} (e^{8 xi} gD^2 + gC^2) w^2 + 2 w^4
      - 4 gD gC (gD^2 - 6 gD gC + gC^2) + (gD^2 - 8 gD gC + gC^2) w^2
      + e^{-4 xi} [ -4 (gC - e^{4 xi} gD)^2 w^2 cos(2 w_eff t)
                    + ( e^{8 xi} gD^2 w^2 + gC^2 w^2
                        + e^{4 xi} (4 gD gC (gD + gC)^2 - (gD^2 + gC^2) w^2) ) cos(4 w_eff t) ].
    The outer square root is taken over the whole brace. Negative B is
    returned as NaN; the expression is not trusted anywhere in the pipeline.
    """
    w, we, xi = tp.omega, cpl.omega_eff, tp.xi
    gc, gd = cpl.g_c, cpl.g_d
    e4, e8, em4 = math.exp(4 * xi), math.exp(8 * xi), math.exp(-4 * xi)
    b = (
        3 * em4 * (e8 * gd**2 + gc**2) * w**2
        + 2 * w**4
        - 4 * gd * gc * (gd**2 - 6 * gd * gc + gc**2)
        + (gd**2 - 8 * gd * gc + gc**2) * w**2
        + em4
        * (
            -4 * (gc - e4 * gd) ** 2 * w**2 * math.cos(2 * we * t)
            + (e8 * gd**2 * w**2 + gc**2 * w**2 + e4 * (4 * gd * gc * (gd + gc) ** 2 - (gd**2 + gc**2) * w**2))
            * math.cos(4 * we * t)
        )
    )
    if b < 0:
        return float("nan")
    return -0.5 + math.sqrt(2.0) / (4.0 * we**2) * math.sqrt(b)


def dominant_angular_frequency(times, values) -> float:
    """Angular frequency of the dominant non-DC Fourier component of a uniformly sampled series."""
    times = np.asarray(times)
    values = np.asarray(values) - np.mean(values)
    dt = times[1] - times[0]
    spec = np.abs(np.fft.rfft(values))
    freqs = np.fft.rfftfreq(values.size, dt) * 2.0 * math.pi
    spec[0] = 0.0
    return float(freqs[int(np.argmax(spec))])


__all__ = [
    "OMEGA",
    "CovarianceState",
    "QuadraticHamiltonian",
    "SymplecticPropagator",
    "KCoefficients",
    "quadrature_scale",
    "initial_covariance",
    "hamiltonian_quadratic_form",
    "normal_mode_frequencies",
    "propagator",
    "symplectic_residual",
    "evolve",
    "reduced_block",
    "effective_occupation",
    "reduced_occupation",
    "entropy_from_occupation",
    "global_symplectic_eigenvalues",
    "uncertainty_min_eigenvalue",
    "entanglement_series",
    "default_horizon",
    "max_entropy",
    "normal_modes_bound",
    "propagator_batch",
    "occupation_batch",
    "paper_k_coefficients",
    "k_coefficient_moments",
    "paper_sigma_closed_form",
    "dominant_angular_frequency",
    "log_in_base",
]
