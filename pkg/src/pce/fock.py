"""Brute-force truncated Fock-space oracle.

Two modes, each truncated to occupations 0..N-1, basis index n1 * N + n2.
Everything is dense; N around 32 gives 1024-dimensional Hamiltonians,
which one Hermitian eigendecomposition handles in well under a second.

Nothing here imports the covariance-matrix code, so the two pipelines
stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA2018, PhysicalConstants
from .physics import Couplings, TrapPair, couplings

DEFAULT_TRUNCATION = 32


class TruncationError(ValueError):
    """The requested state or operator does not fit in the truncated basis."""


@dataclass(frozen=True)
class FockSystem:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise TruncationError("truncation must be at least 2")

    @property
    def a(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.n, dtype=float)), k=1)

    @property
    def adag(self) -> np.ndarray:
        return self.a.T.copy()

    @property
    def dim(self) -> int:
        return self.n * self.n

    def mode_ops(self):
        """(a1, a1^dag, a2, a2^dag) on the two-mode space."""
        a, eye = self.a, np.eye(self.n)
        a1, a2 = np.kron(a, eye), np.kron(eye, a)
        return a1, a1.T.copy(), a2, a2.T.copy()

    def index(self, n1: int, n2: int) -> int:
        return n1 * self.n + n2

    def total_number(self) -> np.ndarray:
        k = np.arange(self.n)
        return (k[:, None] + k[None, :]).reshape(-1).astype(float)


def _hermitize(term: np.ndarray) -> np.ndarray:
    if np.array_equal(term, term.conj().T):
        return term
    return term + term.conj().T


def build_interaction(
    tp: TrapPair,
    cpl: Couplings,
    interaction: str = "coulomb_plus_darwin",
    order: str = "quadratic",
    n: int = DEFAULT_TRUNCATION,
    const: PhysicalConstants = CODATA2018,
) -> np.ndarray:
    """Interaction Hamiltonian in joules.

    ``quadratic``: hbar (g_C - g_D)(a1^dag a2 + a1 a2^dag) + hbar (g_C + g_D)(a1 a2 + a1^dag a2^dag).

    ``appendix_a`` adds the cubic and quartic ladder monomials of the
    higher-order Darwin expansion, each non-Hermitian monomial completed
    with its conjugate transpose.
    """
    system = FockSystem(n)
    cpl = cpl.select(interaction, tp.omega)
    a1, b1, a2, b2 = system.mode_ops()  # b = dagger
    hbar = const.hbar
    h = hbar * (cpl.g_c - cpl.g_d) * (b1 @ a2 + a1 @ b2)
    h = h + hbar * (cpl.g_c + cpl.g_d) * (a1 @ a2 + b1 @ b2)
    if order == "quadratic":
        return h
    if order != "appendix_a":
        raise ValueError(f"unknown order {order!r}")
    if n < 4:
        raise TruncationError("appendix_a monomials reach occupation 3; need n >= 4")
    if interaction in ("none", "coulomb_only"):
        # the higher-order terms all carry the Darwin 1/c^2 factor
        return h
    m, w, d, c = tp.mass, tp.omega, tp.d, const.c
    pref = hbar * const.coulomb_strength / d
    p3 = -pref * 3.0 / (2.0 * d * c**2) * math.sqrt(w * hbar / (2.0 * m**3))
    p4 = -pref * hbar / (8.0 * d**2 * m**2 * c**2)
    cubic = [
        2.0 * (b1 @ b2 @ b2),
        -2.0 * (b1 @ b1 @ b2),
        a1 @ b1 @ b2,
        -(b1 @ a2 @ b2),
    ]
    quartic = [
        b1 @ b1 @ b1 @ b2,
        b1 @ b2 @ b2 @ b2,
        -2.0 * (b1 @ b1 @ b2 @ b2),
        2.0 * (b1 @ b1 @ a2 @ b2),
        2.0 * (a1 @ b1 @ b2 @ b2),
        -2.0 * (a1 @ b1 @ a2 @ b2),
    ]
    for term in cubic:
        h = h + p3 * _hermitize(term)
    for term in quartic:
        h = h + p4 * _hermitize(term)
    return h


def free_hamiltonian(tp: TrapPair, n: int = DEFAULT_TRUNCATION,
                     const: PhysicalConstants = CODATA2018) -> np.ndarray:
    return np.diag(const.hbar * tp.omega * (FockSystem(n).total_number() + 1.0))


def build_hamiltonian(
    tp: TrapPair,
    cpl: Couplings | None = None,
    interaction: str = "coulomb_plus_darwin",
    order: str = "quadratic",
    n: int = DEFAULT_TRUNCATION,
    const: PhysicalConstants = CODATA2018,
) -> np.ndarray:
    """Full two-mode Hamiltonian hbar w (n1 + n2 + 1) + H_int as a dense matrix (J)."""
    if cpl is None:
        cpl = couplings(tp, const)
    return free_hamiltonian(tp, n, const) + build_interaction(tp, cpl, interaction, order, n, const)


def squeezed_vacuum_vector(xi: float, n: int = DEFAULT_TRUNCATION, tail_tol: float = 1e-10) -> np.ndarray:
    """Single-mode squeezed vacuum on occupations 0..n-1.

    c_2k = (cosh xi)^(-1/2) (-tanh xi)^k sqrt((2k)!) / (2^k k!), odd
    occupations empty; positive ``xi`` squeezes position. The discarded
    probability beyond the truncation is summed explicitly and must not
    exceed ``tail_tol``; the kept part is renormalized.
    """
    t = -math.tanh(xi)
    coeffs = []
    c = 1.0 / math.sqrt(math.cosh(xi))
    k = 0
    tail = 0.0
    while True:
        occ = 2 * k
        if occ < n:
            coeffs.append(c)
        else:
            tail += c * c
            if c * c < 1e-40 or c == 0.0:
                break
        k += 1
        c = c * t * math.sqrt((2 * k) * (2 * k - 1)) / (2 * k)
        if occ >= n and k > 100000:
            break
    if tail > tail_tol:
        raise TruncationError(
            f"squeezed vacuum xi={xi} loses probability {tail:.2e} beyond n={n} (tolerance {tail_tol:.0e})"
        )
    vec = np.zeros(n)
    vec[0::2][: len(coeffs)] = coeffs
    return vec / np.linalg.norm(vec)


def squeezed_tail_mass(xi: float, n: int) -> float:
    """Probability of a squeezed vacuum above occupation n-1."""
    t2 = math.tanh(xi) ** 2
    c2, k, total = 1.0 / math.cosh(xi), 0, 0.0
    # weights decrease monotonically in k
    while c2 > 1e-40:
        if 2 * k >= n:
            total += c2
        k += 1
        c2 *= t2 * (2 * k - 1) / (2 * k)
    return total


def position_variance(vec: np.ndarray, dx: float) -> float:
    """<x^2> of a single-mode vector with x = dx (a + a^dag)."""
    n = vec.size
    a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1)
    x = dx * (a + a.T)
    return float(np.real(np.conj(vec) @ x @ x @ vec))


def product_state(psi1: np.ndarray, psi2: np.ndarray) -> np.ndarray:
    return np.kron(psi1, psi2).astype(complex)


def evolve_exact(h: np.ndarray, psi0: np.ndarray, t: float, hbar: float = CODATA2018.hbar,
                 eig=None) -> np.ndarray:
    """exp(-i H t / hbar) psi0 through a Hermitian eigendecomposition.

    ``eig`` may carry a precomputed ``np.linalg.eigh(h / hbar)`` to reuse it
    across many times.
    """
    if h.shape != (psi0.size, psi0.size):
        raise ValueError("Hamiltonian and state dimensions disagree")
    if eig is None:
        eig = np.linalg.eigh(h / hbar)
    w, v = eig
    coeff = v.conj().T @ psi0
    return v @ (np.exp(-1j * w * t) * coeff)


def reduced_density_and_entropy(psi: np.ndarray, mode: int = 1, base: float = 2.0):
    """Reduced density matrix of one mode and its von Neumann entropy."""
    n = int(round(math.sqrt(psi.size)))
    if n * n != psi.size:
        raise ValueError("state length is not a perfect square")
    amp = psi.reshape(n, n)
    if mode == 1:
        rho = amp @ amp.conj().T
    elif mode == 2:
        rho = amp.T @ amp.conj()
    else:
        raise ValueError("mode must be 1 or 2")
    rho = 0.5 * (rho + rho.conj().T)
    p = np.linalg.eigvalsh(rho)
    if p.min() < -1e-8:
        raise FloatingPointError(f"reduced density matrix has eigenvalue {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    p = p[p > 0.0]
    s = -float(np.sum(p * np.log(p)))
    return rho, s / math.log(base)


def perturbative_coefficients(
    h: np.ndarray, n: int, omega: float, hbar: float = CODATA2018.hbar
) -> tuple[dict, list]:
    """First-order amplitudes <mn|H_int|00> / (2 E_0 - E_m - E_n).

    ``h`` is the full Hamiltonian; the diagonal free part hbar w (n1 + n2 + 1)
    is removed first. Returns ``(coefficients, skipped)`` where ``skipped``
    lists kets degenerate with the ground state.
    """
    system = FockSystem(n)
    h_int = h - np.diag(hbar * omega * (system.total_number() + 1.0))
    column = h_int[:, system.index(0, 0)]
    out, skipped = {}, []
    for n1 in range(n):
        for n2 in range(n):
            if (n1, n2) == (0, 0):
                continue
            elem = column[system.index(n1, n2)]
            if elem == 0:
                continue
            denom = -hbar * omega * (n1 + n2)
            if denom == 0:
                skipped.append((n1, n2))
                continue
            out[(n1, n2)] = float(np.real(elem)) / denom
    return out, skipped


def parity_sector(n: int, parity: int) -> np.ndarray:
    """Basis indices with (n1 + n2) % 2 == parity.

    The quadratic interaction changes n1 + n2 by 0 or 2, so each sector is
    invariant and can be evolved on its own.
    """
    return np.flatnonzero(FockSystem(n).total_number() % 2 == parity)


def fock_entropy_series(
    tp: TrapPair,
    times,
    interaction: str = "coulomb_plus_darwin",
    n: int = DEFAULT_TRUNCATION,
    cpl: Couplings | None = None,
    base: float = 2.0,
    tail_tol: float = 1e-10,
    const: PhysicalConstants = CODATA2018,
) -> np.ndarray:
    """Entanglement entropy of the evolved squeezed product state at each time.

    The product of two squeezed vacua lives in the even sector, so only
    that block of the quadratic Hamiltonian is diagonalized.
    """
    if cpl is None:
        cpl = couplings(tp, const)
    h = build_hamiltonian(tp, cpl, interaction, "quadratic", n, const)
    even = parity_sector(n, 0)
    h_even = h[np.ix_(even, even)]
    eig = np.linalg.eigh(h_even / const.hbar)
    sv = squeezed_vacuum_vector(tp.xi, n, tail_tol)
    psi0 = product_state(sv, sv)
    out = []
    for t in np.atleast_1d(times):
        psi = np.zeros(n * n, dtype=complex)
        psi[even] = evolve_exact(h_even, psi0[even], t, const.hbar, eig)
        out.append(reduced_density_and_entropy(psi, 1, base)[1])
    return np.array(out)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    entropy: float
    converged: bool


def convergence_study(
    tp: TrapPair,
    interaction: str,
    t: float,
    n_list,
    cpl: Couplings | None = None,
    tol: float = 1e-8,
    tail_tol: float = math.inf,
    const: PhysicalConstants = CODATA2018,
) -> list[ConvergenceRow]:
    """Entropy at time ``t`` for each truncation in ascending ``n_list``.

    A row is marked converged once it differs from the previous one by less
    than ``tol``. The squeezed-state tail check is disabled by default so
    the table can show the poorly converged small truncations too.
    """
    n_list = list(n_list)
    if n_list != sorted(n_list):
        raise ValueError("n_list must be ascending")
    rows, prev = [], None
    for n in n_list:
        s = float(fock_entropy_series(tp, [t], interaction, n, cpl, tail_tol=tail_tol, const=const)[0])
        rows.append(ConvergenceRow(n, s, prev is not None and abs(s - prev) < tol))
        prev = s
    return rows
