"""Validation harness behind ``pce oracle-check``.

Each gate compares two independent routes to the same number and records
the worst deviation against a fixed tolerance. Reports that are not gated
(closed-form cross-checks whose reference form is known to be unreliable) are
included for inspection only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA2018, PhysicalConstants
from .fock import build_hamiltonian, convergence_study, fock_entropy_series, perturbative_coefficients
from .gaussian import (
    entanglement_series,
    evolve,
    global_symplectic_eigenvalues,
    hamiltonian_quadratic_form,
    initial_covariance,
    paper_sigma_closed_form,
    propagator,
    symplectic_residual,
)
from .physics import Couplings, TrapPair, couplings
from .static import lambda_first_order

# Known disagreements between the reference formulas and what this package
# implements. Keys are topics; the text is emitted verbatim in every report.
DISCREPANCIES = {
    "squeezed_vacuum_coefficient": (
        "The reference Fock coefficient sqrt((2n)!)/2^(2n) does not normalize the squeezed vacuum. "
        "The standard sqrt((2n)!)/(2^n n!) with (-tanh xi)^n is used; positive xi squeezes position."
    ),
    "ladder_coupling_normalization": (
        "The reference k+- prefactor w/w_eff carries units of frequency. 1/w_eff is used, which restores "
        "|k0|^2 + k-^2 - k+^2 = 1."
    ),
    "symplectic_eigenvalue_offset": (
        "The reference occupation sqrt(det)/hbar - 1/2 gives 1/2 and nonzero entropy for the vacuum. "
        "sqrt(det)/(2 hbar) - 1/2 is used so the vacuum has zero occupation."
    ),
    "closed_form_occupation_parse": (
        "The reference closed-form occupation has ambiguous brackets. The parse documented in "
        "paper_sigma_closed_form is evaluated and its residual against the exact flow is reported, not gated."
    ),
    "bosonic_entropy_log_argument": (
        "The alternative entropy formula prints its second logarithm as log(x + 1/2); "
        "log(x - 1/2) is the correct bosonic form and is the one used."
    ),
    "interaction_time_estimates": (
        "Quoted interaction times 0.35 s, 0.7 s and 1 s do not follow from the stated couplings; "
        "the formulas give about 0.118 s, 0.237 s and 0.355 s."
    ),
    "squeezing_bound_table": (
        "Tabulated upper squeezing bounds at w = 1e9 rad/s are 0.06, 0.75 and 1.16 for d = 250, 500, 750 nm; "
        "the bound formula gives 0.038, 0.732 and 1.137."
    ),
}

DEFAULT_ORACLE = {
    "truncation": 32,
    "xi": [-0.5, -0.25, 0.0, 0.25, 0.5],
    "coupling_pairs": [[-1e-2, 5e-3], [-5e-3, 1e-2], [-1e-2, 0.0]],
    "times_per_omega": [0.0, 1.0, 2.0, 3.5, 5.0, 7.0],
    "symplectic_samples": 200,
    "seed": 20240601,
    "convergence_truncations": [16, 24, 32, 40],
}

TOLERANCES = {
    "constants_maxwell": 1e-9,
    "gaussian_vs_fock": 1e-6,
    "symplecticity": 1e-10,
    "purity": 1e-9,
    "lambda_matrix_element": 1e-10,
    "convergence": 1e-8,
}


@dataclass
class Gate:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.value) and self.value <= self.tolerance)

    def as_dict(self) -> dict:
        return {"value": self.value, "tolerance": self.tolerance, "passed": self.passed}


def gaussian_vs_fock(cfg: dict, const: PhysicalConstants) -> tuple[float, list]:
    """Worst |S_gaussian - S_fock| over a grid of squeezings and synthetic couplings."""
    omega = 1e10
    worst, rows = 0.0, []
    for rc, rd in cfg["coupling_pairs"]:
        cpl = Couplings.from_rates(rc * omega, rd * omega, omega)
        for xi in cfg["xi"]:
            tp = TrapPair(omega, 50e-6, xi)
            times = np.array(cfg["times_per_omega"]) / omega
            _, s_g, _ = entanglement_series(tp, "coulomb_plus_darwin", times, cpl=cpl, const=const)
            s_f = fock_entropy_series(tp, times, "coulomb_plus_darwin", cfg["truncation"], cpl, const=const)
            dev = float(np.max(np.abs(s_g - s_f)))
            rows.append({"g_c_over_omega": rc, "g_d_over_omega": rd, "xi": xi, "max_abs_dev": dev})
            worst = max(worst, dev)
    return worst, rows


def random_weak_trap(rng: np.random.Generator, const: PhysicalConstants = CODATA2018,
                     max_ratio: float = 1e-2) -> TrapPair:
    """Random trap pair with |g_C|, g_D <= max_ratio * omega.

    Strong coupling (|g_C| > omega/2) makes one normal mode unbounded, so
    such draws are rejected rather than fed to the stability checks.
    """
    while True:
        tp = TrapPair(10 ** rng.uniform(8, 12), 10 ** rng.uniform(-6, -3), rng.uniform(-3, 3))
        cpl = couplings(tp, const)
        if max(abs(cpl.g_c), abs(cpl.g_d)) <= max_ratio * tp.omega:
            return tp


def symplectic_sweep(cfg: dict, const: PhysicalConstants) -> tuple[float, float]:
    """Worst symplecticity and purity residuals over random weakly coupled traps."""
    rng = np.random.default_rng(cfg["seed"])
    worst_s = worst_p = 0.0
    for _ in range(cfg["symplectic_samples"]):
        tp = random_weak_trap(rng, const)
        cpl = couplings(tp, const)
        t = rng.uniform(0, 20) / tp.omega
        s = propagator(hamiltonian_quadratic_form(tp, cpl, const=const), t)
        worst_s = max(worst_s, symplectic_residual(s))
        sigma = evolve(initial_covariance(tp, const), s)
        worst_p = max(worst_p, float(np.max(np.abs(global_symplectic_eigenvalues(sigma) - 1.0))))
    return worst_s, worst_p


def lambda_matrix_element(const: PhysicalConstants) -> float:
    """Worst relative gap between the closed-form |11> amplitude and the explicit matrix element."""
    worst = 0.0
    for omega in (1e9, 1e11, 1e13):
        for d in (1e-7, 1e-6, 5e-5):
            tp = TrapPair(omega, d)
            h = build_hamiltonian(tp, couplings(tp, const), "coulomb_plus_darwin", "quadratic", 4, const)
            amp = perturbative_coefficients(h, 4, omega, const.hbar)[0][(1, 1)]
            lam = lambda_first_order(tp, const)
            worst = max(worst, abs(amp - lam) / abs(lam))
    return worst


def closed_form_residuals(const: PhysicalConstants) -> dict:
    """Report-only comparison of the reference closed-form occupation with the exact flow."""
    worst, nan_count, total = 0.0, 0, 0
    for xi in (0.0, 0.5, 1.0, 3.0):
        tp = TrapPair(1e10, 50e-6, xi)
        cpl = couplings(tp, const)
        times = np.linspace(0.0, 4.0 * math.pi / cpl.omega_eff, 33)
        _, _, nbar = entanglement_series(tp, "coulomb_plus_darwin", times, cpl=cpl, const=const)
        for t, n_exact in zip(times, nbar):
            total += 1
            val = paper_sigma_closed_form(tp, cpl, t)
            if not math.isfinite(val):
                nan_count += 1
                continue
            worst = max(worst, abs(val - n_exact))
    return {"max_abs_residual": worst, "undefined_points": nan_count, "points": total, "gated": False}


def run_oracle_check(spec) -> dict:
    """Run every gate and return a JSON-serializable report with an overall verdict."""
    const = spec.constants
    cfg = {**DEFAULT_ORACLE, **spec.oracle}
    gates = [Gate("constants_maxwell", abs(const.maxwell_residual()), TOLERANCES["constants_maxwell"])]

    worst_gf, gf_rows = gaussian_vs_fock(cfg, const)
    gates.append(Gate("gaussian_vs_fock", worst_gf, TOLERANCES["gaussian_vs_fock"]))

    worst_s, worst_p = symplectic_sweep(cfg, const)
    gates.append(Gate("symplecticity", worst_s, TOLERANCES["symplecticity"]))
    gates.append(Gate("purity", worst_p, TOLERANCES["purity"]))

    gates.append(Gate("lambda_matrix_element", lambda_matrix_element(const), TOLERANCES["lambda_matrix_element"]))

    omega = 1e10
    tp = TrapPair(omega, 50e-6, max(abs(x) for x in cfg["xi"]))
    cpl = Couplings.from_rates(-1e-2 * omega, 5e-3 * omega, omega)
    table = convergence_study(tp, "coulomb_plus_darwin", 5.0 / omega, cfg["convergence_truncations"],
                              cpl, TOLERANCES["convergence"], const=const)
    conv_gap = abs(table[-1].entropy - table[-2].entropy) if len(table) > 1 else math.inf
    gates.append(Gate("convergence", conv_gap, TOLERANCES["convergence"]))

    failed = [g.name for g in gates if not g.passed]
    return {
        "passed": not failed,
        "failed_gates": failed,
        "gates": {g.name: g.as_dict() for g in gates},
        "gaussian_vs_fock": gf_rows,
        "convergence_table": [{"n": r.n, "entropy": r.entropy, "converged": r.converged} for r in table],
        "closed_form_occupation": closed_form_residuals(const),
        "discrepancies": DISCREPANCIES,
        "config": cfg,
        "constants": const.as_dict(),
    }
