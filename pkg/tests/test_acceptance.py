"""Acceptance criteria, one test each, at their stated tolerances.

Each test records a PASS/FAIL line (see conftest.py) that is printed in
the terminal summary. Failing criteria are left failing on purpose; the
numbers they report are the measured values.
"""

import json
import math
from pathlib import Path

import numpy as np
import pytest
from scipy.signal import argrelmax, argrelmin

from pce.checks import random_weak_trap
from pce.fock import build_hamiltonian, fock_entropy_series, perturbative_coefficients
from pce.gaussian import (
    entanglement_series,
    entropy_from_occupation,
    evolve,
    global_symplectic_eigenvalues,
    hamiltonian_quadratic_form,
    initial_covariance,
    max_entropy,
    propagator,
    reduced_occupation,
    symplectic_residual,
    uncertainty_min_eigenvalue,
)
from pce.physics import (
    Couplings,
    TrapPair,
    couplings,
    dipole_decoherence_rate,
    dynamic_dip_squeezing,
    squeezing_bounds,
    static_dip_frequency,
)
from pce.static import (
    higher_order_lambdas,
    higher_order_state,
    lambda_first_order,
    state_entropy_exact,
    static_entropy,
)
from pce.sweeps import csv_body, render_csv, run, spec_from_config, with_workers

GOLDEN = Path(__file__).parent / "golden" / "dynamic_50um_xi616.json"


def xi_p(omega, d):
    return squeezing_bounds(TrapPair(omega, d))[1]


def test_01_constants_anchor(criterion):
    gamma = dipole_decoherence_rate(1e10)
    rel = abs(gamma - 6.26e-4) / 6.26e-4
    criterion(1, "dipole decoherence rate at 1e10 rad/s", rel <= 0.01, f"gamma={gamma:.4e} Hz, rel err {rel:.2e}")


def test_02_squeezing_bound_anchors(criterion):
    a = xi_p(1e9, 500e-9)
    b = xi_p(1e9, 750e-9)
    c = 0.95 * xi_p(1e10, 50e-6)
    checks = {"500nm": abs(a - 0.75) <= 0.02, "750nm": abs(b - 1.16) <= 0.02, "95%@50um": abs(c - 6.16) <= 0.01}
    detail = (f"xi_p(500nm)={a:.4f} [{checks['500nm']}], xi_p(750nm)={b:.4f} [{checks['750nm']}], "
              f"0.95 xi_p(50um)={c:.4f} [{checks['95%@50um']}]; exempt xi_p(250nm)={xi_p(1e9, 250e-9):.4f}")
    criterion(2, "squeezing-bound anchors", all(checks.values()), detail)


def test_03_static_dip(criterion):
    ok, parts = True, []
    for d in (100e-9, 1e-6, 50e-6):
        ws = static_dip_frequency(d)
        tp = TrapPair(ws, d)
        s_cd, s_c = static_entropy(tp), static_entropy(tp, "coulomb_only")
        flips = lambda_first_order(TrapPair(0.99 * ws, d)) > 0 > lambda_first_order(TrapPair(1.01 * ws, d))
        ok &= s_cd <= 1e-30 and s_c > 0 and flips
        parts.append(f"d={d:.0e}: S_CD={s_cd:.1e}, S_C={s_c:.1e}, sign flip={flips}")
    criterion(3, "static dip", ok, "; ".join(parts))


def test_04_plateau(criterion):
    d = 100e-9
    s17, s18 = static_entropy(TrapPair(1e17, d)), static_entropy(TrapPair(1e18, d))
    rel = abs(s17 - s18) / s18
    ok = rel <= 1e-3 and s17 < 1e-14 and s18 < 1e-14
    criterion(4, "high-frequency plateau at 100 nm", ok,
              f"S_CD(1e17)={s17:.5e}, S_CD(1e18)={s18:.5e}, rel diff {rel:.2e} (tol 1e-3)")


def test_05_identity_suite(criterion):
    rng = np.random.default_rng(5)
    worst_lam = worst_eff = worst_dip = 0.0
    for _ in range(1000):
        w, d = 10 ** rng.uniform(8, 18), 10 ** rng.uniform(-8, -2)
        tp = TrapPair(w, d)
        cpl = couplings(tp)
        lam = lambda_first_order(tp)
        worst_lam = max(worst_lam, abs(lam + (cpl.g_c + cpl.g_d) / (2 * w)) / abs(lam))
        worst_eff = max(worst_eff, abs(cpl.omega_eff**2 - w**2 + 4 * cpl.g_c * cpl.g_d) / cpl.omega_eff**2)
        xi = dynamic_dip_squeezing(w, d)
        lhs, rhs = abs(cpl.g_c) * math.exp(-2 * xi), abs(cpl.g_d) * math.exp(2 * xi)
        worst_dip = max(worst_dip, abs(lhs - rhs) / rhs)
    ok = worst_lam <= 1e-12 and worst_eff <= 1e-12 and worst_dip <= 1e-10
    criterion(5, "identity suite", ok,
              f"lambda {worst_lam:.1e}, omega_eff {worst_eff:.1e} (relative to omega_eff^2), dip {worst_dip:.1e}")


def test_06_symplectic_suite(criterion):
    rng = np.random.default_rng(6)
    worst = dict(symp=0.0, group=0.0, purity=0.0, modes=0.0, uncert=0.0)
    for _ in range(1000):
        tp = random_weak_trap(rng)
        h = hamiltonian_quadratic_form(tp, couplings(tp))
        t1, t2 = rng.uniform(0, 20, size=2) / tp.omega
        s1, s2, s12 = propagator(h, t1), propagator(h, t2), propagator(h, t1 + t2)
        sigma = evolve(initial_covariance(tp), s1)
        worst["symp"] = max(worst["symp"], symplectic_residual(s1))
        worst["group"] = max(worst["group"], float(np.max(np.abs(s1.matrix @ s2.matrix - s12.matrix))))
        worst["purity"] = max(worst["purity"], float(np.max(np.abs(global_symplectic_eigenvalues(sigma) - 1))))
        e1 = entropy_from_occupation(reduced_occupation(sigma, 1))
        e2 = entropy_from_occupation(reduced_occupation(sigma, 2))
        worst["modes"] = max(worst["modes"], abs(e1 - e2))
        worst["uncert"] = max(worst["uncert"], -uncertainty_min_eigenvalue(sigma))
    ok = (worst["symp"] < 1e-10 and worst["group"] < 1e-9 and worst["purity"] < 1e-9
          and worst["modes"] < 1e-10 and worst["uncert"] <= 1e-9)
    criterion(6, "symplectic suite (1000 samples)", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_07_oracle_equivalence(criterion):
    w = 1e10
    times = np.linspace(0, 7 / w, 8)
    pairs = [(-1e-2, 5e-3), (-1e-2, 0.0), (-5e-3, 1e-2), (1e-2, 1e-2), (-2e-3, -1e-2)]
    xis = np.linspace(-1.0, 1.0, 10)
    worst_dev, worst_gap, n_points, gate_failures = 0.0, 0.0, 0, []
    for rc, rd in pairs:
        cpl = Couplings.from_rates(rc * w, rd * w, w)
        for xi in xis:
            tp = TrapPair(w, 50e-6, float(xi))
            _, s_g, _ = entanglement_series(tp, times=times, cpl=cpl)
            s32 = fock_entropy_series(tp, times, n=32, cpl=cpl, tail_tol=math.inf)
            s40 = fock_entropy_series(tp, times[-1:], n=40, cpl=cpl, tail_tol=math.inf)
            gap = abs(s40[0] - s32[-1])
            if gap >= 1e-8:
                gate_failures.append(round(float(xi), 3))
            worst_gap = max(worst_gap, gap)
            worst_dev = max(worst_dev, float(np.max(np.abs(s_g - s32))))
            n_points += 1
    worst_lam = 0.0
    for omega, d in [(1e9, 1e-5), (1e12, 1e-6), (1e15, 1e-7), (1e17, 1e-7)]:
        tp = TrapPair(omega, d)
        amp = perturbative_coefficients(build_hamiltonian(tp, n=4), 4, omega)[0][(1, 1)]
        worst_lam = max(worst_lam, abs(amp - lambda_first_order(tp)) / abs(lambda_first_order(tp)))
    ok = n_points >= 50 and not gate_failures and worst_dev <= 1e-6 and worst_lam <= 1e-10
    criterion(7, "Gaussian vs Fock oracle at N=32", ok,
              f"{n_points} points, max |dS|={worst_dev:.1e} (tol 1e-6), worst N=32/40 gap {worst_gap:.1e}, "
              f"convergence gate failed at xi in {sorted(set(gate_failures))}, lambda_11 rel {worst_lam:.1e}")


def test_08_dynamical_dip(criterion):
    w = 1e10
    ok, parts = True, []
    for d in (10e-6, 50e-6, 200e-6):
        xi = dynamic_dip_squeezing(w, d)
        vals = [max_entropy(TrapPair(w, d, x))[0] for x in (xi - 0.5, xi, xi + 0.5)]
        ratio = vals[1] / min(vals[0], vals[2])
        ok &= ratio <= 1e-3
        parts.append(f"d={d * 1e6:.0f}um xi_dip={xi:.3f}: S_max {vals[0]:.3e}/{vals[1]:.3e}/{vals[2]:.3e}, "
                     f"ratio {ratio:.2e}")
    criterion(8, "dynamical dip suppression >= 1e3", ok, "; ".join(parts))


def _rate_pulses(times, s):
    """Number of growth-rate peaks, and the deepest rate dip relative to the top rate.

    At these parameters S(t) climbs as a staircase; its oscillation shows up
    as a rate that pulses at 2 omega_eff and nearly stops in between.
    """
    rate = np.gradient(s, times)
    dips = argrelmin(rate)[0]
    depth = float(np.max(rate[dips]) / rate.max()) if dips.size else 1.0
    return len(argrelmax(rate)[0]), depth


def test_09_darwin_raises_dynamic_entanglement(criterion):
    tp = TrapPair(1e10, 50e-6, 6.16)
    times = np.linspace(0, 1e-9, 2048)
    _, s_c, _ = entanglement_series(tp, "coulomb_only", times)
    _, s_cd, _ = entanglement_series(tp, "coulomb_plus_darwin", times)
    (pc, dc), (pcd, dcd) = _rate_pulses(times, s_c), _rate_pulses(times, s_cd)
    oscillating = pc >= 2 and pcd >= 2 and dc < 0.05 and dcd < 0.05
    golden = json.loads(GOLDEN.read_text())
    matches = (s_c.max() == pytest.approx(golden["max_S_C"], rel=1e-9)
               and s_cd.max() == pytest.approx(golden["max_S_CD"], rel=1e-9))
    ok = oscillating and s_cd.max() > s_c.max() and matches
    criterion(9, "Darwin term raises the dynamic entropy", ok,
              f"max S_C={s_c.max():.6f}, max S_CD={s_cd.max():.6f} bits, rate pulses {pc}/{pcd} "
              f"(dips {dc:.1e}/{dcd:.1e} of peak), golden match={matches}")


def test_10_higher_order_dip(criterion):
    d = 100e-9
    ws = static_dip_frequency(d)
    ent = {f: state_entropy_exact(higher_order_state(higher_order_lambdas(TrapPair(f * ws, d))))
           for f in (0.5, 1.0, 2.0)}
    ratio = ent[1.0] / min(ent[0.5], ent[2.0])
    grid = np.geomspace(1.001e12, 1e18, 200)
    lams = np.array([higher_order_lambdas(TrapPair(x, d))[1:] for x in grid])
    mono = bool(np.all(np.diff(lams[:, 0]) < 0) and np.all(np.diff(lams[:, 1]) < 0))
    ok = ent[1.0] > 0 and ratio < 1e-3 and mono
    criterion(10, "higher-order state at the dip", ok,
              f"S(dip)={ent[1.0]:.3e}, neighbours {ent[0.5]:.3e}/{ent[2.0]:.3e}, ratio {ratio:.1e}, "
              f"lambda2/lambda3 decreasing={mono}")


def test_11_determinism(criterion):
    static = spec_from_config({}, "static")
    heat = spec_from_config({"d": {"log": [1e-6, 1e-4, 8]}, "xi": {"linear": [-4, 4, 8]}, "scan_samples": 512},
                            "heatmap")
    same = []
    for spec in (static, heat):
        one = csv_body(render_csv(run(with_workers(spec, 1))))
        eight = csv_body(render_csv(run(with_workers(spec, 8))))
        same.append(one == eight)
    criterion(11, "worker-count determinism (1 vs 8)", all(same),
              f"static 256x3 identical={same[0]}, heatmap 8x8 identical={same[1]}")
