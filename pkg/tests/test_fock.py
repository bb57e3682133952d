import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pce.constants import CODATA2018
from pce.fock import (
    FockSystem,
    TruncationError,
    build_hamiltonian,
    build_interaction,
    convergence_study,
    evolve_exact,
    fock_entropy_series,
    parity_sector,
    perturbative_coefficients,
    position_variance,
    product_state,
    reduced_density_and_entropy,
    squeezed_tail_mass,
    squeezed_vacuum_vector,
)
from pce.gaussian import entanglement_series
from pce.physics import Couplings, TrapPair, couplings, zero_point
from pce.static import lambda_first_order

W = 1e10


@pytest.mark.parametrize("n", [4, 16])
def test_ladder_commutator_away_from_top_level(n):
    s = FockSystem(n)
    comm = s.a @ s.adag - s.adag @ s.a
    assert np.allclose(comm[:-1, :-1], np.eye(n - 1))
    assert comm[-1, -1] == pytest.approx(-(n - 1))


def test_two_mode_operators_commute():
    a1, b1, a2, b2 = FockSystem(6).mode_ops()
    assert np.allclose(a1 @ a2, a2 @ a1)
    assert np.allclose(a1 @ b2, b2 @ a1)


def test_truncation_floor():
    with pytest.raises(TruncationError):
        FockSystem(1)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.0, 1.0))
def test_squeezed_vacuum_variance(xi):
    dx = zero_point(TrapPair(W, 1e-6)).dx
    vec = squeezed_vacuum_vector(xi, 128)
    assert np.linalg.norm(vec) == pytest.approx(1.0)
    assert position_variance(vec, dx) == pytest.approx(dx**2 * math.exp(-2 * xi), rel=1e-9)


def test_squeezed_vacuum_sign_and_parity():
    vec = squeezed_vacuum_vector(0.5, 32)
    assert np.all(vec[1::2] == 0)
    assert vec[2] < 0 < vec[0]


def test_squeezed_tail_reported():
    assert squeezed_tail_mass(0.0, 4) == 0.0
    assert squeezed_tail_mass(1.0, 32) > 1e-6
    with pytest.raises(TruncationError, match="loses probability"):
        squeezed_vacuum_vector(1.0, 32)


def test_quadratic_hamiltonian_hermitian_and_parity_preserving():
    tp = TrapPair(W, 50e-6)
    h = build_hamiltonian(tp, Couplings.from_rates(-1e-2 * W, 5e-3 * W, W), n=8)
    assert np.allclose(h, h.T)
    even, odd = parity_sector(8, 0), parity_sector(8, 1)
    assert np.all(h[np.ix_(even, odd)] == 0)


def test_higher_order_hamiltonian_hermitian():
    tp = TrapPair(1e14, 1e-7)
    h = build_hamiltonian(tp, order="appendix_a", n=6)
    assert np.allclose(h, h.conj().T, rtol=0, atol=1e-12 * np.max(np.abs(h)))
    with pytest.raises(TruncationError):
        build_interaction(tp, couplings(tp), order="appendix_a", n=3)
    with pytest.raises(ValueError):
        build_interaction(tp, couplings(tp), order="cubic", n=6)


def test_higher_order_terms_absent_without_darwin():
    tp = TrapPair(1e14, 1e-7)
    cpl = couplings(tp)
    quad = build_interaction(tp, cpl, "coulomb_only", "quadratic", 6)
    full = build_interaction(tp, cpl, "coulomb_only", "appendix_a", 6)
    assert np.array_equal(quad, full)


@pytest.mark.parametrize("w,d", [(1e9, 1e-5), (1e12, 1e-6), (1e16, 1e-7)])
def test_first_order_amplitude_from_matrix_element(w, d):
    tp = TrapPair(w, d)
    h = build_hamiltonian(tp, n=4)
    coeffs, skipped = perturbative_coefficients(h, 4, w, CODATA2018.hbar)
    assert skipped == []
    assert coeffs[(1, 1)] == pytest.approx(lambda_first_order(tp), rel=1e-10)
    assert set(coeffs) == {(1, 1)}


def test_higher_order_perturbative_support():
    tp = TrapPair(1e14, 1e-7)
    coeffs, _ = perturbative_coefficients(build_hamiltonian(tp, order="appendix_a", n=6), 6, tp.omega)
    assert {(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)} <= set(coeffs)


def test_evolution_is_unitary():
    tp = TrapPair(W, 50e-6)
    h = build_hamiltonian(tp, Couplings.from_rates(-1e-2 * W, 5e-3 * W, W), n=8)
    psi0 = product_state(squeezed_vacuum_vector(0.0, 8), squeezed_vacuum_vector(0.0, 8))
    psi = evolve_exact(h, psi0, 3.0 / W)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        evolve_exact(h, psi0[:10], 1.0)


def test_product_state_has_zero_entropy_and_modes_agree():
    # truncation loss is irrelevant here: a product is unentangled whatever its factors
    psi = product_state(squeezed_vacuum_vector(0.3, 8, 1e-3), squeezed_vacuum_vector(-0.2, 8, 1e-3))
    assert reduced_density_and_entropy(psi)[1] == pytest.approx(0.0, abs=1e-12)
    tp = TrapPair(W, 50e-6, 0.3)
    h = build_hamiltonian(tp, Couplings.from_rates(-1e-2 * W, 5e-3 * W, W), n=16)
    psi = evolve_exact(h, product_state(squeezed_vacuum_vector(0.3, 16, 1e-3), squeezed_vacuum_vector(0.3, 16, 1e-3)), 4 / W)
    s1 = reduced_density_and_entropy(psi, 1)[1]
    s2 = reduced_density_and_entropy(psi, 2)[1]
    assert s1 == pytest.approx(s2, abs=1e-10)
    with pytest.raises(ValueError):
        reduced_density_and_entropy(psi, 3)


@pytest.mark.parametrize("xi", [-0.5, 0.0, 0.5])
def test_oracle_matches_gaussian_at_default_truncation(xi):
    tp = TrapPair(W, 50e-6, xi)
    cpl = Couplings.from_rates(-1e-2 * W, 5e-3 * W, W)
    times = np.linspace(0, 7 / W, 8)
    _, s_g, _ = entanglement_series(tp, times=times, cpl=cpl)
    assert np.max(np.abs(s_g - fock_entropy_series(tp, times, cpl=cpl))) < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("xi", [-1.0, 1.0])
def test_oracle_matches_gaussian_at_converged_truncation(xi):
    tp = TrapPair(W, 50e-6, xi)
    cpl = Couplings.from_rates(-1e-2 * W, 5e-3 * W, W)
    times = np.linspace(0, 7 / W, 6)
    _, s_g, _ = entanglement_series(tp, times=times, cpl=cpl)
    s_f = fock_entropy_series(tp, times, n=64, cpl=cpl, tail_tol=1e-6)
    assert np.max(np.abs(s_g - s_f)) < 1e-6


def test_convergence_study_table():
    tp = TrapPair(W, 50e-6, 0.5)
    cpl = Couplings.from_rates(-1e-2 * W, 5e-3 * W, W)
    rows = convergence_study(tp, "coulomb_plus_darwin", 5 / W, [8, 16, 24, 32, 40], cpl)
    assert [r.n for r in rows] == [8, 16, 24, 32, 40]
    assert not rows[0].converged
    assert rows[-1].converged
    with pytest.raises(ValueError):
        convergence_study(tp, "coulomb_plus_darwin", 1 / W, [16, 8], cpl)
