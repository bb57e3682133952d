import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pce.physics import TrapPair, couplings, static_dip_frequency
from pce.static import (
    density_matrix,
    entropy_from_probabilities,
    higher_order_lambdas,
    higher_order_state,
    lambda_first_order,
    lambda_nonrelativistic,
    plateau_lambda,
    reduced_density,
    state_entropy_exact,
    static_entropy,
    two_qubit_entropy,
)


def test_entropy_of_product_is_zero():
    assert two_qubit_entropy(0.0) == 0.0
    assert two_qubit_entropy(0.0, "small_lambda") == 0.0


def test_maximally_entangled_pair_has_one_bit():
    assert two_qubit_entropy(1.0) == pytest.approx(1.0, abs=1e-15)
    assert two_qubit_entropy(1.0, base=math.e) == pytest.approx(math.log(2), abs=1e-15)


@given(st.floats(1e-150, 1e-3))
def test_small_lambda_limit(lam):
    exact = two_qubit_entropy(lam)
    approx = two_qubit_entropy(lam, "small_lambda")
    # the neglected term is lam^2 / ln 2 relative to lam^2 log2(1/lam^2)
    assert exact == pytest.approx(approx, rel=2.0 / abs(math.log(lam**2)))


@given(st.floats(1e-12, 1e6))
def test_entropy_even_in_lambda(lam):
    assert two_qubit_entropy(lam) == two_qubit_entropy(-lam)


def test_entropy_rejects_bad_input():
    with pytest.raises(ValueError):
        two_qubit_entropy(math.nan)
    with pytest.raises(ValueError):
        two_qubit_entropy(0.1, "series")


@settings(max_examples=300)
@given(st.floats(1e8, 1e18), st.floats(1e-8, 1e-3))
def test_lambda_equals_coupling_combination(w, d):
    tp = TrapPair(w, d)
    cpl = couplings(tp)
    target = -(cpl.g_c + cpl.g_d) / (2 * w)
    assert lambda_first_order(tp) == pytest.approx(target, rel=1e-12, abs=1e-300)


def test_lambda_against_high_precision():
    mpmath.mp.dps = 40
    e = mpmath.mpf("1.602176634e-19")
    eps0 = mpmath.mpf("8.8541878128e-12")
    m = mpmath.mpf("9.1093837015e-31")
    c = mpmath.mpf(299792458)
    w, d = mpmath.mpf(10) ** 12, mpmath.mpf("1e-6")
    lam = e**2 / (8 * mpmath.pi * eps0 * m * w**2 * d**3) * (1 - 3 * d**2 * w**2 / (4 * c**2))
    assert lambda_first_order(TrapPair(1e12, 1e-6)) == pytest.approx(float(lam), rel=1e-14)
    assert lambda_nonrelativistic(TrapPair(1e9, 250e-9)) == pytest.approx(8104.44, rel=1e-5)


def test_lambda_changes_sign_across_dip():
    d = 1e-6
    ws = static_dip_frequency(d)
    assert lambda_first_order(TrapPair(0.9 * ws, d)) > 0 > lambda_first_order(TrapPair(1.1 * ws, d))


def test_plateau_limit():
    d = 100e-9
    assert lambda_first_order(TrapPair(1e22, d)) == pytest.approx(plateau_lambda(d), rel=1e-8)


def test_static_entropy_selectors():
    tp = TrapPair(1e12, 1e-6)
    assert static_entropy(tp, "coulomb_only") == two_qubit_entropy(lambda_nonrelativistic(tp))
    with pytest.raises(ValueError):
        static_entropy(tp, "darwin_only")


def test_higher_order_state_normalized_and_first_order_consistent():
    tp = TrapPair(1e13, 1e-6)
    lams = higher_order_lambdas(tp)
    assert lams[0] == pytest.approx(lambda_first_order(tp), rel=1e-12)
    state = higher_order_state(lams)
    assert np.linalg.norm(state.vector) == pytest.approx(1.0, abs=1e-15)
    rho = density_matrix(state)
    assert np.trace(rho) == pytest.approx(1.0)
    assert np.trace(reduced_density(state)) == pytest.approx(1.0)


def test_higher_order_entropy_matches_two_qubit_when_corrections_vanish():
    lam = 0.05
    state = higher_order_state((lam, 0.0, 0.0))
    assert state_entropy_exact(state) == pytest.approx(two_qubit_entropy(lam), rel=1e-12)


def test_svd_entropy_agrees_with_density_spectrum_for_moderate_amplitudes():
    state = higher_order_state((0.2, 0.05, 0.03))
    p = np.linalg.eigvalsh(reduced_density(state))
    assert state_entropy_exact(state) == pytest.approx(entropy_from_probabilities(np.clip(p, 0, None)), rel=1e-10)


def test_higher_order_entropy_survives_at_dip():
    d = 100e-9
    s = state_entropy_exact(higher_order_state(higher_order_lambdas(TrapPair(static_dip_frequency(d), d))))
    assert s > 0


def test_higher_order_lambdas_decrease_with_frequency():
    ws = np.geomspace(1.01e12, 1e18, 50)
    l2, l3 = np.array([higher_order_lambdas(TrapPair(w, 1e-7))[1:] for w in ws]).T
    assert np.all(np.diff(l2) < 0) and np.all(np.diff(l3) < 0)


def test_entropy_from_probabilities_basics():
    assert entropy_from_probabilities([1.0]) == 0.0
    assert entropy_from_probabilities([0.5, 0.5]) == pytest.approx(1.0)
    assert entropy_from_probabilities([0.25] * 4) == pytest.approx(2.0)
