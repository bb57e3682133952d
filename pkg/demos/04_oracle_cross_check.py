# %% [markdown]
# # Checking the Gaussian pipeline against brute force
#
# The truncated Fock oracle builds the two-mode Hamiltonian as a dense matrix
# and evolves the state vector exactly. Agreement to 1e-6 needs enough levels
# to hold the squeezed vacuum: N = 32 suffices for |xi| <= 0.5, xi = 1 needs
# N of about 56.

# %%
import numpy as np

from pce.fock import convergence_study, fock_entropy_series, squeezed_tail_mass
from pce.gaussian import entanglement_series
from pce.physics import Couplings, TrapPair

w = 1e10
cpl = Couplings.from_rates(-1e-2 * w, 5e-3 * w, w)
times = np.linspace(0, 7 / w, 8)
for xi in (0.25, 0.5, 1.0):
    tp = TrapPair(w, 50e-6, xi)
    _, s_g, _ = entanglement_series(tp, times=times, cpl=cpl)
    s_f = fock_entropy_series(tp, times, n=32, cpl=cpl, tail_tol=np.inf)
    print(f"xi={xi}: tail beyond N=32 {squeezed_tail_mass(xi, 32):.1e}, max |dS| = {np.abs(s_g - s_f).max():.1e}")

# %%
for row in convergence_study(TrapPair(w, 50e-6, 1.0), "coulomb_plus_darwin", 5 / w, [24, 32, 40, 48, 56], cpl):
    print(row)
