# %% [markdown]
# # Ground-state entanglement of two trapped electrons
#
# Two electrons sit in identical harmonic traps a distance d apart. To first
# order in the interaction the ground state is (|00> + lam |11>) / norm, and
# the entanglement entropy follows from lam alone. The Darwin correction
# makes lam change sign at omega* = 2c / (sqrt(3) d).

# %%
import numpy as np

from pce import TrapPair, lambda_first_order, lambda_nonrelativistic, static_dip_frequency, static_entropy
from pce.static import plateau_lambda

d = 1e-6
omega_star = static_dip_frequency(d)
print(f"dip frequency for d = 1 um: {omega_star:.4e} rad/s")

# %% [markdown]
# Scan the trap frequency across the dip. The Coulomb-only entropy falls
# steadily, the full entropy drops to zero at omega* and then levels off.

# %%
for omega in np.geomspace(1e12, 1e18, 13):
    tp = TrapPair(omega, d)
    print(f"omega={omega:9.2e}  lam={lambda_first_order(tp):+.3e}  lam_nr={lambda_nonrelativistic(tp):.3e}  "
          f"S_C={static_entropy(tp, 'coulomb_only'):.3e}  S_CD={static_entropy(tp):.3e}")

# %% [markdown]
# At high frequency lam tends to a constant set by d and c alone.

# %%
for d in (100e-9, 1e-6, 50e-6):
    print(f"d={d:.0e} m  plateau lam = {plateau_lambda(d):.4e}")
