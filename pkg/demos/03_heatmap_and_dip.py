# %% [markdown]
# # Maximum entropy over squeezing and separation
#
# For each (d, xi) the entropy is maximized over four effective periods.
# The squeezing at which |g_C| e^(-2 xi) = |g_D| e^(2 xi) is where the
# two couplings balance in the rotating-wave picture; the exact dynamics
# show how much suppression that balance actually buys.

# %%
from pce import TrapPair, dynamic_dip_squeezing, max_entropy
from pce.sweeps import run, spec_from_config

omega = 1e10
for d in (10e-6, 50e-6, 200e-6):
    xi_dip = dynamic_dip_squeezing(omega, d)
    row = [max_entropy(TrapPair(omega, d, x))[0] for x in (xi_dip - 0.5, xi_dip, xi_dip + 0.5)]
    print(f"d={d * 1e6:5.0f} um  xi_dip={xi_dip:.3f}  S_max at xi_dip-0.5, xi_dip, xi_dip+0.5: "
          + ", ".join(f"{v:.3e}" for v in row))

# %% [markdown]
# A coarse heatmap through the sweep API. The full 128 x 128 grid is what
# `pce heatmap` computes by default.

# %%
spec = spec_from_config({"d": {"log": [1e-6, 1e-4, 5]}, "xi": {"linear": [-6, 6, 7]}, "scan_samples": 1024},
                        "heatmap")
table = run(spec)
for r in table.rows:
    rec = dict(zip(table.columns, r))
    print(f"d={rec['d_m']:.1e} xi={rec['xi']:+.1f} S_max_CD={rec['S_max_CD']:.3e} in_bounds={rec['in_bounds']}")
