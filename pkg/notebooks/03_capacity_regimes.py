# %% [markdown]
# # Capacities across the solvable regimes
# Print the single-decay curve, the plane values and the bracketing
# interval at a generic point.

# %%
import numpy as np

from madcap import capacity as cap

# %% Single decay: the curve reaches 1 at g1 = 1/2 and stays there
for g1 in np.linspace(0, 1, 11):
    est = cap.q_single_decay(g1)
    p = est.argmax.array if est.argmax else None
    print(f"{g1:.1f}  Q={est.value:.6f}  {est.method}  populations={p}")

# %% Entanglement assistance never drops below the unassisted value
for g1 in np.linspace(0, 1, 6):
    print(f"{g1:.1f}  Q={cap.q_bounds((g1, 0, 0)).value:.6f}  QE={cap.qe((g1, 0, 0)).value:.6f}")

# %% Generic points get an interval from diagonal inputs and data processing
for g in [(0.2, 0.2, 0.2), (0.3, 0.3, 0.0), (0.1, 0.4, 0.3)]:
    est = cap.q_bounds(g)
    print(g, est.status, round(est.lower, 6), round(est.upper, 6), est.note)
