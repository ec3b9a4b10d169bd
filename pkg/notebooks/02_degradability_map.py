# %% [markdown]
# # Where is the channel degradable?
# Scan the two planes where the answer is known in closed form and print a
# character map: D degradable, A antidegradable, B both, . neither.

# %%
import numpy as np

from madcap.degradability import classify, classify_effective


def symbol(r):
    d, a = r.degradable == "yes", r.antidegradable == "yes"
    return "B" if d and a else "D" if d else "A" if a else "."


ax = np.round(np.linspace(0, 1, 11), 12)

# %% g2 = 0 plane, rows g3 (top = 1), columns g1
for g3 in ax[::-1]:
    print(f"g3={g3:.1f} " + " ".join(symbol(classify((g1, 0.0, g3))) for g1 in ax))

# %% g1 = 0 plane, rows g3, columns g2; blank outside g2 + g3 <= 1
for g3 in ax[::-1]:
    row = [symbol(classify((0.0, g2, g3))) if g2 + g3 <= 1 else " " for g2 in ax]
    print(f"g3={g3:.1f} " + " ".join(row))

# %% The qubit-input map behind g1 = 1: degrading rate below the line, antidegradable above
for g2, g3 in [(0.2, 0.1), (0.2, 0.3), (0.2, 0.5), (0.6, 0.3)]:
    r = classify_effective(g2, g3)
    print(g2, g3, r.degradable, r.antidegradable, r.witness["degradable"].get("map_rates"))
