# %% [markdown]
# # A tour of the qutrit damping channel
# Build the channel for a few rate vectors, push states through it and look
# at what the environment receives.

# %%
import numpy as np

from madcap import channel as ch

np.set_printoptions(precision=4, suppress=True)

# %% Kraus operators for a generic rate vector
g = (0.3, 0.2, 0.4)
k = ch.kraus_set(g)
for label, op in zip(k.labels, k.ops):
    print(label)
    print(op.real)
print("completeness residual", k.completeness_residual())

# %% The maximally coherent state loses coherence and population together
psi = np.ones(3) / np.sqrt(3)
rho = np.outer(psi, psi.conj())
print(ch.apply(g, rho).real)
print("environment")
print(ch.complement(g, rho).real)

# %% Composition stays inside the family
a, b = (0.2, 0.3, 0.1), (0.1, 0.2, 0.3)
print("rates of a o b:", tuple(round(x, 6) for x in ch.compose_rates(a, b)))
direct = ch.apply(ch.compose_rates(a, b), rho)
chained = ch.apply(a, ch.apply(b, rho))
print("max deviation", np.max(np.abs(direct - chained)))

# %% Invalid rates are rejected with the violated constraint
print(ch.validate_rates((0.5, 0.6, 0.5)))
