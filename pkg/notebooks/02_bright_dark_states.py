# %% [markdown]
# # Bright and dark states, and why emission stops after one quantum
#
# For fermionic emission the collective jump operator squares to zero, so
# `L^+ L` is `N gamma0` times a projector: every state either emits at the
# full collective rate or not at all.

# %%
import numpy as np

from fermidicke import build_basis, classify_states, collective_jump, nilpotency_check

for n in range(1, 7):
    basis = build_basis(n)
    L = collective_jump(basis)
    cls = classify_states(L, basis)
    print(f"N={n}: |L^2|max={nilpotency_check(L):.0f}  spectrum={cls.multiplicities}")

# %% [markdown]
# Two atoms. With one excitation the antisymmetric combination is bright and
# decays into the two-daughter ground state; the symmetric one is dark.

# %%
basis = build_basis(2)
L = collective_jump(basis)
cls = classify_states(L, basis)
for k in range(cls.n_bright):
    amps = {basis.label(i): np.round(a, 4) for i, a in enumerate(cls.bright[:, k]) if abs(a) > 1e-12}
    print("bright", amps)
for k in range(cls.n_dark):
    amps = {basis.label(i): np.round(a, 4) for i, a in enumerate(cls.dark[:, k]) if abs(a) > 1e-12}
    print("dark  ", amps)

# %% [markdown]
# Three atoms split into four bright/dark pairs, each pair linked by the
# same rate `3 gamma0`. Counting per excitation number shows the pairing
# ladder `N_e -> N_e - 1`.

# %%
basis = build_basis(3)
L = collective_jump(basis)
cls = classify_states(L, basis)
print("bright/dark per N_e:", cls.counts_by_excitation())
for bi, di in cls.pairs:
    rate = np.linalg.norm(L @ cls.bright[:, bi]) ** 2
    print(f"pair {bi}: N_e {cls.bright_excitations[bi]} -> {cls.dark_excitations[di]}, rate {rate:.6f}")

# %% [markdown]
# Bosonic sites for contrast: the top eigenvalue of `S^+ S^-` climbs
# quadratically and overtakes `N` from three atoms on.

# %%
for n in range(2, 8):
    b = build_basis(n, 0, "bb")
    top = classify_states(collective_jump(b), b).eigenvalues.max()
    print(f"N={n}: bosonic top eigenvalue {top:.0f} vs N={n}")
