# %% [markdown]
# # Several emission modes: sectors and hypercubes
#
# With M orthogonal collective modes, each mode can carry at most one
# emitted quantum. The 2^N states split into sectors labelled by the
# occupations of the N - M spectator modes, and inside a sector the
# emitting-mode occupations form an M-dimensional hypercube.

# %%
import networkx as nx

from fermidicke import CollectiveModeSet, build_basis, multimode_sector_graph
from fermidicke.collective import is_hypercube, sector_rate_spectrum, verify_sector_graph

n = 4
basis = build_basis(n)
for m in (1, 2, 3):
    modes = CollectiveModeSet.dft(n, m, [1.0, 2.0, 4.0][:m])
    graph = multimode_sector_graph(basis, modes)
    sectors = graph.sectors()
    cubes = all(is_hypercube(graph, members) for members in sectors.values())
    check = verify_sector_graph(basis, modes, graph)
    print(f"M={m}: {len(sectors)} sectors of {len(next(iter(sectors.values())))}, hypercube={cubes}, "
          f"operator check {max(check.values()):.1e}")

# %% [markdown]
# Node rates are sums of `N gamma_m` over the still-empty modes, so each
# sector carries the full subset-sum multiset.

# %%
modes = CollectiveModeSet.dft(n, 3, [1.0, 2.0, 4.0])
graph = multimode_sector_graph(basis, modes)
for label, rates in sector_rate_spectrum(graph).items():
    print(label, sorted(rates))
g = graph.to_networkx()
print(f"{g.number_of_nodes()} nodes, {g.number_of_edges()} edges, {nx.number_connected_components(g)} components")

# %% [markdown]
# `graph.to_dot()` and `graph.to_json()` give the same structure for
# external tools.

# %%
print(graph.to_dot()[:400])
