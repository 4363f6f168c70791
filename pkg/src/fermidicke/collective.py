"""Collective emission operators, bright/dark classification and multi-mode sector graphs."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .hilbert import (
    DENSE_MAX_DIM,
    BasisDescriptor,
    CapacityError,
    excitation_number_operator,
    site_jump_operator,
)

__all__ = [
    "ConsistencyError",
    "CollectiveModeSet",
    "Classification",
    "SectorGraph",
    "collective_jump",
    "collective_lowering",
    "collective_mode_operator",
    "nilpotency_check",
    "classify_states",
    "excitation_resolved_classification",
    "bright_mode_population",
    "multimode_sector_graph",
    "sector_rate_spectrum",
    "occupation_state",
    "is_hypercube",
    "verify_sector_graph",
]

DEGENERACY_TOL = 1e-9


class ConsistencyError(RuntimeError):
    """An internal algebraic identity failed to hold."""


def _site_ops(basis):
    return [site_jump_operator(basis, i) for i in range(basis.n_sites)]


def collective_lowering(basis: BasisDescriptor) -> sp.csr_matrix:
    """Normalised bright-mode operator ``C = sum_i c_i / sqrt(N)``."""
    total = sum(_site_ops(basis))
    return (total / np.sqrt(basis.n_sites)).tocsr()


def collective_jump(basis: BasisDescriptor, gamma0: float = 1.0) -> sp.csr_matrix:
    """Collective emission jump operator ``L = sqrt(N gamma0) C``.

    The operator always lowers excitations (parent -> daughter). For the
    ``fb`` configuration this is the adjoint of the ``f^+ b`` sum, i.e. the
    ``L^+`` that emits in that case. For ``bb`` it is ``sqrt(gamma0) S^-``.
    """
    if gamma0 < 0:
        raise ValueError(f"gamma0 must be non-negative, got {gamma0}")
    return (np.sqrt(basis.n_sites * gamma0) * collective_lowering(basis)).tocsr()


def dft_weights(n_sites: int, n_rows: int | None = None) -> np.ndarray:
    """Rows ``e^{i j 2 pi k / N} / sqrt(N)`` for ``k = 0 .. n_rows-1``."""
    n_rows = n_sites if n_rows is None else n_rows
    k = np.arange(n_rows)[:, None]
    j = np.arange(n_sites)[None, :]
    return np.exp(2j * np.pi * k * j / n_sites) / np.sqrt(n_sites)


def collective_mode_operator(basis: BasisDescriptor, k: int, weights=None) -> sp.csr_matrix:
    """Emission operator into collective mode ``k``: ``sum_j w_{k,j} c_j``.

    With the default DFT weights, ``k = 0`` gives exactly ``C``. Emitting into
    mode ``k`` creates one collective daughter excitation in that mode, so
    the operators obey fermionic anticommutation among all ``k``.
    """
    if weights is None:
        if not 0 <= k < basis.n_sites:
            raise IndexError(f"mode index {k} out of range for N={basis.n_sites}")
        row = dft_weights(basis.n_sites)[k]
    else:
        weights = np.atleast_2d(np.asarray(weights, dtype=complex))
        if not 0 <= k < weights.shape[0]:
            raise IndexError(f"mode index {k} out of range for {weights.shape[0]} rows")
        row = weights[k]
    ops = _site_ops(basis)
    out = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for w, op in zip(row, ops):
        if w != 0:
            out = out + w * op
    return out.tocsr()


def nilpotency_check(L) -> float:
    """Largest absolute entry of ``L @ L`` (computed in sparse arithmetic)."""
    sq = sp.csr_matrix(L) @ sp.csr_matrix(L)
    if sq.nnz == 0:
        return 0.0
    return float(np.abs(sq.data).max())


@dataclass
class Classification:
    """Spectral decomposition of ``L^+ L`` into bright and dark states.

    ``bright`` and ``dark`` hold orthonormal basis vectors as columns. When
    the spectrum is two-valued (fermionic emission) ``pairs[k] = (k, k)``
    means ``dark[:, k]`` is ``L bright[:, k]`` normalised.
    """

    eigenvalues: np.ndarray
    multiplicities: list[tuple[float, int]]
    bright: np.ndarray
    dark: np.ndarray
    bright_rates: np.ndarray
    bright_excitations: np.ndarray
    dark_excitations: np.ndarray
    pairs: list[tuple[int, int]] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_bright(self) -> int:
        return self.bright.shape[1]

    @property
    def n_dark(self) -> int:
        return self.dark.shape[1]

    @property
    def two_valued(self) -> bool:
        return len(self.multiplicities) <= 2 and bool(self.pairs or not self.n_bright)

    def counts_by_excitation(self) -> dict[int, tuple[int, int]]:
        levels = sorted(set(self.bright_excitations.tolist()) | set(self.dark_excitations.tolist()))
        return {
            int(ne): (int(np.sum(self.bright_excitations == ne)), int(np.sum(self.dark_excitations == ne)))
            for ne in levels
        }


def _group_eigenvalues(values: np.ndarray, tol: float) -> list[tuple[float, int]]:
    groups: list[list[float]] = []
    for v in np.sort(values):
        if groups and abs(v - groups[-1][-1]) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    out = []
    for g in groups:
        mean = float(np.mean(g))
        out.append((0.0 if abs(mean) <= tol else mean, len(g)))
    return out


def _canonical_basis(vectors: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of span(vectors) via Gram-Schmidt on projector columns.

    Columns of the projector are taken in index order, which makes the basis
    independent of whatever rotation the eigensolver returned.
    """
    dim, rank = vectors.shape
    if rank == 0:
        return np.zeros((dim, 0), dtype=complex)
    proj = vectors @ vectors.conj().T
    out = []
    for col in range(dim):
        v = proj[:, col].copy()
        for q in out:
            v -= q * (q.conj() @ v)
        for q in out:
            v -= q * (q.conj() @ v)
        norm = np.linalg.norm(v)
        if norm > tol:
            out.append(v / norm)
            if len(out) == rank:
                break
    if len(out) != rank:
        raise ConsistencyError(f"canonical basis found {len(out)} of {rank} vectors")
    return np.column_stack(out)


def _dense(op) -> np.ndarray:
    return op.toarray() if sp.issparse(op) else np.asarray(op)


def classify_states(L, basis: BasisDescriptor | None = None, tol: float = DEGENERACY_TOL) -> Classification:
    """Diagonalise ``L^+ L`` and split eigenvectors into bright and dark sets.

    With ``basis`` given the problem is solved block by block in the
    excitation number ``N_e`` (which commutes with ``L^+ L``), so each state
    carries an ``N_e`` label and dimensions up to ``2^12`` stay cheap.
    Without it the full matrix is diagonalised, which is only allowed below
    the dense threshold. Eigenvalues within ``tol * max_eigenvalue`` are
    treated as degenerate.
    """
    L = sp.csr_matrix(L)
    dim = L.shape[0]
    rate_op = (L.conj().T @ L).tocsr()
    if basis is None:
        if dim >= DENSE_MAX_DIM:
            raise CapacityError(f"dense classification needs dim < {DENSE_MAX_DIM}, got {dim}")
        blocks = [(None, np.arange(dim))]
    else:
        if basis.dim != dim:
            raise ValueError(f"operator dimension {dim} does not match basis dimension {basis.dim}")
        commutator_norm = _commutator_norm(rate_op, excitation_number_operator(basis))
        if commutator_norm > 1e-12:
            raise ConsistencyError(f"[L^+L, N_e] != 0 (max entry {commutator_norm:.3e})")
        exc = basis.excitations
        blocks = [(int(ne), np.flatnonzero(exc == ne)) for ne in np.unique(exc)]

    block_eigs = []
    residual = 0.0
    for ne, idx in blocks:
        sub = _dense(rate_op[idx][:, idx])
        vals, vecs = np.linalg.eigh(sub)
        residual = max(residual, float(np.abs(sub @ vecs - vecs * vals).max()) if vals.size else 0.0)
        block_eigs.append((ne, idx, vals, vecs))

    all_vals = np.concatenate([v for _, _, v, _ in block_eigs])
    scale = max(float(all_vals.max()), 1.0) if all_vals.size else 1.0
    atol = tol * scale
    multiplicities = _group_eigenvalues(all_vals, atol)
    levels = [v for v, _ in multiplicities]

    def snap(v):
        return min(levels, key=lambda lv: abs(lv - v))

    bright_cols, bright_rates, bright_exc = [], [], []
    zero_spaces = []
    for ne, idx, vals, vecs in block_eigs:
        snapped = np.array([snap(v) for v in vals])
        for level in sorted(set(snapped.tolist()), reverse=True):
            sel = snapped == level
            local = _canonical_basis(vecs[:, sel])
            full = np.zeros((dim, local.shape[1]), dtype=complex)
            full[idx] = local
            if abs(level) <= atol:
                zero_spaces.append((ne, full))
            else:
                bright_cols.append(full)
                bright_rates.extend([level] * local.shape[1])
                bright_exc.extend([ne if ne is not None else -1] * local.shape[1])

    bright = np.hstack(bright_cols) if bright_cols else np.zeros((dim, 0), dtype=complex)
    bright_rates = np.asarray(bright_rates, dtype=float)
    bright_exc = np.asarray(bright_exc, dtype=int)

    two_valued = len(multiplicities) <= 2 and (len(multiplicities) < 2 or abs(levels[0]) <= atol)
    pairs: list[tuple[int, int]] = []
    dark_cols, dark_exc = [], []
    if two_valued and bright.shape[1]:
        images = L @ bright
        norms = np.linalg.norm(images, axis=0)
        dark_cols = list((images / norms).T)
        # L lowers N_e by one
        dark_exc = [e - 1 if e >= 0 else -1 for e in bright_exc]
        pairs = [(k, k) for k in range(bright.shape[1])]
    # complete the dark basis from the zero eigenspaces, in lexicographic order
    for ne, space in zero_spaces:
        have = np.column_stack(dark_cols) if dark_cols else np.zeros((dim, 0), dtype=complex)
        for v in space.T:
            w = v - have @ (have.conj().T @ v) if have.shape[1] else v.copy()
            norm = np.linalg.norm(w)
            if norm > 1e-8:
                dark_cols.append(w / norm)
                dark_exc.append(ne if ne is not None else -1)
                have = np.column_stack(dark_cols)
    dark = np.column_stack(dark_cols) if dark_cols else np.zeros((dim, 0), dtype=complex)
    dark_exc = np.asarray(dark_exc, dtype=int)
    if basis is not None:
        order = np.lexsort((np.arange(dark.shape[1]), -dark_exc)) if not pairs else np.arange(dark.shape[1])
        dark, dark_exc = dark[:, order], dark_exc[order]

    dark_leak = float(np.abs(L @ dark).max()) if dark.shape[1] else 0.0
    return Classification(
        eigenvalues=np.sort(all_vals),
        multiplicities=multiplicities,
        bright=bright,
        dark=dark,
        bright_rates=bright_rates,
        bright_excitations=bright_exc,
        dark_excitations=dark_exc,
        pairs=pairs,
        diagnostics={"eig_residual": residual, "dark_leak": dark_leak, "degeneracy_atol": atol},
    )


def _commutator_norm(a, b) -> float:
    c = (a @ b - b @ a).tocsr()
    c.eliminate_zeros()
    return float(np.abs(c.data).max()) if c.nnz else 0.0


def excitation_resolved_classification(L, basis: BasisDescriptor) -> dict[int, tuple[int, int]]:
    """Bright and dark state counts per excitation number ``N_e``."""
    return classify_states(L, basis).counts_by_excitation()


def bright_mode_population(psi: np.ndarray, basis: BasisDescriptor) -> float:
    """``n_0 = <C^+ C>``; the emission rate is ``N gamma0 n_0``."""
    psi = np.asarray(psi)
    c_psi = collective_lowering(basis) @ psi
    return float(np.real(np.vdot(c_psi, c_psi)) / np.real(np.vdot(psi, psi)))


# ---------------------------------------------------------------------------
# Multi-mode emission


@dataclass
class CollectiveModeSet:
    """Emitting collective modes: orthonormal weight rows and per-mode rates."""

    weights: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        self.weights = np.atleast_2d(np.asarray(self.weights, dtype=complex))
        self.rates = np.broadcast_to(np.asarray(self.rates, dtype=float), (self.weights.shape[0],)).copy()
        gram = self.weights @ self.weights.conj().T
        err = np.abs(gram - np.eye(self.n_modes)).max()
        if err > 1e-12:
            raise ValueError(f"mode weight rows are not orthonormal (max deviation {err:.2e})")
        if np.any(self.rates < 0):
            raise ValueError("mode rates must be non-negative")

    @classmethod
    def dft(cls, n_sites: int, n_modes: int, rates=1.0) -> "CollectiveModeSet":
        return cls(dft_weights(n_sites, n_modes), rates)

    @property
    def n_modes(self) -> int:
        return self.weights.shape[0]

    @property
    def n_sites(self) -> int:
        return self.weights.shape[1]

    def completed(self) -> np.ndarray:
        """Unitary ``N x N`` matrix whose first rows are the emitting modes.

        Spectator rows come from the remaining DFT rows when they are
        orthogonal to the given ones, else from a QR completion.
        """
        n, m = self.n_sites, self.n_modes
        dft = dft_weights(n)
        if m == n:
            return self.weights.copy()
        if np.allclose(self.weights, dft[:m], atol=1e-14):
            return dft
        q, _ = np.linalg.qr(np.hstack([self.weights.conj().T, np.eye(n)]))
        rest = q[:, m:n].conj().T
        unitary = np.vstack([self.weights, rest])
        if np.abs(unitary @ unitary.conj().T - np.eye(n)).max() > 1e-10:
            raise ConsistencyError("failed to complete mode weights to a unitary")
        return unitary


@dataclass
class SectorGraph:
    """Collective occupation states linked by single emissions into the emitting modes.

    Node ``k`` carries the occupations of all ``N`` collective modes; the first
    ``n_modes`` are the emitting ones and the rest are conserved spectator
    labels that identify the sector. Edges point from the emitting state to
    the state after one quantum is emitted into ``mode``.
    """

    n_sites: int
    n_modes: int
    occupations: list[tuple[int, ...]]
    rates: np.ndarray
    edges: list[tuple[int, int, int]]

    @property
    def node_ids(self) -> list[str]:
        return ["".join(str(o) for o in occ) for occ in self.occupations]

    def sector_of(self, node: int) -> tuple[int, ...]:
        return self.occupations[node][self.n_modes:]

    def sectors(self) -> dict[tuple[int, ...], list[int]]:
        out: dict[tuple[int, ...], list[int]] = {}
        for k in range(len(self.occupations)):
            out.setdefault(self.sector_of(k), []).append(k)
        return out

    def adjacency(self) -> dict[int, set[int]]:
        adj = {k: set() for k in range(len(self.occupations))}
        for src, dst, _ in self.edges:
            adj[src].add(dst)
            adj[dst].add(src)
        return adj

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        for k, node_id in enumerate(self.node_ids):
            g.add_node(k, id=node_id, rate=float(self.rates[k]))
        for src, dst, mode in self.edges:
            g.add_edge(src, dst, mode=mode)
        return g

    def to_dot(self) -> str:
        lines = ["digraph sectors {"]
        for label, members in sorted(self.sectors().items()):
            name = "".join(str(o) for o in label) or "all"
            lines.append(f'  subgraph "cluster_{name}" {{')
            lines.append(f'    label="sector {name}";')
            for k in members:
                lines.append(f'    "{self.node_ids[k]}" [rate={float(self.rates[k])!r}];')
            lines.append("  }")
        for src, dst, mode in self.edges:
            lines.append(f'  "{self.node_ids[src]}" -> "{self.node_ids[dst]}" [mode={mode}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        ids = self.node_ids
        return {
            "nodes": [
                {"id": ids[k], "occupations": list(occ), "rate": float(self.rates[k])}
                for k, occ in enumerate(self.occupations)
            ],
            "edges": [{"src": ids[s], "dst": ids[d], "mode": m} for s, d, m in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def multimode_sector_graph(basis: BasisDescriptor, modes: CollectiveModeSet) -> SectorGraph:
    """Sector graph of ``2^N`` collective occupation states under ``M`` emitting modes.

    Emission into mode ``m`` raises that mode's collective occupation from 0
    to 1 at rate ``N * rate_m``; every other mode occupation is conserved, so
    sectors are labelled exactly by the spectator occupations.
    """
    n, m = basis.n_sites, modes.n_modes
    if modes.n_sites != n:
        raise ValueError(f"mode weights have {modes.n_sites} columns for N={n}")
    if m > n:
        raise ValueError(f"cannot have {m} orthogonal modes on {n} sites")
    occupations = list(itertools.product((0, 1), repeat=n))
    index = {occ: k for k, occ in enumerate(occupations)}
    rates = np.array(
        [sum(n * modes.rates[j] for j in range(m) if occ[j] == 0) for occ in occupations], dtype=float
    )
    edges = []
    for k, occ in enumerate(occupations):
        for j in range(m):
            if occ[j] == 0:
                after = occ[:j] + (1,) + occ[j + 1:]
                edges.append((k, index[after], j))
    return SectorGraph(n, m, occupations, rates, edges)


def sector_rate_spectrum(graph: SectorGraph, modes: CollectiveModeSet | None = None) -> dict[tuple[int, ...], list[float]]:
    """Sorted node emission rates of each sector."""
    return {label: sorted(float(graph.rates[k]) for k in members) for label, members in graph.sectors().items()}


def occupation_state(basis: BasisDescriptor, unitary: np.ndarray, occupations) -> np.ndarray:
    """Atomic state with the given collective occupations.

    Starts from the all-parent state (the collective vacuum) and applies the
    emission operator of every occupied mode, highest mode index first.
    """
    psi = np.zeros(basis.dim, dtype=complex)
    psi[0] = 1.0
    for k in reversed(range(len(occupations))):
        if occupations[k]:
            psi = collective_mode_operator(basis, k, unitary) @ psi
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise ConsistencyError(f"occupation state {tuple(occupations)} vanished")
    return psi / norm


def is_hypercube(graph: SectorGraph, members: list[int]) -> bool:
    """Check a sector against ``networkx.hypercube_graph(M)`` by isomorphism."""
    import networkx as nx

    sub = graph.to_networkx().subgraph(members)
    return nx.is_isomorphic(sub, nx.hypercube_graph(graph.n_modes))


def verify_sector_graph(basis: BasisDescriptor, modes: CollectiveModeSet, graph: SectorGraph) -> dict:
    """Check a sector graph against the operators it abstracts.

    Builds every collective occupation state explicitly and returns the
    largest deviations of (a) node rates from ``<sum_m N rate_m A_m^+ A_m>``,
    (b) ``|<dst|A_m|src>|`` from 1 along edges, and (c) ``A_m`` applied to a
    node from the graph's prediction (zero when the mode is occupied).
    """
    unitary = modes.completed()
    n = basis.n_sites
    states = np.column_stack([occupation_state(basis, unitary, occ) for occ in graph.occupations])
    ops = [collective_mode_operator(basis, j, unitary) for j in range(modes.n_modes)]
    rate_op = sum(n * modes.rates[j] * (ops[j].conj().T @ ops[j]) for j in range(modes.n_modes))
    rates = np.real(np.einsum("ik,ik->k", states.conj(), rate_op @ states))
    rate_err = float(np.abs(rates - graph.rates).max())
    targets = {(src, mode): dst for src, dst, mode in graph.edges}
    edge_err = 0.0
    leak = 0.0
    for k in range(len(graph.occupations)):
        for j, op in enumerate(ops):
            image = op @ states[:, k]
            dst = targets.get((k, j))
            if dst is None:
                leak = max(leak, float(np.linalg.norm(image)))
            else:
                edge_err = max(edge_err, abs(abs(np.vdot(states[:, dst], image)) - 1.0))
                leak = max(leak, float(np.linalg.norm(image - states[:, dst] * np.vdot(states[:, dst], image))))
    return {"rate_error": rate_err, "edge_error": edge_err, "leak": leak}
