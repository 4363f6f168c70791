"""Composite basis of N two-level sites plus radiation modes, and the site algebra.

Basis conventions
-----------------
Each site holds exactly one atom: bit ``b_i = 0`` is the parent (``|e>``) and
``b_i = 1`` the daughter (``|g>``). A site configuration is the bit tuple
``(b_0, ..., b_{N-1})`` read with site 0 as the most significant bit, and the
full basis index is ``config * mode_dim + mode_index`` where radiation-mode
occupations are again read lexicographically (mode 0 most significant).

Fermionic signs use a Jordan-Wigner string ordered by ascending site index,
followed by the radiation modes. The string counts whichever species on the
sites is fermionic: daughters for boson->fermion, parents for
fermion->boson. With this ordering the product state
``prod_i (f_i^+ + e^{i a_i} b_i^+)/sqrt(2) |0>`` is a plain tensor product.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Statistics",
    "StatisticsConfig",
    "BasisDescriptor",
    "CapacityError",
    "build_basis",
    "site_jump_operator",
    "site_number_operator",
    "excitation_number_operator",
    "mode_annihilation_operator",
    "mode_number_operator",
    "identity",
    "product_superposition_state",
    "basis_state",
    "apply",
    "anticommutator",
    "commutator",
    "max_dim",
]

# Hard limit for enumerating a basis at all; dense work is capped separately.
BASIS_MAX_DIM = 1 << 20
# Operators are materialised densely only strictly below this dimension.
DENSE_MAX_DIM = 4096
DEFAULT_MAX_DIM = 8192


def max_dim() -> int:
    """Dimension cap for density-matrix work; ``FERMIDICKE_MAX_DIM`` overrides."""
    value = os.environ.get("FERMIDICKE_MAX_DIM")
    if value is None:
        return DEFAULT_MAX_DIM
    try:
        cap = int(value)
    except ValueError:
        raise ValueError(f"FERMIDICKE_MAX_DIM must be an integer, got {value!r}") from None
    if cap < 1:
        raise ValueError(f"FERMIDICKE_MAX_DIM must be positive, got {cap}")
    return cap


class CapacityError(ValueError):
    """Requested Hilbert space exceeds a configured dimension cap."""


class Statistics(str, Enum):
    BOSON = "boson"
    FERMION = "fermion"


@dataclass(frozen=True)
class StatisticsConfig:
    """Quantum statistics of parent, daughter and emitted particle.

    Only the three physical cases exist: ``bf`` (boson parent, fermion
    daughter), ``fb`` (fermion parent, boson daughter) and the photonic
    reference ``bb``. The emitted particle is a fermion exactly when parent
    and daughter differ.
    """

    parent: Statistics
    daughter: Statistics

    def __post_init__(self):
        object.__setattr__(self, "parent", Statistics(self.parent))
        object.__setattr__(self, "daughter", Statistics(self.daughter))
        if self.parent is Statistics.FERMION and self.daughter is Statistics.FERMION:
            raise ValueError("fermion->fermion decay is not a supported configuration")

    @classmethod
    def from_code(cls, code: str) -> "StatisticsConfig":
        codes = {"b": Statistics.BOSON, "f": Statistics.FERMION}
        code = str(code).lower()
        if len(code) != 2 or any(c not in codes for c in code):
            raise ValueError(f"statistics code must be one of bf, fb, bb; got {code!r}")
        return cls(codes[code[0]], codes[code[1]])

    @property
    def code(self) -> str:
        return self.parent.value[0] + self.daughter.value[0]

    @property
    def emitted(self) -> Statistics:
        return Statistics.FERMION if self.parent != self.daughter else Statistics.BOSON

    @property
    def fermionic(self) -> bool:
        return self.emitted is Statistics.FERMION

    def __str__(self):
        return self.code


BOSON_FERMION = StatisticsConfig(Statistics.BOSON, Statistics.FERMION)
FERMION_BOSON = StatisticsConfig(Statistics.FERMION, Statistics.BOSON)
BOSON_BOSON = StatisticsConfig(Statistics.BOSON, Statistics.BOSON)


def _as_stats(stats) -> StatisticsConfig:
    if isinstance(stats, StatisticsConfig):
        return stats
    return StatisticsConfig.from_code(stats)


@dataclass(frozen=True)
class BasisDescriptor:
    """Enumeration of sites (one atom each) times radiation-mode occupations."""

    n_sites: int
    n_modes: int
    stats: StatisticsConfig
    capacities: tuple[int, ...]

    @property
    def site_dim(self) -> int:
        return 1 << self.n_sites

    @property
    def mode_dim(self) -> int:
        return int(np.prod([c + 1 for c in self.capacities], dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.site_dim * self.mode_dim

    @cached_property
    def site_configs(self) -> np.ndarray:
        """Site configuration integer for every basis index."""
        return np.arange(self.dim, dtype=np.int64) // self.mode_dim

    @cached_property
    def mode_occupations(self) -> np.ndarray:
        """(dim, n_modes) array of radiation-mode occupations."""
        rem = np.arange(self.dim, dtype=np.int64) % self.mode_dim
        occ = np.zeros((self.dim, self.n_modes), dtype=np.int64)
        for m in range(self.n_modes - 1, -1, -1):
            base = self.capacities[m] + 1
            occ[:, m] = rem % base
            rem //= base
        return occ

    def site_bit(self, i: int) -> np.ndarray:
        """Daughter indicator ``b_i`` for every basis index."""
        return (self.site_configs >> (self.n_sites - 1 - i)) & 1

    @cached_property
    def excitations(self) -> np.ndarray:
        """Number of parent atoms ``N_e`` for every basis index."""
        daughters = np.zeros(self.dim, dtype=np.int64)
        for i in range(self.n_sites):
            daughters += self.site_bit(i)
        return self.n_sites - daughters

    def index(self, bits, occupations=()) -> int:
        """Basis index of a site bit tuple and mode occupation tuple."""
        bits = tuple(int(b) for b in bits)
        if len(bits) != self.n_sites or any(b not in (0, 1) for b in bits):
            raise ValueError(f"expected {self.n_sites} site bits in {{0, 1}}, got {bits}")
        occupations = tuple(int(o) for o in occupations) or (0,) * self.n_modes
        if len(occupations) != self.n_modes:
            raise ValueError(f"expected {self.n_modes} mode occupations, got {occupations}")
        config = 0
        for b in bits:
            config = (config << 1) | b
        rem = 0
        for occ, cap in zip(occupations, self.capacities):
            if not 0 <= occ <= cap:
                raise ValueError(f"occupation {occ} outside [0, {cap}]")
            rem = rem * (cap + 1) + occ
        return config * self.mode_dim + rem

    def label(self, index: int) -> str:
        """Human readable ket label, e.g. ``|eg;1>``."""
        config, rem = divmod(int(index), self.mode_dim)
        sites = "".join(
            "g" if (config >> (self.n_sites - 1 - i)) & 1 else "e" for i in range(self.n_sites)
        )
        if not self.n_modes:
            return f"|{sites}>"
        return f"|{sites};{''.join(str(o) for o in self.mode_occupations[index])}>"


def build_basis(n_sites: int, n_modes: int = 0, stats="bf", capacity: int | None = None) -> BasisDescriptor:
    """Build the composite basis for ``n_sites`` atoms and ``n_modes`` radiation modes.

    Fermionic emitted particles have mode capacity 1. Bosonic emitted
    particles default to capacity ``n_sites`` (no more quanta than atoms);
    ``capacity`` overrides that.
    """
    stats = _as_stats(stats)
    if not isinstance(n_sites, (int, np.integer)) or not 1 <= n_sites <= 16:
        raise ValueError(f"n_sites must be an integer in [1, 16], got {n_sites!r}")
    if not isinstance(n_modes, (int, np.integer)) or not 0 <= n_modes <= n_sites:
        raise ValueError(f"n_modes must be an integer in [0, n_sites], got {n_modes!r}")
    if stats.fermionic:
        if capacity not in (None, 1):
            raise ValueError("fermionic radiation modes have capacity 1")
        cap = 1
    else:
        cap = n_sites if capacity is None else int(capacity)
        if cap < 1:
            raise ValueError(f"mode capacity must be >= 1, got {cap}")
    capacities = (cap,) * n_modes
    dim = (1 << n_sites) * (cap + 1) ** n_modes
    if dim > BASIS_MAX_DIM:
        raise CapacityError(f"basis dimension {dim} exceeds cap {BASIS_MAX_DIM}")
    return BasisDescriptor(int(n_sites), int(n_modes), stats, capacities)


def _check_site(basis: BasisDescriptor, i: int):
    if not 0 <= i < basis.n_sites:
        raise IndexError(f"site index {i} out of range for N={basis.n_sites}")


def _fermion_parity_below(basis: BasisDescriptor, i: int) -> np.ndarray:
    """Number of site fermions on sites ``< i`` (all sites for ``i = N``)."""
    count = np.zeros(basis.dim, dtype=np.int64)
    for k in range(i):
        count += basis.site_bit(k)
    if basis.stats.daughter is Statistics.FERMION:
        return count
    # parent is the fermion: count parents instead of daughters
    return i - count


def identity(basis: BasisDescriptor) -> sp.csr_matrix:
    return sp.identity(basis.dim, dtype=complex, format="csr")


def site_jump_operator(basis: BasisDescriptor, i: int) -> sp.csr_matrix:
    """Emission operator on site ``i``: flips parent ``|e>`` to daughter ``|g>``.

    For a fermionic daughter this is ``f_i^+ b_i``; for a fermionic parent it
    is ``b_i^+ f_i`` (the adjoint of ``f_i^+ b_i`` in that case). Both carry the
    Jordan-Wigner sign of the site fermions on lower sites, so distinct sites
    anticommute. For the ``bb`` reference it is the commuting spin lowering
    operator. Acts as identity on radiation modes.
    """
    _check_site(basis, i)
    bit = basis.site_bit(i)
    cols = np.flatnonzero(bit == 0)
    rows = cols + (1 << (basis.n_sites - 1 - i)) * basis.mode_dim
    if basis.stats.fermionic:
        parity = _fermion_parity_below(basis, i)[cols]
        vals = np.where(parity % 2, -1.0, 1.0).astype(complex)
    else:
        vals = np.ones(cols.size, dtype=complex)
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))


def site_number_operator(basis: BasisDescriptor, i: int) -> sp.csr_matrix:
    """Projector onto a parent atom at site ``i`` (``c_i^+ c_i``)."""
    _check_site(basis, i)
    return sp.diags((1 - basis.site_bit(i)).astype(complex), format="csr")


def excitation_number_operator(basis: BasisDescriptor) -> sp.csr_matrix:
    """``N_e``: number of parent atoms."""
    return sp.diags(basis.excitations.astype(complex), format="csr")


def mode_annihilation_operator(basis: BasisDescriptor, m: int = 0) -> sp.csr_matrix:
    """Annihilation operator of radiation mode ``m``.

    Fermionic modes sit after all sites in the Jordan-Wigner ordering and
    anticommute with every site emission operator.
    """
    if not 0 <= m < basis.n_modes:
        raise IndexError(f"mode index {m} out of range for M={basis.n_modes}")
    occ = basis.mode_occupations
    cols = np.flatnonzero(occ[:, m] > 0)
    stride = int(np.prod([c + 1 for c in basis.capacities[m + 1:]], dtype=np.int64))
    rows = cols - stride
    if basis.stats.fermionic:
        parity = _fermion_parity_below(basis, basis.n_sites)[cols] + occ[cols, :m].sum(axis=1)
        vals = np.where(parity % 2, -1.0, 1.0).astype(complex)
    else:
        vals = np.sqrt(occ[cols, m]).astype(complex)
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))


def mode_number_operator(basis: BasisDescriptor, m: int = 0) -> sp.csr_matrix:
    if not 0 <= m < basis.n_modes:
        raise IndexError(f"mode index {m} out of range for M={basis.n_modes}")
    return sp.diags(basis.mode_occupations[:, m].astype(complex), format="csr")


def basis_state(basis: BasisDescriptor, bits, occupations=()) -> np.ndarray:
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index(bits, occupations)] = 1.0
    return psi


def product_superposition_state(basis: BasisDescriptor, phases) -> np.ndarray:
    """``prod_i (|g> + e^{i a_i}|e>)/sqrt(2)`` with every radiation mode empty."""
    phases = np.asarray(phases, dtype=float).ravel()
    if phases.size != basis.n_sites:
        raise ValueError(f"expected {basis.n_sites} phases, got {phases.size}")
    site_amp = np.ones(basis.site_dim, dtype=complex)
    configs = np.arange(basis.site_dim)
    for i, alpha in enumerate(phases):
        parent = ((configs >> (basis.n_sites - 1 - i)) & 1) == 0
        site_amp = np.where(parent, site_amp * np.exp(1j * alpha), site_amp)
    site_amp /= np.sqrt(basis.site_dim)
    psi = np.zeros(basis.dim, dtype=complex)
    psi[configs * basis.mode_dim] = site_amp
    return psi


def apply(op, psi: np.ndarray) -> np.ndarray:
    """Unnormalised ``op @ psi`` with a dimension check."""
    psi = np.asarray(psi)
    if op.shape[1] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: operator {op.shape} vs state {psi.shape}")
    return op @ psi


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a
