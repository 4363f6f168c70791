"""Closed-form emission rates of product superposition states.

These are the oracles the numeric engine is checked against. Phases enter as
``(|g> + e^{i a_j}|e>)/sqrt(2)`` on site ``j``; a uniform nearest-neighbour
phase difference ``phi`` means ``a_j = j * phi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import _as_stats

__all__ = [
    "RateParams",
    "uniform_phases",
    "rate_fermionic_product_state",
    "rate_fermion_parent_product_state",
    "rate_bosonic_product_state",
    "correlation_element",
    "correlation_matrix",
    "rate_closed_form",
    "rate_numeric",
    "max_rate_bound",
]


@dataclass(frozen=True)
class RateParams:
    n_atoms: int
    gamma0: float = 1.0
    phi: float = 0.0
    phases: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if self.phases is not None and len(self.phases) != self.n_atoms:
            raise ValueError(f"expected {self.n_atoms} phases, got {len(self.phases)}")

    def site_phases(self) -> np.ndarray:
        if self.phases is not None:
            return np.asarray(self.phases, dtype=float)
        return uniform_phases(self.n_atoms, self.phi)


def uniform_phases(n_atoms: int, phi: float) -> np.ndarray:
    return phi * np.arange(n_atoms)


def rate_fermionic_product_state(params: RateParams) -> float:
    """Boson parent, fermion daughter: ``gamma0 ((N-1)/2 (1 - cos phi) + 1/2)``."""
    n = params.n_atoms
    return params.gamma0 * ((n - 1) / 2 * (1 - np.cos(params.phi)) + 0.5)


def rate_fermion_parent_product_state(params: RateParams) -> float:
    """Fermion parent, boson daughter: ``gamma0 ((N-1)/2 (1 + cos phi) + 1/2)``."""
    n = params.n_atoms
    return params.gamma0 * ((n - 1) / 2 * (1 + np.cos(params.phi)) + 0.5)


def rate_bosonic_product_state(n_atoms: int, gamma0: float = 1.0, phi: float = 0.0) -> float:
    """Photonic reference. At ``phi = 0`` this is ``gamma0 N (N+1) / 4``.

    For general ``phi`` the commuting sites give
    ``gamma0 (N/4 + |sum_j e^{i j phi}|^2 / 4)``.
    """
    coherent = abs(np.exp(1j * phi * np.arange(n_atoms)).sum()) ** 2
    return gamma0 * (n_atoms / 4 + coherent / 4)


def correlation_element(i: int, j: int, phases, stats="bf") -> complex:
    """``<c_i^+ c_j>`` in the product superposition state with site phases ``phases``.

    Fermionic daughter: only diagonal and nearest-neighbour elements survive,
    ``1/2`` and ``-e^{i(a_j - a_i)}/4``; a fermionic parent flips the sign of
    the neighbour term. Commuting (``bb``) sites give ``e^{i(a_j - a_i)}/4`` for
    every ``i != j``.
    """
    stats = _as_stats(stats)
    phases = np.asarray(phases, dtype=float)
    n = phases.size
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"site indices ({i}, {j}) out of range for N={n}")
    if i == j:
        return 0.5 + 0j
    phase = np.exp(1j * (phases[j] - phases[i])) / 4
    if not stats.fermionic:
        return complex(phase)
    if abs(i - j) != 1:
        return 0j
    sign = -1.0 if stats.code == "bf" else 1.0
    return complex(sign * phase)


def correlation_matrix(phases, stats="bf") -> np.ndarray:
    phases = np.asarray(phases, dtype=float)
    n = phases.size
    return np.array([[correlation_element(i, j, phases, stats) for j in range(n)] for i in range(n)])


def rate_closed_form(phases, gamma0: float = 1.0, stats="bf") -> float:
    """``gamma0 sum_ij <c_i^+ c_j>`` from the closed-form correlation elements."""
    return float(np.real(gamma0 * correlation_matrix(phases, stats).sum()))


def rate_numeric(psi: np.ndarray, L) -> float:
    """Brute-force rate ``<psi|L^+ L|psi>`` for a normalised state."""
    psi = np.asarray(psi)
    if L.shape[1] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: operator {L.shape} vs state {psi.shape}")
    out = L @ psi
    return float(np.real(np.vdot(out, out)))


def max_rate_bound(n_atoms: int, gamma0: float = 1.0) -> float:
    """Fastest possible fermionic collective emission rate, ``N gamma0``."""
    return n_atoms * gamma0
