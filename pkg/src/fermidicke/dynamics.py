"""Time evolution: full Lindblad master equation, closed moment equations and regime formulas.

The cavity model couples the atoms to one radiation mode ``nu`` with
``H = g sqrt(N) (nu^+ C + C^+ nu)``, cavity loss ``L = sqrt(kappa) nu`` and
optional per-site dephasing ``L_i = sqrt(kappa_phi) n_i``. For fermionic
emission the second moments ``(n_C, n_nu, r, u, n_bar)`` with
``r + i u = <nu C^+>`` obey a closed linear system, so the moment integration
reproduces the density-matrix observables exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .collective import collective_lowering
from .hilbert import (
    BasisDescriptor,
    CapacityError,
    build_basis,
    excitation_number_operator,
    max_dim,
    mode_annihilation_operator,
    site_jump_operator,
    site_number_operator,
)

__all__ = [
    "ModelParams",
    "MomentState",
    "Trajectory",
    "IntegrationError",
    "PositivityError",
    "RegimeLabel",
    "DephasingRates",
    "cavity_basis",
    "hamiltonian",
    "jump_operators",
    "lindblad_rhs",
    "LindbladGenerator",
    "initial_state",
    "evolve_density_matrix",
    "moment_rhs_cavity",
    "moment_rhs_dephasing",
    "moment_matrix",
    "evolve_moments",
    "analytic_n0",
    "dephasing_decay_rates",
    "adiabatic_matrix",
    "adiabatic_2x2_rhs",
    "emission_count",
    "regime_classify",
    "fit_decay_rate",
    "fit_rabi_frequency",
]

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10
POSITIVITY_ABORT = -1e-6
# kappa * t_span above which "auto" switches the moment integration to BDF
STIFF_SPAN = 5e3


class IntegrationError(RuntimeError):
    """The ODE integrator failed (e.g. step-size underflow)."""


class PositivityError(IntegrationError):
    """The density matrix lost positivity beyond the abort threshold."""


@dataclass(frozen=True)
class ModelParams:
    """Atom-cavity parameters. Rates are in inverse time units."""

    g: float
    n_atoms: int
    kappa: float = 0.0
    kappa_phi: float = 0.0
    stats: str = "bf"

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        for name in ("g", "kappa", "kappa_phi"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and non-negative, got {value}")

    @property
    def collective_coupling(self) -> float:
        """``g sqrt(N)``."""
        return self.g * math.sqrt(self.n_atoms)

    @property
    def gamma0(self) -> float:
        """Single-atom decay rate ``4 g^2 / kappa``; undefined without cavity loss."""
        if self.kappa <= 0:
            raise ValueError("gamma0 = 4 g^2 / kappa is undefined for kappa = 0")
        return 4 * self.g**2 / self.kappa

    @property
    def collective_rate(self) -> float:
        """``N gamma0``."""
        return self.n_atoms * self.gamma0

    def replace(self, **changes) -> "ModelParams":
        return ModelParams(**{**asdict(self), **changes})


@dataclass
class MomentState:
    n_C: float
    n_nu: float
    r: float
    u: float
    n_bar: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.n_C, self.n_nu, self.r, self.u, self.n_bar], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "MomentState":
        arr = np.asarray(arr, dtype=float)
        if arr.size == 4:
            return cls(*arr)
        return cls(*arr[:5])

    @classmethod
    def from_density_matrix(cls, rho, basis: BasisDescriptor) -> "MomentState":
        obs = _Observables(basis)
        return cls(*obs.moments(np.asarray(rho)))

    @classmethod
    def from_state(cls, psi, basis: BasisDescriptor) -> "MomentState":
        psi = np.asarray(psi)
        return cls.from_density_matrix(np.outer(psi, psi.conj()), basis)


@dataclass
class Trajectory:
    """Observables on a time grid; ``emitted`` is the cumulative ``int kappa n_nu dt``."""

    t: np.ndarray
    n_C: np.ndarray
    n_nu: np.ndarray
    n_bar: np.ndarray
    emitted: np.ndarray
    r: np.ndarray | None = None
    u: np.ndarray | None = None
    params: ModelParams | None = None
    diagnostics: dict = field(default_factory=dict)

    FIELDS = ("t", "n_C", "n_nu", "n_bar", "emitted")

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        if self.t.size > 1 and np.any(np.diff(self.t) <= 0):
            raise ValueError("trajectory time grid must be strictly increasing")

    def rows(self):
        cols = [getattr(self, name) for name in self.FIELDS]
        return zip(*cols)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.FIELDS)
        for row in self.rows():
            writer.writerow([repr(float(v)) for v in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_dict(self) -> dict:
        out = {name: [float(v) for v in getattr(self, name)] for name in self.FIELDS}
        out["params"] = asdict(self.params) if self.params is not None else None
        return out

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


# ---------------------------------------------------------------------------
# Operators


def cavity_basis(params: ModelParams) -> BasisDescriptor:
    basis = build_basis(params.n_atoms, 1, params.stats)
    if basis.dim > max_dim():
        raise CapacityError(f"basis dimension {basis.dim} exceeds cap {max_dim()} (FERMIDICKE_MAX_DIM)")
    return basis


def hamiltonian(basis: BasisDescriptor, params: ModelParams) -> sp.csr_matrix:
    """``H = g sum_i (nu^+ c_i + c_i^+ nu) = g sqrt(N) (nu^+ C + C^+ nu)``."""
    if basis.n_modes < 1:
        raise ValueError("the Hamiltonian needs a basis with a radiation mode")
    nu = mode_annihilation_operator(basis, 0)
    total = sum(site_jump_operator(basis, i) for i in range(basis.n_sites))
    coupling = nu.conj().T @ total
    return (params.g * (coupling + coupling.conj().T)).tocsr()


def jump_operators(basis: BasisDescriptor, params: ModelParams) -> list[sp.csr_matrix]:
    """Cavity loss ``sqrt(kappa) nu`` plus one dephasing channel per site."""
    jumps = []
    if params.kappa > 0:
        jumps.append((math.sqrt(params.kappa) * mode_annihilation_operator(basis, 0)).tocsr())
    if params.kappa_phi > 0:
        scale = math.sqrt(params.kappa_phi)
        jumps.extend((scale * site_number_operator(basis, i)).tocsr() for i in range(basis.n_sites))
    return jumps


def lindblad_rhs(rho: np.ndarray, H, jumps) -> np.ndarray:
    """Schrodinger-picture generator ``-i[H, rho] + sum_k (L rho L^+ - {L^+ L, rho}/2)``."""
    rho = np.asarray(rho)
    if H.shape != rho.shape:
        raise ValueError(f"dimension mismatch: H {H.shape} vs rho {rho.shape}")
    out = -1j * (H @ rho - (H.T @ rho.T).T)
    for L in jumps:
        if L.shape != rho.shape:
            raise ValueError(f"dimension mismatch: jump {L.shape} vs rho {rho.shape}")
        Ld = L.conj().T
        LdL = Ld @ L
        L_rho = L @ rho
        out = out + (Ld.T @ L_rho.T).T - 0.5 * (LdL @ rho + (LdL.T @ rho.T).T)
    return np.asarray(out)


class LindbladGenerator:
    """Precomputed Lindblad right-hand side for repeated evaluation.

    Uses the effective non-Hermitian ``H_eff = H - i/2 sum L^+ L`` so one
    sparse product gives both the commutator and anticommutator parts.
    Diagonal jumps (dephasing) are applied elementwise.
    """

    def __init__(self, H, jumps):
        self.dim = H.shape[0]
        anti = sp.csr_matrix(H.shape, dtype=complex)
        self.diag_jumps = []
        self.jumps = []
        for L in jumps:
            L = sp.csr_matrix(L)
            anti = anti + L.conj().T @ L
            off = L - sp.diags(L.diagonal())
            off.eliminate_zeros()
            if off.nnz == 0:
                self.diag_jumps.append(L.diagonal())
            else:
                self.jumps.append(L)
        self.h_eff = (sp.csr_matrix(H) - 0.5j * anti).tocsr()
        # sum_k L_k rho L_k^+ for diagonal L_k is an elementwise product
        self.diag_weight = None
        if self.diag_jumps:
            d = np.array(self.diag_jumps)
            self.diag_weight = d.T @ d.conj()

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        # out = B + B^+ keeps the result exactly Hermitian; rho is assumed Hermitian
        half = -1j * (self.h_eff @ rho)
        for L in self.jumps:
            half += 0.5 * (L @ (L @ rho).conj().T)
        if self.diag_weight is not None:
            half += 0.5 * self.diag_weight * rho
        return half + half.conj().T


class _Observables:
    def __init__(self, basis: BasisDescriptor):
        self.basis = basis
        C = collective_lowering(basis)
        self.n_c = (C.conj().T @ C).tocsr()
        self.n_bar = (excitation_number_operator(basis) / basis.n_sites).diagonal().real
        if basis.n_modes:
            nu = mode_annihilation_operator(basis, 0)
            self.n_nu = (nu.conj().T @ nu).diagonal().real
            self.s = (nu @ C.conj().T).tocsr()
        else:
            self.n_nu = np.zeros(basis.dim)
            self.s = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)

    @staticmethod
    def _expect(op, rho) -> complex:
        # tr(op rho) = sum_ij op_ij rho_ji
        coo = op.tocoo()
        return complex(np.sum(coo.data * rho[coo.col, coo.row]))

    def moments(self, rho) -> tuple[float, float, float, float, float]:
        diag = np.real(np.diagonal(rho))
        n_c = self._expect(self.n_c, rho).real
        s = self._expect(self.s, rho)
        return n_c, float(diag @ self.n_nu), s.real, s.imag, float(diag @ self.n_bar)


def initial_state(basis: BasisDescriptor, kind: str = "all-parent", phases=None) -> np.ndarray:
    """Pure initial state with an empty radiation field.

    ``all-parent`` is the collective vacuum (``n_C = 1``); ``single-bright``
    is the one-excitation bright state ``C^+`` applied to all daughters;
    ``product`` uses the per-site ``phases``.
    """
    from .hilbert import product_superposition_state

    psi = np.zeros(basis.dim, dtype=complex)
    if kind == "all-parent":
        psi[basis.index((0,) * basis.n_sites)] = 1.0
    elif kind == "all-daughter":
        psi[basis.index((1,) * basis.n_sites)] = 1.0
    elif kind == "single-bright":
        psi[basis.index((1,) * basis.n_sites)] = 1.0
        psi = collective_lowering(basis).conj().T @ psi
        psi /= np.linalg.norm(psi)
    elif kind == "product":
        if phases is None:
            phases = np.zeros(basis.n_sites)
        psi = product_superposition_state(basis, phases)
    else:
        raise ValueError(f"unknown initial state {kind!r}")
    return psi


def _as_density(rho0, dim) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim == 1:
        rho0 = np.outer(rho0, rho0.conj())
    if rho0.shape != (dim, dim):
        raise ValueError(f"initial state shape {rho0.shape} does not match dimension {dim}")
    return rho0 / np.trace(rho0).real


def _check_grid(t_grid) -> np.ndarray:
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2:
        raise ValueError("time grid needs at least 2 points")
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return t_grid


def evolve_density_matrix(
    rho0,
    params: ModelParams,
    t_grid,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    method: str = "DOP853",
    check_positivity: bool = True,
) -> Trajectory:
    """Integrate the full Lindblad equation and record the observables on ``t_grid``.

    Integration restarts at every grid point after renormalising the trace;
    the trace drift removed, Hermiticity residual and smallest eigenvalue
    are kept in ``diagnostics``. A smallest eigenvalue below ``-1e-6``
    aborts with :class:`PositivityError`.
    """
    t_grid = _check_grid(t_grid)
    basis = cavity_basis(params)
    dim = basis.dim
    rho = _as_density(rho0, dim)
    gen = LindbladGenerator(hamiltonian(basis, params), jump_operators(basis, params))
    obs = _Observables(basis)
    kappa = params.kappa

    def rhs(_t, y):
        r = y[:-1].reshape(dim, dim)
        d = gen(r).ravel()
        emit = kappa * float(np.real(np.diagonal(r) @ obs.n_nu))
        return np.concatenate([d, [emit]])

    n = t_grid.size
    out = np.zeros((n, 5))
    emitted = np.zeros(n)
    min_eig = np.zeros(n)
    herm = np.zeros(n)
    trace_drift = 0.0
    n_steps = 0
    total = 0.0

    def record(k, r):
        out[k] = obs.moments(r)
        emitted[k] = total
        herm[k] = float(np.abs(r - r.conj().T).max())
        if check_positivity:
            min_eig[k] = float(np.linalg.eigvalsh(0.5 * (r + r.conj().T))[0])
            if min_eig[k] < POSITIVITY_ABORT:
                raise PositivityError(
                    f"density matrix min eigenvalue {min_eig[k]:.3e} at t={t_grid[k]:.6g}"
                )

    record(0, rho)
    for k in range(1, n):
        y0 = np.concatenate([rho.ravel(), [0.0]])
        sol = solve_ivp(rhs, (t_grid[k - 1], t_grid[k]), y0, method=method, rtol=rtol, atol=atol)
        if not sol.success:
            raise IntegrationError(f"Lindblad integration failed near t={t_grid[k - 1]:.6g}: {sol.message}")
        n_steps += sol.t.size - 1
        y = sol.y[:, -1]
        rho = y[:-1].reshape(dim, dim)
        total += float(np.real(y[-1]))
        tr = np.trace(rho).real
        trace_drift = max(trace_drift, abs(tr - 1.0))
        rho = rho / tr
        record(k, rho)

    return Trajectory(
        t=t_grid,
        n_C=out[:, 0],
        n_nu=out[:, 1],
        r=out[:, 2],
        u=out[:, 3],
        n_bar=out[:, 4],
        emitted=emitted,
        params=params,
        diagnostics={
            "engine": "density",
            "dim": dim,
            "steps": n_steps,
            "max_trace_drift": trace_drift,
            "max_hermiticity_residual": float(herm.max()),
            "min_eigenvalue": float(min_eig.min()) if check_positivity else None,
            "final_rho": rho,
        },
    )


# ---------------------------------------------------------------------------
# Moment equations


def moment_rhs_cavity(m, params: ModelParams) -> np.ndarray:
    """Derivative of ``(n_C, n_nu, r, u)`` without dephasing."""
    n_c, n_nu, r, u = np.asarray(m, dtype=float)[:4]
    omega = params.collective_coupling
    kappa = params.kappa
    return np.array(
        [
            -2 * omega * u,
            2 * omega * u - kappa * n_nu,
            -kappa / 2 * r,
            omega * (n_c - n_nu) - kappa / 2 * u,
        ]
    )


def moment_rhs_dephasing(m, params: ModelParams) -> np.ndarray:
    """Derivative of ``(n_C, n_nu, r, u, n_bar)`` with per-site dephasing."""
    n_c, n_nu, r, u, n_bar = np.asarray(m, dtype=float)[:5]
    omega = params.collective_coupling
    kappa, kphi = params.kappa, params.kappa_phi
    damp = (kappa + kphi) / 2
    return np.array(
        [
            -2 * omega * u - kphi * (n_c - n_bar),
            2 * omega * u - kappa * n_nu,
            -damp * r,
            omega * (n_c - n_nu) - damp * u,
            -2 * omega / params.n_atoms * u,
        ]
    )


def moment_matrix(params: ModelParams) -> np.ndarray:
    """Matrix ``A`` of the linear system ``dm/dt = A m`` for the 5 moments."""
    return np.column_stack([moment_rhs_dephasing(e, params) for e in np.eye(5)])


def _moment_method(params: ModelParams, t_grid, method: str) -> str:
    if method != "auto":
        return method
    span = t_grid[-1] - t_grid[0]
    fast = params.kappa + params.kappa_phi + params.collective_coupling
    return "BDF" if fast * span > STIFF_SPAN else "DOP853"


def evolve_moments(
    m0,
    params: ModelParams,
    t_grid,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    method: str = "auto",
) -> Trajectory:
    """Integrate the closed moment equations (plus cumulative emission).

    ``m0`` is a :class:`MomentState` or an array of 4 or 5 moments (``n_bar``
    defaults to ``n_C`` when omitted). ``method="auto"`` uses DOP853 and falls
    back to implicit BDF when ``(kappa + kappa_phi + g sqrt(N)) * t_span``
    exceeds a stiffness threshold.
    """
    if not isinstance(params.stats, str) or params.stats not in ("bf", "fb"):
        raise ValueError("the moment equations hold for fermionic emission only (stats bf or fb)")
    t_grid = _check_grid(t_grid)
    if isinstance(m0, MomentState):
        y0 = m0.as_array()
    else:
        y0 = np.asarray(m0, dtype=float).ravel()
        if y0.size == 4:
            y0 = np.append(y0, y0[0])
        if y0.size != 5:
            raise ValueError(f"expected 4 or 5 initial moments, got {y0.size}")
    A = np.zeros((6, 6))
    A[:5, :5] = moment_matrix(params)
    A[5, 1] = params.kappa
    method = _moment_method(params, t_grid, method)
    kwargs = {"jac": A} if method in ("BDF", "Radau", "LSODA") else {}
    # restart at each grid point rather than using dense output; the DOP853
    # interpolant alone costs ~1e-7 on the small, fast n_nu component
    y = np.zeros((6, t_grid.size))
    y[:, 0] = np.append(y0, 0.0)
    nfev = 0
    for k in range(1, t_grid.size):
        sol = solve_ivp(
            lambda _t, v: A @ v,
            (t_grid[k - 1], t_grid[k]),
            y[:, k - 1],
            method=method,
            rtol=rtol,
            atol=atol,
            **kwargs,
        )
        if not sol.success:
            raise IntegrationError(f"moment integration failed near t={t_grid[k - 1]:.6g}: {sol.message}")
        nfev += int(sol.nfev)
        y[:, k] = sol.y[:, -1]
    lo, hi = float(y[[0, 1, 4]].min()), float(y[[0, 1, 4]].max())
    slack = max(1e-9, 100 * atol)
    if lo < -slack or hi > 1 + slack:
        warnings.warn(f"moment populations left [0, 1]: range [{lo:.3e}, {hi:.3e}]", RuntimeWarning)
    return Trajectory(
        t=t_grid,
        n_C=y[0],
        n_nu=y[1],
        r=y[2],
        u=y[3],
        n_bar=y[4],
        emitted=y[5],
        params=params,
        diagnostics={"engine": "moments", "method": method, "nfev": nfev},
    )


# ---------------------------------------------------------------------------
# Closed forms and regimes


def analytic_n0(regime: str, params: ModelParams, t):
    """Bright-mode population from the regime's closed form, starting at ``n_C = 1``.

    ``lossless``: ``cos^2(g sqrt(N) t)``. ``weak_damping``:
    ``e^{-kappa t/2} (1 + cos 2Wt + kappa sin 2Wt / 4W) / 2`` with ``W = g sqrt(N)``.
    ``bad_cavity``: ``exp(-N gamma0 t)``. A :class:`UserWarning` flags
    parameters outside the regime's validity.
    """
    t = np.asarray(t, dtype=float)
    omega = params.collective_coupling
    kappa = params.kappa
    if regime == "lossless":
        if kappa > 0:
            warnings.warn(f"lossless form requested with kappa={kappa} > 0", UserWarning)
        return np.cos(omega * t) ** 2
    if regime == "weak_damping":
        if kappa >= omega:
            warnings.warn(f"weak-damping form requested with kappa={kappa} >= g sqrt(N)={omega}", UserWarning)
        x = 2 * omega * t
        corr = kappa * np.sin(x) / (4 * omega) if omega > 0 else 0.0
        return np.exp(-kappa * t / 2) * (1 + np.cos(x) + corr) / 2
    if regime == "bad_cavity":
        if kappa < 10 * omega:
            warnings.warn(f"bad-cavity form requested with kappa={kappa} < 10 g sqrt(N)={10 * omega}", UserWarning)
        return np.exp(-params.collective_rate * t)
    raise ValueError(f"unknown regime {regime!r}")


class DephasingRates(NamedTuple):
    lam_plus: float
    lam_minus: float
    regime: str
    limits: tuple[float, float]


def adiabatic_matrix(params: ModelParams) -> np.ndarray:
    """Linear generator of ``(n_C, x = n_C - n_bar)`` after eliminating the cavity."""
    ng0 = params.collective_rate
    kphi = params.kappa_phi
    return np.array([[-ng0, -kphi], [-ng0 * (1 - 1 / params.n_atoms), -kphi]])


def adiabatic_2x2_rhs(state, params: ModelParams) -> np.ndarray:
    return adiabatic_matrix(params) @ np.asarray(state, dtype=float)


def dephasing_decay_rates(params: ModelParams) -> DephasingRates:
    """Eigenvalues ``lambda_+ >= lambda_-`` of the adiabatic 2x2 system.

    ``limits`` holds the asymptotic decay rates: ``(kappa_phi/N, N gamma0)``
    for weak dephasing (``kappa_phi <= N gamma0``) and ``(kappa_phi, gamma0)``
    for strong dephasing.
    """
    gamma0 = params.gamma0
    ng0 = params.collective_rate
    kphi = params.kappa_phi
    total = ng0 + kphi
    disc = math.sqrt(max(total**2 - 4 * gamma0 * kphi, 0.0))
    lam_plus = -total / 2 + disc / 2
    lam_minus = -total / 2 - disc / 2
    if kphi <= ng0:
        return DephasingRates(lam_plus, lam_minus, "weak_dephasing", (kphi / params.n_atoms, ng0))
    return DephasingRates(lam_plus, lam_minus, "strong_dephasing", (kphi, gamma0))


def emission_count(trajectory: Trajectory) -> np.ndarray:
    """Expected number of emitted quanta versus time."""
    if trajectory.params is not None and trajectory.params.kappa <= 0:
        warnings.warn("no cavity loss: nothing leaves the system", UserWarning)
    return np.asarray(trajectory.emitted)


@dataclass(frozen=True)
class RegimeLabel:
    cavity: str
    dephasing: str
    flags: tuple[str, ...] = ()

    def __str__(self):
        return f"{self.cavity}/{self.dephasing}"


def regime_classify(params: ModelParams) -> RegimeLabel:
    """Label the cavity and dephasing regimes.

    Cavity: ``lossless`` at ``kappa = 0``, ``weak_damping`` for
    ``kappa < g sqrt(N)``, ``bad_cavity`` for ``kappa >= 10 g sqrt(N)``; in
    between the label goes to the nearer threshold on a log scale and a
    flag is raised. Dephasing splits at ``kappa_phi = N gamma0`` and is
    flagged within a factor 10 of the split.
    """
    flags = []
    omega = params.collective_coupling
    kappa = params.kappa
    if kappa == 0:
        cavity = "lossless"
    elif kappa < omega:
        cavity = "weak_damping"
    elif kappa >= 10 * omega:
        cavity = "bad_cavity"
    else:
        cavity = "bad_cavity" if kappa >= math.sqrt(10) * omega else "weak_damping"
        flags.append("intermediate_cavity")

    kphi = params.kappa_phi
    if kphi == 0:
        dephasing = "no_dephasing"
    else:
        # without loss gamma0 is undefined; compare with the Rabi coupling
        scale = params.collective_rate if kappa > 0 else omega
        if kappa == 0:
            flags.append("dephasing_scale_from_coupling")
        dephasing = "weak_dephasing" if kphi < scale else "strong_dephasing"
        if 0.1 * scale < kphi < 10 * scale:
            flags.append("intermediate_dephasing")
    return RegimeLabel(cavity, dephasing, tuple(flags))


# ---------------------------------------------------------------------------
# Fitting


def fit_decay_rate(t, y, fraction: float = 0.5, floor: float = 1e-300) -> float:
    """Decay rate from a log-linear least-squares fit over the tail of ``y(t)``.

    Uses the last ``fraction`` of the samples; non-positive samples are
    dropped. Returns ``nan`` with fewer than two usable points.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    start = int(t.size * (1 - fraction))
    tt, yy = t[start:], y[start:]
    keep = yy > floor
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(tt[keep], np.log(yy[keep]), 1)
    return float(-slope)


def fit_rabi_frequency(t, n_c) -> float:
    """Collective Rabi frequency ``W`` from ``n_C = cos^2(W t)``.

    Crossings of ``n_C = 1/2`` are spaced by ``pi / (2 W)``; their times are
    located by linear interpolation and fitted against their index.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(n_c, dtype=float) - 0.5
    idx = np.flatnonzero(np.sign(x[:-1]) * np.sign(x[1:]) < 0)
    if idx.size < 2:
        return float("nan")
    crossings = t[idx] - x[idx] * (t[idx + 1] - t[idx]) / (x[idx + 1] - x[idx])
    spacing, _ = np.polyfit(np.arange(crossings.size), crossings, 1)
    return float(np.pi / (2 * spacing))
