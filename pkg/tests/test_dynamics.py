import math
import warnings

import numpy as np
import pytest

from fermidicke.collective import classify_states, collective_jump
from fermidicke.dynamics import (
    IntegrationError,
    LindbladGenerator,
    ModelParams,
    MomentState,
    Trajectory,
    adiabatic_matrix,
    analytic_n0,
    cavity_basis,
    dephasing_decay_rates,
    emission_count,
    evolve_density_matrix,
    evolve_moments,
    fit_decay_rate,
    fit_rabi_frequency,
    hamiltonian,
    initial_state,
    jump_operators,
    lindblad_rhs,
    moment_rhs_cavity,
    moment_rhs_dephasing,
    regime_classify,
)
from fermidicke.hilbert import build_basis, mode_annihilation_operator


def random_density(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(g=-1, n_atoms=2)
    with pytest.raises(ValueError):
        ModelParams(g=1, n_atoms=0)
    p = ModelParams(g=0.5, n_atoms=4, kappa=2.0)
    assert p.collective_coupling == pytest.approx(1.0)
    assert p.gamma0 == pytest.approx(0.5)
    assert p.collective_rate == pytest.approx(2.0)
    with pytest.raises(ValueError):
        _ = ModelParams(g=1, n_atoms=2).gamma0


@pytest.mark.parametrize("stats", ["bf", "fb"])
def test_hamiltonian_couples_bright_to_dark_with_collective_strength(stats):
    params = ModelParams(g=0.7, n_atoms=3, stats=stats)
    basis = cavity_basis(params)
    H = hamiltonian(basis, params).toarray()
    assert np.allclose(H, H.conj().T)
    atoms = build_basis(3, 0, stats)
    L = collective_jump(atoms)
    cls = classify_states(L, atoms)
    nu = mode_annihilation_operator(basis, 0).toarray()
    for bi, di in cls.pairs:
        bright0 = np.kron(cls.bright[:, bi], [1.0, 0.0])
        dark1 = nu.conj().T @ np.kron(cls.dark[:, di], [1.0, 0.0])
        assert np.vdot(dark1, H @ bright0) == pytest.approx(0.7 * math.sqrt(3), abs=1e-12)


def test_generator_matches_reference_rhs():
    params = ModelParams(g=1.0, n_atoms=2, kappa=0.8, kappa_phi=0.3)
    basis = cavity_basis(params)
    H, jumps = hamiltonian(basis, params), jump_operators(basis, params)
    rho = random_density(basis.dim, 3)
    fast = LindbladGenerator(H, jumps)(rho)
    ref = lindblad_rhs(rho, H, jumps)
    assert np.allclose(fast, ref, atol=1e-13)
    assert abs(np.trace(fast)) < 1e-13
    assert np.allclose(fast, fast.conj().T, atol=1e-14)


def test_moment_state_of_initial_states():
    basis = cavity_basis(ModelParams(g=1.0, n_atoms=3))
    m = MomentState.from_state(initial_state(basis, "all-parent"), basis)
    assert m.as_array() == pytest.approx([1.0, 0.0, 0.0, 0.0, 1.0])
    m = MomentState.from_state(initial_state(basis, "single-bright"), basis)
    assert m.n_C == pytest.approx(1.0) and m.n_bar == pytest.approx(1 / 3)
    m = MomentState.from_state(initial_state(basis, "all-daughter"), basis)
    assert m.as_array() == pytest.approx(np.zeros(5))


def test_lossless_second_derivative_identity():
    # d^2/dt^2 (n_C - n_nu) = -4 g^2 N (n_C - n_nu) without loss
    params = ModelParams(g=0.6, n_atoms=5)
    m = np.array([0.7, 0.1, 0.05, 0.2])
    d1 = moment_rhs_cavity(m, params)
    d2 = moment_rhs_cavity(d1, params)
    assert d2[0] - d2[1] == pytest.approx(-4 * 0.36 * 5 * (m[0] - m[1]))


def test_dephasing_moments_reduce_without_dephasing():
    params = ModelParams(g=1.0, n_atoms=3, kappa=0.4)
    m = np.array([0.6, 0.2, 0.1, -0.3, 0.5])
    assert moment_rhs_dephasing(m, params)[:4] == pytest.approx(moment_rhs_cavity(m, params))


def test_lossless_density_matrix_small():
    params = ModelParams(g=1.0, n_atoms=2)
    basis = cavity_basis(params)
    t = np.linspace(0, 3, 31)
    traj = evolve_density_matrix(initial_state(basis), params, t)
    assert np.abs(traj.n_C - np.cos(math.sqrt(2) * t) ** 2).max() < 1e-8
    assert traj.diagnostics["min_eigenvalue"] > -1e-10
    assert traj.diagnostics["max_hermiticity_residual"] < 1e-12


def test_emission_conservation_with_dephasing():
    # N n_bar + n_nu + emitted is conserved by the moment equations
    params = ModelParams(g=1.0, n_atoms=4, kappa=3.0, kappa_phi=0.5)
    t = np.linspace(0, 300, 601)
    traj = evolve_moments([1, 0, 0, 0, 1], params, t)
    total = 4 * traj.n_bar + traj.n_nu + traj.emitted
    assert np.abs(total - 4).max() < 1e-6
    assert traj.emitted[-1] == pytest.approx(4.0, abs=1e-3)


def test_moments_match_density_matrix_with_dephasing():
    params = ModelParams(g=1.0, n_atoms=3, kappa=2.0, kappa_phi=0.7)
    basis = cavity_basis(params)
    t = np.linspace(0, 6, 61)
    dm = evolve_density_matrix(initial_state(basis), params, t)
    mom = evolve_moments(MomentState.from_state(initial_state(basis), basis), params, t)
    for name in ("n_C", "n_nu", "n_bar", "emitted", "r", "u"):
        assert np.abs(getattr(dm, name) - getattr(mom, name)).max() < 1e-7, name


def test_moments_reject_bosonic_and_bad_input():
    with pytest.raises(ValueError):
        evolve_moments([1, 0, 0, 0], ModelParams(g=1, n_atoms=2, stats="bb"), [0, 1])
    with pytest.raises(ValueError):
        evolve_moments([1, 0, 0], ModelParams(g=1, n_atoms=2), [0, 1])
    with pytest.raises(ValueError):
        evolve_moments([1, 0, 0, 0], ModelParams(g=1, n_atoms=2), [0])
    with pytest.raises(ValueError):
        Trajectory(t=[0, 0], n_C=[1, 1], n_nu=[0, 0], n_bar=[1, 1], emitted=[0, 0])


def test_stiff_auto_switch():
    params = ModelParams(g=1.0, n_atoms=4, kappa=400.0, kappa_phi=1.0)
    traj = evolve_moments([1, 0, 0, 0], params, np.linspace(0, 100, 11))
    assert traj.diagnostics["method"] == "BDF"


def test_integration_failure_is_reported(monkeypatch):
    import types

    import fermidicke.dynamics as dyn

    monkeypatch.setattr(dyn, "solve_ivp", lambda *a, **k: types.SimpleNamespace(success=False, message="step size too small"))
    params = ModelParams(g=1.0, n_atoms=2, kappa=1.0)
    with pytest.raises(IntegrationError):
        evolve_moments([1, 0, 0, 0], params, [0, 1])
    with pytest.raises(IntegrationError):
        evolve_density_matrix(initial_state(cavity_basis(params)), params, [0, 1])


def test_dephasing_rates_frozen_example():
    # N=100, gamma0=0.1, kappa_phi=1; oracle evaluated in 40-digit decimal arithmetic
    kappa = 40.0
    g = math.sqrt(0.1 * kappa / 4)
    rates = dephasing_decay_rates(ModelParams(g=g, n_atoms=100, kappa=kappa, kappa_phi=1.0))
    assert rates.lam_plus == pytest.approx(-0.00909843468306199503873729513750856895, rel=1e-12)
    assert rates.lam_minus == pytest.approx(-10.99090156531693800496126270486249143105, rel=1e-12)
    assert rates.regime == "weak_dephasing"
    assert rates.limits == pytest.approx((0.01, 10.0))


@pytest.mark.parametrize("kphi", [0.01, 1.0, 50.0, 1e4])
def test_adiabatic_eigenvalues_match_closed_form(kphi):
    params = ModelParams(g=0.5, n_atoms=6, kappa=10.0, kappa_phi=kphi)
    eig = np.sort(np.linalg.eigvals(adiabatic_matrix(params)).real)
    rates = dephasing_decay_rates(params)
    assert eig == pytest.approx([rates.lam_minus, rates.lam_plus], rel=1e-12)


def test_regime_labels():
    assert str(regime_classify(ModelParams(g=1, n_atoms=4))) == "lossless/no_dephasing"
    assert regime_classify(ModelParams(g=1, n_atoms=4, kappa=0.4)).cavity == "weak_damping"
    assert regime_classify(ModelParams(g=1, n_atoms=4, kappa=40)).cavity == "bad_cavity"
    mid = regime_classify(ModelParams(g=1, n_atoms=4, kappa=5))
    assert "intermediate_cavity" in mid.flags
    deph = regime_classify(ModelParams(g=1, n_atoms=4, kappa=40, kappa_phi=1000))
    assert deph.dephasing == "strong_dephasing" and not deph.flags


def test_analytic_forms():
    p = ModelParams(g=1, n_atoms=4, kappa=0.2)
    t = np.linspace(0, 3, 7)
    assert analytic_n0("weak_damping", p, 0.0) == pytest.approx(1.0)
    with pytest.warns(UserWarning):
        analytic_n0("lossless", p, t)
    with pytest.warns(UserWarning):
        analytic_n0("bad_cavity", p, t)
    with pytest.raises(ValueError):
        analytic_n0("nope", p, t)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert analytic_n0("bad_cavity", ModelParams(g=0.1, n_atoms=4, kappa=10), 1.0) == pytest.approx(math.exp(-0.016))


def test_fits_on_synthetic_data():
    t = np.linspace(0, 10, 1001)
    assert fit_decay_rate(t, 3 * np.exp(-0.7 * t)) == pytest.approx(0.7, rel=1e-10)
    assert math.isnan(fit_decay_rate(t, np.zeros_like(t)))
    assert fit_rabi_frequency(t, np.cos(1.3 * t) ** 2) == pytest.approx(1.3, rel=1e-4)


def test_emission_count_warns_without_loss():
    params = ModelParams(g=1, n_atoms=2)
    traj = evolve_moments([1, 0, 0, 0], params, [0, 1])
    with pytest.warns(UserWarning):
        assert emission_count(traj)[-1] == 0


def test_trajectory_csv_is_round_trip_exact(tmp_path):
    params = ModelParams(g=1, n_atoms=2, kappa=0.3)
    traj = evolve_moments([1, 0, 0, 0], params, np.linspace(0, 1, 5))
    text = traj.to_csv(tmp_path / "t.csv")
    lines = text.splitlines()
    assert lines[0] == "t,n_C,n_nu,n_bar,emitted"
    values = [float(x) for x in lines[3].split(",")]
    assert values[1] == traj.n_C[2]
    assert (tmp_path / "t.csv").read_text() == text
