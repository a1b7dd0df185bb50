"""Full 2^N Hamiltonians, propagation, and sigma-z observables."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from magnonchain import dynamics, ionchain, magnon
from magnonchain.dynamics import QuenchSpec, StateVector

from conftest import SZ, ising_oracle, op_on_site, random_coupling, xy_oracle

J0 = 2 * np.pi * 30.0


def _coupling(values):
    return ionchain.CouplingMatrix(values=values)


# ---------------------------------------------------------------------------
# Hamiltonian assembly against the kron oracle


def test_ising_matrix_matches_kron_oracle():
    n = 5
    J = random_coupling(n, seed=11)
    H = dynamics.build_hamiltonian(_coupling(J), transverse_field=137.0, model="ising")
    np.testing.assert_allclose(H.dense(), ising_oracle(J, 137.0, n), atol=1e-10)


def test_xy_matrix_matches_kron_oracle():
    n = 5
    J = random_coupling(n, seed=12)
    H = dynamics.build_hamiltonian(_coupling(J), model="xy")
    np.testing.assert_allclose(H.dense(), xy_oracle(J, n), atol=1e-10)


def test_xy_ignores_transverse_field():
    J = ionchain.nearest_neighbour_coupling(3, J0)
    a = dynamics.build_hamiltonian(J, transverse_field=999.0, model="xy")
    b = dynamics.build_hamiltonian(J, transverse_field=0.0, model="xy")
    np.testing.assert_array_equal(a.dense(), b.dense())


def test_unknown_model_rejected():
    J = ionchain.nearest_neighbour_coupling(3, J0)
    with pytest.raises(ValueError, match="model"):
        dynamics.build_hamiltonian(J, model="heisenberg")


def test_site_limit_guard():
    J = ionchain.nearest_neighbour_coupling(5, J0)
    with pytest.raises(ValueError, match="limit"):
        dynamics.build_hamiltonian(J, model="xy", max_sites=4)


# ---------------------------------------------------------------------------
# state preparation


def test_local_quench_sets_the_right_basis_state():
    state = dynamics.prepare_state(QuenchSpec(kind="local", flipped_sites=(1, 3)), 4)
    # site 1 -> bit 0, site 3 -> bit 2 -> index 0b101 = 5
    expected = np.zeros(16)
    expected[5] = 1.0
    np.testing.assert_array_equal(state.amplitudes, expected)


def test_global_quench_is_uniform_superposition():
    state = dynamics.prepare_state(QuenchSpec(kind="global"), 3)
    np.testing.assert_allclose(state.amplitudes, np.full(8, 8 ** -0.5), atol=1e-15)


def test_quench_spec_validation():
    with pytest.raises(ValueError):
        QuenchSpec(kind="local")                        # no sites
    with pytest.raises(ValueError):
        QuenchSpec(kind="local", flipped_sites=(2, 2))  # duplicate
    with pytest.raises(ValueError):
        QuenchSpec(kind="global", flipped_sites=(1,))
    with pytest.raises(ValueError):
        QuenchSpec(kind="sudden")


def test_local_quench_site_out_of_range():
    with pytest.raises(ValueError):
        dynamics.prepare_state(QuenchSpec(kind="local", flipped_sites=(9,)), 4)


# ---------------------------------------------------------------------------
# propagation


def test_dense_evolution_matches_direct_expm():
    n = 4
    J = random_coupling(n, seed=21, scale=50.0)
    H = dynamics.build_hamiltonian(_coupling(J), transverse_field=40.0, model="ising")
    psi0 = dynamics.prepare_state(QuenchSpec(kind="global"), n)
    t = 0.013
    traj = dynamics.evolve(psi0, H, np.array([t]), method="dense")
    # oracle: diagonalize the kron-built matrix directly
    w, v = np.linalg.eigh(ising_oracle(J, 40.0, n))
    expected = v @ (np.exp(-1j * w * t) * (v.conj().T @ psi0.amplitudes))
    np.testing.assert_allclose(traj.states[0], expected, atol=1e-10)


def test_krylov_agrees_with_dense():
    n = 5
    J = random_coupling(n, seed=22, scale=80.0)
    H = dynamics.build_hamiltonian(_coupling(J), model="xy")
    psi0 = dynamics.prepare_state(QuenchSpec(kind="local", flipped_sites=(1, 4)), n)
    times = np.linspace(0.0, 0.02, 9)
    dense = dynamics.evolve(psi0, H, times, method="dense")
    krylov = dynamics.evolve(psi0, H, times, method="krylov")
    np.testing.assert_allclose(krylov.states, dense.states, atol=1e-8)


def test_krylov_large_chain_against_magnon_oracle():
    """Above the dense limit the Krylov path is the one actually used;
    check it against the independent single-excitation spectral evolution."""
    n = 13
    J = ionchain.nearest_neighbour_coupling(n, J0)
    H = dynamics.build_hamiltonian(J, model="xy")
    psi0 = dynamics.prepare_state(QuenchSpec(kind="local", flipped_sites=(7,)), n)
    times = np.linspace(0.0, 0.01, 6)
    traj = dynamics.evolve(psi0, H, times)          # auto -> krylov at N=13
    mag_full = np.vstack([dynamics.magnetisation(traj.state(k)) for k in range(len(traj))])
    mag_ref = np.vstack([magnon.magnetisation_single(s)
                         for s in magnon.evolve_single_excitation(J, 7, times)])
    np.testing.assert_allclose(mag_full, mag_ref, atol=1e-8)


def test_evolution_preserves_norm_and_energy():
    n = 5
    J = random_coupling(n, seed=23, scale=60.0)
    H = dynamics.build_hamiltonian(_coupling(J), transverse_field=25.0, model="ising")
    psi0 = dynamics.prepare_state(QuenchSpec(kind="global"), n)
    traj = dynamics.evolve(psi0, H, np.linspace(0, 0.05, 11))
    e0 = H.expectation(psi0.amplitudes)
    for k in range(len(traj)):
        psi = traj.states[k]
        assert np.vdot(psi, psi).real == pytest.approx(1.0, abs=1e-10)
        assert H.expectation(psi) == pytest.approx(e0, abs=1e-7 * max(1.0, abs(e0)))


def test_evolve_rejects_mismatched_sizes():
    J = ionchain.nearest_neighbour_coupling(3, J0)
    H = dynamics.build_hamiltonian(J, model="xy")
    psi = dynamics.prepare_state(QuenchSpec(kind="global"), 4)
    with pytest.raises(ValueError):
        dynamics.evolve(psi, H, np.array([0.0]))


# ---------------------------------------------------------------------------
# observables (kron oracle again)


def test_magnetisation_matches_operator_expectation():
    n = 4
    rng = np.random.default_rng(31)
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    amps /= np.linalg.norm(amps)
    state = StateVector(amplitudes=amps, n_sites=n)
    mag = dynamics.magnetisation(state)
    for s in range(1, n + 1):
        expected = np.vdot(amps, op_on_site(SZ, s, n) @ amps).real
        assert mag[s - 1] == pytest.approx(expected, abs=1e-12)


def test_correlations_match_operator_expectation():
    n = 4
    rng = np.random.default_rng(32)
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    amps /= np.linalg.norm(amps)
    state = StateVector(amplitudes=amps, n_sites=n)
    C = dynamics.two_point_correlations(state)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            zi = op_on_site(SZ, i, n)
            zj = op_on_site(SZ, j, n)
            zz = np.vdot(amps, zi @ zj @ amps).real
            mi = np.vdot(amps, zi @ amps).real
            mj = np.vdot(amps, zj @ amps).real
            assert C[i - 1, j - 1] == pytest.approx(zz - mi * mj, abs=1e-12)


def test_averaged_correlations_by_hand():
    C = np.array([[0.0, 1.0, 2.0],
                  [1.0, 0.0, 4.0],
                  [2.0, 4.0, 0.0]])
    np.testing.assert_allclose(dynamics.averaged_correlations(C), [2.5, 2.0])
    with pytest.raises(ValueError):
        dynamics.averaged_correlations(np.zeros((2, 3)))


def test_sector_weights_of_global_state_are_binomial():
    n = 5
    state = dynamics.prepare_state(QuenchSpec(kind="global"), n)
    weights = dynamics.excitation_sector_weights(state)
    from math import comb
    np.testing.assert_allclose(weights, [comb(n, k) / 2 ** n for k in range(n + 1)],
                               atol=1e-12)


@settings(deadline=None, max_examples=20)
@given(t=st.floats(min_value=0.0, max_value=0.05))
def test_xy_evolution_conserves_excitation_number(t):
    n = 5
    J = ionchain.power_law_coupling(n, 1.3, J0)
    H = dynamics.build_hamiltonian(J, model="xy")
    psi0 = dynamics.prepare_state(QuenchSpec(kind="local", flipped_sites=(2, 4)), n)
    traj = dynamics.evolve(psi0, H, np.array([t]))
    weights = dynamics.excitation_sector_weights(traj.state(0))
    assert weights[2] == pytest.approx(1.0, abs=1e-10)


def test_trajectory_state_round_trip():
    n = 3
    J = ionchain.nearest_neighbour_coupling(n, J0)
    H = dynamics.build_hamiltonian(J, model="xy")
    psi0 = dynamics.prepare_state(QuenchSpec(kind="local", flipped_sites=(2,)), n)
    traj = dynamics.evolve(psi0, H, np.linspace(0, 0.01, 4))
    assert len(traj) == 4
    s = traj.state(2)
    assert s.n_sites == n
    np.testing.assert_array_equal(s.amplitudes, traj.states[2])
