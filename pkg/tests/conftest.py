"""Shared oracles for the test suite.

The Hamiltonian builders here use explicit Kronecker products — the slow,
obvious construction — precisely so they share no code with the bit-mask
assembly in magnonchain.dynamics.  Basis convention matches the package:
index 0 is spin down, site 1 is the least significant bit, so the operator
for site s sits between identities of dimension 2^(n-s) and 2^(s-1).
"""

import numpy as np
import pytest

# Pauli matrices in the (|down>, |up>) ordering
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SZ = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
SPLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)   # |up><down|
SMINUS = SPLUS.T.conj()


def op_on_site(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator at a 1-based site of an n-site chain."""
    return np.kron(np.eye(2 ** (n - site)), np.kron(op, np.eye(2 ** (site - 1))))


def ising_oracle(J: np.ndarray, field: float, n: int) -> np.ndarray:
    """H = sum_{i<j} J_ij sx_i sx_j + B sum_i sz_i, built term by term."""
    H = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            H += J[i - 1, j - 1] * op_on_site(SX, i, n) @ op_on_site(SX, j, n)
        H += field * op_on_site(SZ, i, n)
    return H


def xy_oracle(J: np.ndarray, n: int) -> np.ndarray:
    """H = sum_{i<j} J_ij (s+_i s-_j + s-_i s+_j), built term by term."""
    H = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            H += J[i - 1, j - 1] * (op_on_site(SPLUS, i, n) @ op_on_site(SMINUS, j, n)
                                    + op_on_site(SMINUS, i, n) @ op_on_site(SPLUS, j, n))
    return H


def random_coupling(n: int, seed: int, scale: float = 100.0) -> np.ndarray:
    """Random symmetric zero-diagonal matrix for oracle comparisons."""
    rng = np.random.default_rng(seed)
    J = rng.normal(size=(n, n)) * scale
    J = 0.5 * (J + J.T)
    np.fill_diagonal(J, 0.0)
    return J


@pytest.fixture
def reference_trap():
    """The reference trap used throughout: (0.219, 2.655, 2.628) MHz, N=7."""
    from magnonchain import ionchain
    trap = ionchain.TrapConfig(n_ions=7, axial_freq=0.219e6,
                               transverse_freq_x=2.655e6, transverse_freq_y=2.628e6,
                               detuning=0.0, transverse_field=0.0)
    return ionchain.with_detuning_above_top(trap, 30e3)


@pytest.fixture
def reference_beam():
    from magnonchain import ionchain
    return ionchain.BeamProfile(peak_rabi=100e3, waist_along_chain=380e-6,
                                waist_transverse=40e-6)
