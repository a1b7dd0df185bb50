"""Ion-chain physics: equilibrium positions, transverse modes, and J_ij.

The chain of N ions in a linear Paul trap is characterised by its axial
confinement frequency nu_ax and the two transverse frequencies nu_x, nu_y.
A bichromatic laser field detuned by +-Delta from the spin transition
couples the spins to all 2N transverse motional modes and generates the
effective spin-spin interaction

    J_ij = Omega_i Omega_j (hbar k^2 / 2m) sum_n b_in b_jn / (Delta^2 - nu_n^2)

where Omega_i is the Rabi frequency at ion i, k = 2 pi / lambda the laser
wavevector, b_in the normal-mode vectors, and the sum runs over all 2N
transverse modes of both branches.  With Delta above the highest transverse
mode all J_ij share one sign (anti-ferromagnetic regime) and J_ij decays
approximately as 1/|i-j|^alpha with alpha tunable between 0 and 3.

Unit conventions: dataclass fields carry Hz and meters; coupling matrices
and everything downstream are angular frequencies (rad/s) with hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import constants

#: Mass of a calcium-40 ion in kg (the species used for the reference traps).
MASS_CA40 = 39.9625909 * constants.atomic_mass

#: Wavelength of the S-D quadrupole transition of Ca-40 in meters.
WAVELENGTH_CA40 = 729e-9


class ConvergenceError(RuntimeError):
    """Raised when the equilibrium-position root solve does not converge."""


class ChainUnstableError(ValueError):
    """Raised when a transverse branch has a non-positive mode (zig-zag onset)."""


class ResonanceError(ValueError):
    """Raised when the drive detuning sits too close to a motional mode."""


# ---------------------------------------------------------------------------
# configuration types


@dataclass(frozen=True)
class TrapConfig:
    """Trap, drive and field parameters defining the spin system.

    All frequencies are plain frequencies in Hz.  ``detuning`` is the
    Moelmer-Soerensen symmetric detuning Delta measured from the spin
    transition; the anti-ferromagnetic regime requires it to lie above the
    highest transverse mode (checked when the coupling matrix is built,
    see :func:`detuning_above_top_mode`).  ``transverse_field`` is the
    effective field B of the Ising model.
    """

    n_ions: int
    axial_freq: float
    transverse_freq_x: float
    transverse_freq_y: float
    detuning: float
    transverse_field: float
    ion_mass: float = MASS_CA40
    laser_wavelength: float = WAVELENGTH_CA40

    def __post_init__(self):
        if self.n_ions < 2:
            raise ValueError(f"need at least 2 ions, got {self.n_ions}")
        for name in ("axial_freq", "transverse_freq_x", "transverse_freq_y"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.transverse_freq_x <= self.axial_freq or self.transverse_freq_y <= self.axial_freq:
            raise ValueError("transverse frequencies must exceed the axial frequency "
                             "for a stable linear chain")
        if self.ion_mass <= 0 or self.laser_wavelength <= 0:
            raise ValueError("ion_mass and laser_wavelength must be > 0")
        if self.transverse_field < 0:
            raise ValueError("transverse_field must be >= 0")


@dataclass(frozen=True)
class BeamProfile:
    """Elliptical Gaussian beam addressing the chain from the side.

    ``peak_rabi`` is the Rabi frequency (Hz) of one bichromatic component at
    the beam center; ``waist_along_chain`` (w_par) sets the field-amplitude
    falloff along the chain axis; the transverse waist does not vary across
    the chain and is kept for bookkeeping.  ``center_offset`` displaces the
    beam center from the trap center along the chain.
    """

    peak_rabi: float
    waist_along_chain: float
    waist_transverse: float
    center_offset: float = 0.0

    def __post_init__(self):
        if self.peak_rabi <= 0:
            raise ValueError("peak_rabi must be > 0")
        if self.waist_along_chain <= 0 or self.waist_transverse <= 0:
            raise ValueError("beam waists must be > 0")


@dataclass(frozen=True)
class ModeSpectrum:
    """Transverse normal modes of the ion crystal.

    ``frequencies`` holds all 2N mode frequencies in Hz, x branch first,
    each branch sorted descending (the center-of-mass mode at the bare
    transverse frequency leads its branch).  Column n of ``mode_vectors``
    is the normalized vector b_{.,n}; ``branches`` labels each mode 'x' or
    'y'.  Positions are the equilibrium positions, dimensionless (units of
    the Coulomb length scale) and in meters.
    """

    frequencies: np.ndarray
    mode_vectors: np.ndarray
    branches: tuple[str, ...]
    positions: np.ndarray
    positions_m: np.ndarray

    def __post_init__(self):
        freqs = _readonly(np.asarray(self.frequencies, dtype=float))
        vecs = _readonly(np.asarray(self.mode_vectors, dtype=float))
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "mode_vectors", vecs)
        object.__setattr__(self, "positions", _readonly(np.asarray(self.positions, dtype=float)))
        object.__setattr__(self, "positions_m", _readonly(np.asarray(self.positions_m, dtype=float)))
        n = self.positions.size
        if freqs.shape != (2 * n,) or vecs.shape != (n, 2 * n):
            raise ValueError("inconsistent mode-spectrum shapes")
        if len(self.branches) != 2 * n:
            raise ValueError("need one branch label per mode")

    @property
    def n_ions(self) -> int:
        return self.positions.size

    def branch(self, label: str) -> tuple[np.ndarray, np.ndarray]:
        """Return (frequencies, mode_vectors) of one transverse branch."""
        sel = np.array([b == label for b in self.branches])
        if not sel.any():
            raise ValueError(f"no branch {label!r}")
        return self.frequencies[sel], self.mode_vectors[:, sel]

    @property
    def top_mode_freq(self) -> float:
        """Highest transverse mode frequency (Hz)."""
        return float(self.frequencies.max())


@dataclass(frozen=True)
class CouplingMatrix:
    """Symmetric spin-spin coupling matrix J_ij in rad/s with zero diagonal."""

    values: np.ndarray
    meta: str = "externally supplied"

    def __post_init__(self):
        J = _readonly(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "values", J)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise ValueError(f"coupling matrix must be square, got shape {J.shape}")
        if not np.all(np.isfinite(J)):
            raise ValueError("coupling matrix has non-finite entries")
        scale = max(np.abs(J).max(), 1.0)
        if np.abs(J - J.T).max() > 1e-12 * scale:
            raise ValueError("coupling matrix not symmetric to 1e-12 relative")
        if np.abs(np.diag(J)).max() > 1e-12 * scale:
            raise ValueError("coupling matrix diagonal must be zero")

    @property
    def n_ions(self) -> int:
        return self.values.shape[0]

    @property
    def nn_mean(self) -> float:
        """Mean nearest-neighbour coupling Jbar = (1/(N-1)) sum_i J_{i,i+1} (rad/s)."""
        return float(np.mean(np.diag(self.values, 1)))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# equilibrium positions


def equilibrium_positions(n_ions: int, force_tol: float = 1e-13, max_iter: int = 200) -> np.ndarray:
    """Equilibrium positions of a linear Coulomb chain, dimensionless.

    Positions are expressed in units of the Coulomb length scale
    l = (e^2 / (4 pi eps0 m omega_ax^2))^(1/3) and satisfy the force
    balance u_i = sum_{j<i} (u_i-u_j)^-2 - sum_{j>i} (u_i-u_j)^-2.

    Parameters
    ----------
    n_ions : int
        Number of ions (>= 2).
    force_tol : float
        Convergence threshold on the maximum force residual.
    max_iter : int
        Maximum number of damped Newton iterations.

    Returns
    -------
    ndarray
        Positions sorted ascending, symmetric about 0.
    """
    if n_ions < 2:
        raise ValueError("need at least 2 ions")
    # quasi-uniform starting guess at the known minimum spacing scale
    spacing = 2.018 / n_ions ** 0.559
    u = spacing * (np.arange(1, n_ions + 1) - (n_ions + 1) / 2)
    fmax = np.max(np.abs(_chain_force(u)))
    for iteration in range(max_iter):
        if fmax < force_tol:
            return u
        step = np.linalg.solve(_chain_hessian(u), _chain_force(u))
        lam = 1.0
        while lam > 1e-8:
            trial = u - lam * step
            ftrial = np.max(np.abs(_chain_force(trial)))
            if ftrial < fmax:
                break
            lam /= 2
        u, fmax = u - lam * step, np.max(np.abs(_chain_force(u - lam * step)))
    raise ConvergenceError(
        f"equilibrium positions for n={n_ions} did not converge after "
        f"{max_iter} iterations (residual {fmax:.3e})")


def _chain_force(u: np.ndarray) -> np.ndarray:
    """Gradient of the dimensionless chain potential (zero at equilibrium)."""
    d = u[:, None] - u[None, :]
    np.fill_diagonal(d, np.inf)
    return u - np.sum(np.sign(d) / d ** 2, axis=1)


def _chain_hessian(u: np.ndarray) -> np.ndarray:
    d = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(d, np.inf)
    h = -2.0 / d ** 3
    np.fill_diagonal(h, 1.0 + 2.0 * np.sum(1.0 / d ** 3, axis=1))
    return h


def length_scale(trap: TrapConfig) -> float:
    """Coulomb length scale l = (e^2/(4 pi eps0 m omega_ax^2))^(1/3) in meters."""
    omega_ax = 2 * np.pi * trap.axial_freq
    coulomb = constants.e ** 2 / (4 * np.pi * constants.epsilon_0)
    return (coulomb / (trap.ion_mass * omega_ax ** 2)) ** (1 / 3)


# ---------------------------------------------------------------------------
# transverse normal modes


def transverse_mode_spectrum(trap: TrapConfig) -> ModeSpectrum:
    """Transverse normal modes of both branches for the given trap.

    For each branch the mode matrix (in units of nu_ax^2) is

        A_ii = (nu_t/nu_ax)^2 - sum_{j != i} |u_i-u_j|^-3,
        A_ij = |u_i-u_j|^-3            (i != j),

    whose eigenvalues lambda give mode frequencies nu_n = nu_ax sqrt(lambda).
    The highest mode of each branch is the center-of-mass mode at the bare
    transverse frequency.

    Raises
    ------
    ChainUnstableError
        If any eigenvalue is non-positive (zig-zag transition at these
        parameters).
    """
    u = equilibrium_positions(trap.n_ions)
    d = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(d, np.inf)
    inv_cube = 1.0 / d ** 3

    freqs, vecs, branches = [], [], []
    for label, nu_t in (("x", trap.transverse_freq_x), ("y", trap.transverse_freq_y)):
        A = inv_cube.copy()
        np.fill_diagonal(A, (nu_t / trap.axial_freq) ** 2 - inv_cube.sum(axis=1))
        lam, b = np.linalg.eigh(A)
        if lam[0] <= 0:
            raise ChainUnstableError(
                f"branch {label}: lowest squared mode frequency "
                f"{lam[0]:.4g} (nu_ax^2 units) is not positive; the linear chain "
                f"is unstable (zig-zag) at nu_t/nu_ax = {nu_t / trap.axial_freq:.3f}, "
                f"N = {trap.n_ions}")
        lam, b = lam[::-1], b[:, ::-1]          # descending: COM first
        b = _fix_gauge(b)
        freqs.append(trap.axial_freq * np.sqrt(lam))
        vecs.append(b)
        branches.extend([label] * trap.n_ions)

    return ModeSpectrum(
        frequencies=np.concatenate(freqs),
        mode_vectors=np.hstack(vecs),
        branches=tuple(branches),
        positions=u,
        positions_m=u * length_scale(trap),
    )


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: largest-|entry| component positive."""
    vectors = vectors.copy()
    for n in range(vectors.shape[1]):
        lead = np.argmax(np.abs(vectors[:, n]))
        if vectors[lead, n] < 0:
            vectors[:, n] = -vectors[:, n]
    return vectors


def detuning_above_top_mode(trap: TrapConfig, modes: ModeSpectrum | None = None) -> float:
    """Detuning minus the highest transverse mode frequency, in Hz.

    Positive in the anti-ferromagnetic regime.  Provided because quoted
    detunings are often given relative to the highest transverse mode
    while ``TrapConfig.detuning`` is measured from the spin transition.
    """
    if modes is None:
        modes = transverse_mode_spectrum(trap)
    return trap.detuning - modes.top_mode_freq


def with_detuning_above_top(trap: TrapConfig, gap: float,
                            modes: ModeSpectrum | None = None) -> TrapConfig:
    """Copy of ``trap`` with the detuning placed ``gap`` Hz above the top mode."""
    if modes is None:
        modes = transverse_mode_spectrum(trap)
    return replace(trap, detuning=modes.top_mode_freq + gap)


# ---------------------------------------------------------------------------
# beam profile and coupling matrix


def rabi_profile(beam: BeamProfile, positions_m: np.ndarray) -> np.ndarray:
    """Per-ion Rabi frequencies Omega_i (Hz) along the chain.

    Field-amplitude Gaussian along the chain axis:
    Omega_i = peak_rabi * exp(-(x_i - center_offset)^2 / w_par^2).
    """
    x = np.asarray(positions_m, dtype=float) - beam.center_offset
    return beam.peak_rabi * np.exp(-(x / beam.waist_along_chain) ** 2)


def coupling_matrix(trap: TrapConfig, modes: ModeSpectrum, rabi: np.ndarray,
                    min_mode_gap: float = 1e3) -> CouplingMatrix:
    """Spin-spin coupling matrix J_ij (rad/s) from the 2N-mode sum.

    Parameters
    ----------
    trap : TrapConfig
        Supplies the detuning, mass and wavelength.
    modes : ModeSpectrum
        Transverse modes of both branches.
    rabi : ndarray
        Per-ion Rabi frequencies Omega_i in Hz (see :func:`rabi_profile`).
    min_mode_gap : float
        Minimum allowed |Delta - nu_n| in Hz (default 1 kHz); closer
        approaches raise :class:`ResonanceError`.

    Notes
    -----
    All Hz inputs are converted to angular frequencies here, and the
    recoil prefactor hbar k^2 / 2m is itself a rate, so J comes out in
    rad/s directly.
    """
    omega = 2 * np.pi * np.asarray(rabi, dtype=float)
    if omega.shape != (trap.n_ions,):
        raise ValueError(f"need {trap.n_ions} Rabi frequencies, got shape {omega.shape}")
    gaps = np.abs(trap.detuning - modes.frequencies)
    if gaps.min() < min_mode_gap:
        n_bad = int(np.argmin(gaps))
        raise ResonanceError(
            f"detuning {trap.detuning:.6g} Hz is within {gaps.min():.3g} Hz of mode "
            f"{n_bad} at {modes.frequencies[n_bad]:.6g} Hz (minimum gap {min_mode_gap:.3g} Hz)")

    delta = 2 * np.pi * trap.detuning
    nu = 2 * np.pi * modes.frequencies
    k = 2 * np.pi / trap.laser_wavelength
    recoil = constants.hbar * k ** 2 / (2 * trap.ion_mass)

    weights = 1.0 / (delta ** 2 - nu ** 2)                      # (2N,)
    b = modes.mode_vectors                                      # (N, 2N)
    J = (b * weights) @ b.T
    J *= recoil * np.outer(omega, omega)
    J = 0.5 * (J + J.T)
    np.fill_diagonal(J, 0.0)
    meta = (f"mode-sum couplings: N={trap.n_ions}, detuning={trap.detuning:.6g} Hz "
            f"({detuning_above_top_mode(trap, modes):+.6g} Hz from top mode)")
    return CouplingMatrix(values=J, meta=meta)


def build_coupling_matrix(trap: TrapConfig, beam: BeamProfile,
                          min_mode_gap: float = 1e3) -> CouplingMatrix:
    """Convenience pipeline: modes -> Rabi profile -> coupling matrix."""
    modes = transverse_mode_spectrum(trap)
    rabi = rabi_profile(beam, modes.positions_m)
    return coupling_matrix(trap, modes, rabi, min_mode_gap=min_mode_gap)


def exchange_frequency(J: CouplingMatrix, i: int, j: int) -> float:
    """Full population-oscillation frequency (Hz) of the two-site exchange.

    Under the XY Hamiltonian restricted to sites {i, j} the shared
    excitation oscillates as |a_j(t)|^2 = sin^2(J_ij t), i.e. with period
    pi/|J_ij|.  With J in rad/s the returned frequency is |J_ij|/pi Hz.
    This is the convention to use when converting measured two-ion
    exchange frequencies into matrix entries.
    """
    if i == j:
        raise ValueError("exchange frequency needs two distinct sites")
    _check_site(J.n_ions, i)
    _check_site(J.n_ions, j)
    return abs(J.values[i - 1, j - 1]) / math.pi


def _check_site(n: int, site: int) -> None:
    if not 1 <= site <= n:
        raise ValueError(f"site {site} outside 1..{n}")


# ---------------------------------------------------------------------------
# synthetic coupling matrices


def power_law_coupling(n_ions: int, alpha: float, nn_strength: float) -> CouplingMatrix:
    """Ideal open-chain power law J_ij = nn_strength / |i-j|^alpha (rad/s)."""
    if n_ions < 2:
        raise ValueError("need at least 2 ions")
    d = np.abs(np.arange(n_ions)[:, None] - np.arange(n_ions)[None, :]).astype(float)
    np.fill_diagonal(d, np.inf)
    J = nn_strength / d ** alpha
    np.fill_diagonal(J, 0.0)            # inf**0 == 1, so alpha=0 needs the explicit zero
    return CouplingMatrix(values=J, meta=f"synthetic power law alpha={alpha:g}")


def nearest_neighbour_coupling(n_ions: int, strength: float) -> CouplingMatrix:
    """Uniform nearest-neighbour chain J_{i,i+1} = strength (rad/s)."""
    if n_ions < 2:
        raise ValueError("need at least 2 ions")
    J = np.zeros((n_ions, n_ions))
    idx = np.arange(n_ions - 1)
    J[idx, idx + 1] = J[idx + 1, idx] = strength
    return CouplingMatrix(values=J, meta="synthetic nearest-neighbour chain")
