"""Reduced density matrices, entanglement measures, and simulated tomography.

Two-qubit density matrices use the product basis ordered
(|dd>, |du>, |ud>, |uu>) where the first symbol is the lower site index
and d/u mean spin down/up.  Because index 0 is "down", the Pauli matrices
in this ordering read

    sigma_x = [[0, 1], [1, 0]]
    sigma_y = [[0, 1j], [-1j, 0]]
    sigma_z = [[-1, 0], [0, 1]]

(sigma_y and sigma_z pick up a sign relative to the usual |up>-first
convention so that the algebra sigma_x sigma_y = i sigma_z still holds).

Simulated tomography draws multinomial projection noise with a
counter-based RNG (Philox) keyed by (seed, record stream), so every
measurement record and bootstrap resample has its own reproducible
stream regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import StateVector
from .ionchain import _readonly

#: Pauli matrices in the (|down>, |up>) basis ordering used throughout.
PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex),
    "z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
}

#: Axis order fixing the stream index of each tomography basis.
AXES = ("x", "y", "z")

#: All nine two-qubit measurement bases {x,y,z} x {x,y,z}.
TOMOGRAPHY_BASES = tuple((a, b) for a in AXES for b in AXES)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD (up to noise floor) density matrix.

    ``subsystem`` tags which sites of the chain the matrix describes.
    """

    matrix: np.ndarray
    subsystem: tuple[int, ...]

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", _readonly(rho))
        object.__setattr__(self, "subsystem", tuple(int(s) for s in self.subsystem))
        if rho.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"density matrix must be 2x2 or 4x4, got {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > 1e-10:
            raise ValueError("density matrix not Hermitian to 1e-10")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValueError(f"density matrix trace {np.trace(rho).real!r} != 1")
        if np.linalg.eigvalsh(rho).min() < -1e-8:
            raise ValueError("density matrix has eigenvalue below -1e-8")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class MeasurementRecord:
    """Counts of one two-qubit measurement setting.

    ``counts`` tallies the outcomes (++, +-, -+, --) of measuring the two
    qubits along ``basis``; +/- are the eigenvalues of the chosen Pauli
    operators.  ``seed`` records the RNG seed used to draw the counts
    (None for counts not produced by the sampler).
    """

    basis: tuple[str, str]
    shots: int
    counts: tuple[int, int, int, int]
    seed: int | None = None

    def __post_init__(self):
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(basis) != 2 or any(a not in AXES for a in basis):
            raise ValueError(f"basis must be a pair from {AXES}, got {basis!r}")
        if len(self.counts) != 4 or any(c < 0 for c in self.counts):
            raise ValueError("counts must be 4 non-negative tallies")
        if sum(self.counts) != self.shots:
            raise ValueError(f"counts sum {sum(self.counts)} != shots {self.shots}")


# ---------------------------------------------------------------------------
# exact reductions and measures


def reduced_density_matrix(state: StateVector, sites) -> DensityMatrix:
    """Partial trace of a pure chain state onto one or two sites.

    For a site pair (i, j), i < j, the first factor of the product basis
    is site i (see module docstring for the ordering).
    """
    if np.isscalar(sites):
        sites = (int(sites),)
    sites = tuple(int(s) for s in sites)
    if len(sites) not in (1, 2) or len(set(sites)) != len(sites):
        raise ValueError("sites must be one index or a pair of distinct indices")
    n = state.n_sites
    for s in sites:
        if not 1 <= s <= n:
            raise ValueError(f"site {s} outside 1..{n}")
    sites = tuple(sorted(sites))
    # axis n-1 of the reshaped tensor is site 1 (least significant bit)
    tensor = state.amplitudes.reshape((2,) * n)
    kept_axes = [n - s for s in sites]
    tensor = np.moveaxis(tensor, kept_axes, range(len(sites)))
    flat = tensor.reshape(2 ** len(sites), -1)
    rho = flat @ flat.conj().T
    return DensityMatrix(matrix=rho, subsystem=sites)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy -sum lambda log2 lambda in bits (0 log 0 := 0).

    A single-spin value therefore lies in [0, 1].
    """
    lam = np.linalg.eigvalsh(rho.matrix)
    if lam.min() < -1e-8:
        raise ValueError(f"invalid state: eigenvalue {lam.min():.3e} < -1e-8")
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log2(lam)))


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of
    the eigenvalues of rho (sy x sy) rho* (sy x sy).
    """
    if rho.dim != 4:
        raise ValueError("concurrence is defined for two-qubit states")
    yy = np.kron(PAULI["y"], PAULI["y"])
    R = rho.matrix @ yy @ rho.matrix.conj() @ yy
    lam = np.sqrt(np.clip(np.linalg.eigvals(R).real, 0.0, None))
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def fidelity(rho: DensityMatrix, target: np.ndarray) -> float:
    """Overlap fidelity Tr(rho |psi><psi|) with a pure target state."""
    psi = np.asarray(target, dtype=complex).ravel()
    if psi.size != rho.dim:
        raise ValueError(f"target dimension {psi.size} != {rho.dim}")
    psi = psi / np.linalg.norm(psi)
    return float(np.real(psi.conj() @ rho.matrix @ psi))


# ---------------------------------------------------------------------------
# simulated tomography


def _as_pair_density(rho_or_state) -> np.ndarray:
    if isinstance(rho_or_state, DensityMatrix):
        if rho_or_state.dim != 4:
            raise ValueError("tomography operates on two-qubit states")
        return rho_or_state.matrix
    psi = np.asarray(rho_or_state, dtype=complex).ravel()
    if psi.size != 4:
        raise ValueError("expected a two-qubit pure state or DensityMatrix")
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def measurement_probabilities(rho_or_state, basis: tuple[str, str]) -> np.ndarray:
    """Exact outcome probabilities (++, +-, -+, --) for one basis setting."""
    rho = _as_pair_density(rho_or_state)
    eye = np.eye(2)
    probs = []
    for s1 in (1.0, -1.0):
        proj1 = 0.5 * (eye + s1 * PAULI[basis[0]])
        for s2 in (1.0, -1.0):
            proj2 = 0.5 * (eye + s2 * PAULI[basis[1]])
            probs.append(np.real(np.trace(rho @ np.kron(proj1, proj2))))
    probs = np.clip(np.array(probs), 0.0, None)
    return probs / probs.sum()


def _record_stream(basis: tuple[str, str]) -> int:
    return 3 * AXES.index(basis[0]) + AXES.index(basis[1])


def _rng(seed: int, stream: int) -> np.random.Generator:
    """Counter-based generator with an independent stream per (seed, stream)."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def sample_measurements(rho_or_state, basis: tuple[str, str], shots: int,
                        seed: int) -> MeasurementRecord:
    """Draw multinomial projection noise for one measurement setting.

    Deterministic for a given (seed, basis): each of the nine settings has
    its own RNG stream derived from the seed, so records may be produced
    in any order.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    basis = tuple(basis)
    probs = measurement_probabilities(rho_or_state, basis)
    counts = _rng(seed, _record_stream(basis)).multinomial(shots, probs)
    return MeasurementRecord(basis=basis, shots=shots, counts=tuple(counts), seed=seed)


def simulate_tomography(rho_or_state, shots: int, seed: int) -> list[MeasurementRecord]:
    """Sample all nine basis settings of the two-qubit tomography."""
    return [sample_measurements(rho_or_state, basis, shots, seed)
            for basis in TOMOGRAPHY_BASES]


def tomography_reconstruct(records, subsystem: tuple[int, int] = (1, 2)) -> DensityMatrix:
    """Linear-inversion reconstruction from the nine basis settings.

    The 15 Pauli expectations are estimated from the counts (single-qubit
    expectations are averaged over the three settings that share the
    axis), assembled into rho = (1/4) sum <P x Q> P x Q, and the result is
    projected to the nearest PSD unit-trace matrix (Frobenius norm); see
    :func:`_project_physical`.
    """
    records = list(records)
    by_basis = {}
    for rec in records:
        by_basis[tuple(rec.basis)] = rec
    missing = [b for b in TOMOGRAPHY_BASES if b not in by_basis]
    if missing:
        raise ValueError(f"missing tomography bases: {missing}")
    if any(rec.shots == 0 for rec in by_basis.values()):
        raise ValueError("tomography record with zero shots")

    def expectations(rec: MeasurementRecord) -> tuple[float, float, float]:
        """(first-qubit, second-qubit, correlator) expectations of one record."""
        pp, pm, mp, mm = (c / rec.shots for c in rec.counts)
        return pp + pm - mp - mm, pp - pm + mp - mm, pp - pm - mp + mm

    single1 = {a: [] for a in AXES}
    single2 = {a: [] for a in AXES}
    corr = {}
    for basis, rec in by_basis.items():
        e1, e2, e12 = expectations(rec)
        single1[basis[0]].append(e1)
        single2[basis[1]].append(e2)
        corr[basis] = e12

    eye = np.eye(2, dtype=complex)
    rho = 0.25 * np.kron(eye, eye)
    for a in AXES:
        rho += 0.25 * np.mean(single1[a]) * np.kron(PAULI[a], eye)
        rho += 0.25 * np.mean(single2[a]) * np.kron(eye, PAULI[a])
    for (a, b), e in corr.items():
        rho += 0.25 * e * np.kron(PAULI[a], PAULI[b])

    return DensityMatrix(matrix=_project_physical(rho), subsystem=subsystem)


def _project_physical(rho: np.ndarray) -> np.ndarray:
    """Project onto the nearest PSD unit-trace matrix in Frobenius norm.

    Hermitize, then replace the eigenvalue vector by its Euclidean
    projection onto the probability simplex: walk the spectrum from the
    bottom, zeroing negative eigenvalues and spreading their mass
    uniformly over the ones that remain.  This is the water-filling
    solution of the constrained least-squares problem and keeps the
    trace exactly 1 (up to the normalization of the input).
    """
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    lam, vec = np.linalg.eigh(rho)
    lam = lam[::-1]
    vec = vec[:, ::-1]
    out = np.zeros_like(lam)
    acc = 0.0
    for i in range(len(lam) - 1, -1, -1):
        shift = acc / (i + 1)
        if lam[i] + shift < 0.0:
            acc += lam[i]
        else:
            out[: i + 1] = lam[: i + 1] + shift
            break
    return (vec * out) @ vec.conj().T


# ---------------------------------------------------------------------------
# bootstrap error bars

#: Stream offset separating bootstrap resampling from measurement sampling.
_BOOTSTRAP_STREAM_BASE = 1000


def bootstrap(records, resamples: int, statistic: str, seed: int,
              target: np.ndarray | None = None) -> tuple[float, float]:
    """Monte-Carlo bootstrap of a tomography-derived statistic.

    Each resample redraws every record's counts from a multinomial with
    the record's empirical frequencies, reconstructs the density matrix,
    and evaluates the statistic ('concurrence', 'entropy', or 'fidelity'
    against ``target``).  Returns (sample mean, sample standard deviation).
    Resamples use independent RNG streams derived from ``seed``, so the
    result does not depend on evaluation order.
    """
    if resamples < 100:
        raise ValueError("need at least 100 resamples for a stable error bar")
    records = list(records)
    evaluate = _statistic_fn(statistic, target)
    freqs = [np.array(rec.counts) / rec.shots for rec in records]
    values = np.empty(resamples)
    for r in range(resamples):
        rng = _rng(seed, _BOOTSTRAP_STREAM_BASE + r)
        redrawn = [
            MeasurementRecord(basis=rec.basis, shots=rec.shots,
                              counts=tuple(rng.multinomial(rec.shots, f)), seed=seed)
            for rec, f in zip(records, freqs)
        ]
        values[r] = evaluate(tomography_reconstruct(redrawn))
    return float(values.mean()), float(values.std(ddof=1))


def _statistic_fn(statistic: str, target):
    if statistic == "concurrence":
        return concurrence
    if statistic == "entropy":
        return von_neumann_entropy
    if statistic == "fidelity":
        if target is None:
            raise ValueError("fidelity statistic needs a target state")
        return lambda rho: fidelity(rho, target)
    raise ValueError(f"unknown statistic {statistic!r}")
