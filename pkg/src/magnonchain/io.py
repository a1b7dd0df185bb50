"""Artifact I/O: plot-ready CSV / NDJSON files and run-config parsing.

Every output file starts with '#'-prefixed header lines recording the
package version, a hash of the generating configuration, and the seed, so
any artifact can be traced back to its run and reruns are byte-identical.
Floats are written with ``repr``, which round-trips IEEE doubles exactly;
CSV always uses '.' as the decimal separator regardless of locale.

Coupling matrices travel as N x N CSV with a mandatory '# unit = ...' tag
(rad/s or Hz) — an untagged file is rejected rather than guessed at.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import math
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .entanglement import DensityMatrix
from .ionchain import CouplingMatrix
from .magnon import MagnonSpectrum

#: Accepted '# unit = ...' tags for coupling files -> factor to rad/s.
UNIT_FACTORS = {"rad/s": 1.0, "Hz": 2.0 * math.pi}

#: Relative asymmetry above which an imported matrix is rejected.
MAX_IMPORT_ASYMMETRY = 0.05


class ConfigError(ValueError):
    """Invalid configuration or input file; maps to CLI exit code 2."""


# ---------------------------------------------------------------------------
# headers and hashing


def config_hash(obj) -> str:
    """Short stable hash of any JSON-serializable configuration object."""
    blob = json.dumps(_jsonify(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def header_lines(meta: dict | None = None) -> list[str]:
    """Standard artifact header: version, config hash, seed, then extras."""
    meta = dict(meta or {})
    lines = [f"# magnonchain = {__version__}"]
    for key in ("config_hash", "seed"):
        lines.append(f"# {key} = {meta.pop(key, 'none')}")
    for key in sorted(meta):
        lines.append(f"# {key} = {meta[key]}")
    return lines


def _fmt(x) -> str:
    return repr(float(x))


def _write_lines(path, lines) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_table(path, columns, rows, meta: dict | None = None) -> Path:
    """Generic CSV: header comments, a column-name row, then data rows.

    Integral cells are written as integers, strings verbatim, everything
    else with full float round-trip precision.
    """
    lines = header_lines(meta)
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, (int, np.integer)):
                cells.append(str(int(cell)))
            else:
                cells.append(_fmt(cell))
        lines.append(",".join(cells))
    return _write_lines(path, lines)


def write_ndjson(path, records, meta: dict | None = None) -> Path:
    """NDJSON: a header record followed by one JSON record per line."""
    lines = [json.dumps({"header": _jsonify({"magnonchain": __version__, **(meta or {})})},
                        sort_keys=True)]
    for rec in records:
        lines.append(json.dumps(_jsonify(rec), sort_keys=True))
    return _write_lines(path, lines)


# ---------------------------------------------------------------------------
# coupling matrices


def save_couplings(path, J: CouplingMatrix, meta: dict | None = None,
                   unit: str = "rad/s") -> Path:
    """N x N coupling CSV with provenance comments and a unit tag."""
    if unit not in UNIT_FACTORS:
        raise ConfigError(f"unknown unit {unit!r}; use one of {sorted(UNIT_FACTORS)}")
    meta = dict(meta or {})
    meta.setdefault("provenance", J.meta)
    lines = header_lines(meta)
    lines.append(f"# unit = {unit}")
    values = J.values / UNIT_FACTORS[unit]
    for row in values:
        lines.append(",".join(_fmt(x) for x in row))
    return _write_lines(path, lines)


def load_couplings(path) -> CouplingMatrix:
    """Read a coupling CSV back into a validated :class:`CouplingMatrix`.

    The unit tag is mandatory.  Slightly asymmetric input (measurement
    noise) is repaired by averaging J and J^T with the maximum relative
    asymmetry reported; beyond 5% the file is rejected.
    """
    path = Path(path)
    unit = None
    rows = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.lower().startswith("unit"):
                _, _, tag = body.partition("=")
                unit = tag.strip()
            continue
        try:
            rows.append([float(x) for x in line.split(",")])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: unparseable row: {raw!r}") from exc
    if unit is None:
        raise ConfigError(f"{path}: no '# unit = ...' tag; refusing to guess units")
    if unit not in UNIT_FACTORS:
        raise ConfigError(f"{path}: unknown unit {unit!r}; expected one of {sorted(UNIT_FACTORS)}")
    J = np.asarray(rows, dtype=float) * UNIT_FACTORS[unit]
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.size == 0:
        raise ConfigError(f"{path}: expected a square matrix, got shape {J.shape}")

    scale = np.abs(J).max()
    asym = np.abs(J - J.T).max() / scale if scale > 0 else 0.0
    if asym > MAX_IMPORT_ASYMMETRY:
        raise ConfigError(f"{path}: relative asymmetry {asym:.3g} exceeds "
                          f"{MAX_IMPORT_ASYMMETRY:.0%}; not a valid coupling matrix")
    if asym > 1e-9:
        warnings.warn(f"{path.name}: symmetrized (max relative asymmetry {asym:.3g})",
                      stacklevel=2)
    J = 0.5 * (J + J.T)
    diag = np.abs(np.diag(J)).max() / scale if scale > 0 else 0.0
    if diag > 1e-9:
        warnings.warn(f"{path.name}: dropped non-zero diagonal (max {diag:.3g} relative)",
                      stacklevel=2)
    np.fill_diagonal(J, 0.0)
    return CouplingMatrix(values=J, meta=f"imported from {path.name}; "
                                         f"max asymmetry {asym:.3g}")


# ---------------------------------------------------------------------------
# observable exports


def save_dispersion(path, spectrum: MagnonSpectrum, meta: dict | None = None) -> Path:
    """Dispersion CSV: (n, k_n [rad/site], omega_k [rad/s], node_count)."""
    rows = [(n + 1, spectrum.pseudo_momenta[n], spectrum.energies[n],
             int(spectrum.node_counts[n]))
            for n in range(spectrum.energies.size)]
    return write_table(path, ("n", "k_n", "omega_k", "node_count"), rows, meta)


def save_magnetisation(path, times, values, meta: dict | None = None) -> Path:
    """Long-format magnetisation CSV: (t_s, site, sz), site 1-based."""
    values = np.asarray(values, dtype=float)
    rows = ((t, s + 1, values[it, s])
            for it, t in enumerate(np.asarray(times, dtype=float))
            for s in range(values.shape[1]))
    return write_table(path, ("t_s", "site", "sz"), rows, meta)


def save_correlations(path, times, corr, meta: dict | None = None) -> Path:
    """Correlation CSV: (t_s, i, j, Cij) over pairs i < j, 1-based sites."""
    corr = np.asarray(corr, dtype=float)
    n = corr.shape[1]
    rows = ((t, i + 1, j + 1, corr[it, i, j])
            for it, t in enumerate(np.asarray(times, dtype=float))
            for i in range(n) for j in range(i + 1, n))
    return write_table(path, ("t_s", "i", "j", "Cij"), rows, meta)


def save_density_matrix(path, rho: DensityMatrix, meta: dict | None = None) -> Path:
    """Density-matrix CSV: (row, col, re, im) in row-major order.

    The header records the subsystem sites and the basis ordering
    (|dd>, |du>, |ud>, |uu> with the lower site index first).
    """
    meta = dict(meta or {})
    meta.setdefault("subsystem", ",".join(str(s) for s in rho.subsystem))
    meta.setdefault("basis", "|dd>,|du>,|ud>,|uu> (lower site first)")
    m = rho.matrix
    rows = ((i, j, m[i, j].real, m[i, j].imag)
            for i in range(m.shape[0]) for j in range(m.shape[1]))
    return write_table(path, ("row", "col", "re", "im"), rows, meta)


def save_cone(path, distances, cone_times, meta: dict | None = None) -> Path:
    """Light-cone overlay CSV: (d, t_cone_s) for heat-map plotting."""
    rows = zip(np.asarray(distances, dtype=float), np.asarray(cone_times, dtype=float))
    return write_table(path, ("d", "t_cone_s"), rows, meta)


def trajectory_records(times, values, correlations=None):
    """One NDJSON-able record per time point (sz per site, optional Cij)."""
    values = np.asarray(values, dtype=float)
    for it, t in enumerate(np.asarray(times, dtype=float)):
        rec = {"t_s": float(t), "sz": values[it].tolist()}
        if correlations is not None:
            rec["corr"] = np.asarray(correlations[it], dtype=float).tolist()
        yield rec


def fit_record(fit, provenance_hash: str) -> dict:
    """Flatten a fit dataclass into an NDJSON fit-report record."""
    from dataclasses import asdict, is_dataclass
    if not is_dataclass(fit):
        raise TypeError(f"expected a fit dataclass, got {type(fit).__name__}")
    return {"fit": type(fit).__name__, "input_hash": provenance_hash, **asdict(fit)}


# ---------------------------------------------------------------------------
# run configuration files


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(",", " ").split())


#: section -> {key: coercion}; unknown sections/keys are hard errors.
CONFIG_SCHEMA = {
    "trap": {
        "n_ions": int, "axial_freq": float, "transverse_freq_x": float,
        "transverse_freq_y": float, "detuning": float, "detuning_gap": float,
        "transverse_field": float, "ion_mass": float, "laser_wavelength": float,
    },
    "beam": {
        "peak_rabi": float, "waist_along_chain": float,
        "waist_transverse": float, "center_offset": float,
    },
    "couplings": {
        "source": str, "alpha": float, "nn_strength": float, "file": str,
    },
    "quench": {
        "kind": str, "flip": _int_list, "model": str,
    },
    "run": {
        "t_start": float, "t_end": float, "n_points": int,
        "seed": int, "shots": int, "resamples": int,
    },
    "output": {
        "directory": str, "format": str,
    },
}


def load_run_config(path) -> dict:
    """Parse an INI run configuration into typed nested dicts.

    Only the sections and keys of :data:`CONFIG_SCHEMA` are accepted;
    anything else is a :class:`ConfigError` naming the offending entry.
    Frequencies are plain Hz, lengths meters, times seconds — conversion
    to angular frequencies happens downstream.
    """
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    config: dict = {}
    for section in parser.sections():
        if section not in CONFIG_SCHEMA:
            raise ConfigError(f"{path}: unknown section [{section}] "
                              f"(expected {sorted(CONFIG_SCHEMA)})")
        schema = CONFIG_SCHEMA[section]
        config[section] = {}
        for key, raw in parser.items(section):
            if key not in schema:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}] "
                                  f"(expected {sorted(schema)})")
            try:
                config[section][key] = schema[key](raw)
            except ValueError as exc:
                raise ConfigError(f"{path}: [{section}] {key} = {raw!r}: {exc}") from exc
    return config
