"""JSON file formats for states, density matrices and filter specs."""

from __future__ import annotations

import json

import numpy as np

from .errors import StateFileError
from .invariants import FilterSpec
from .qubits import DensityMatrix, PureState, make_state


def _complex_pairs(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _pairs_from_complex(arr: np.ndarray):
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def load_state(path) -> PureState:
    """Read {"n_qubits", "amplitudes": [[re, im], ...], "normalized"}; the
    amplitude count must match the qubit count exactly."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"{path}: cannot read state file: {exc}")
    try:
        n = int(doc["n_qubits"])
        amps = _complex_pairs(doc["amplitudes"])
        normalized = bool(doc.get("normalized", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"{path}: malformed state file field: {exc}")
    if amps.shape != (2 ** n,):
        raise StateFileError(
            f"{path}: field 'amplitudes' has length {amps.shape[0]}, expected {2 ** n}")
    if normalized:
        return make_state(n, amps, normalize=True)
    return PureState(n, amps)


def save_state(path, state: PureState) -> None:
    doc = {
        "n_qubits": state.n_qubits,
        "amplitudes": _pairs_from_complex(state.amplitudes),
        "normalized": state.normalized,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_density_matrix(path) -> DensityMatrix:
    """Read {"n_qubits", "matrix": row-major [[ [re, im], ... ], ...]}."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"{path}: cannot read density-matrix file: {exc}")
    try:
        n = int(doc["n_qubits"])
        mat = _complex_pairs(doc["matrix"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"{path}: malformed density-matrix field: {exc}")
    if mat.shape != (2 ** n, 2 ** n):
        raise StateFileError(
            f"{path}: field 'matrix' has shape {mat.shape}, expected {(2 ** n, 2 ** n)}")
    return DensityMatrix(n, mat)


def save_density_matrix(path, rho: DensityMatrix) -> None:
    doc = {"n_qubits": rho.n_qubits, "matrix": _pairs_from_complex(rho.matrix)}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_filter_spec(path) -> FilterSpec:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"{path}: cannot read filter spec: {exc}")
    return FilterSpec.from_json_dict(doc)


def save_filter_spec(path, spec: FilterSpec) -> None:
    with open(path, "w") as fh:
        json.dump(spec.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
