"""Correlator tables: exact evaluation, finite-shot sampling, and invariant
estimates with propagated statistical errors.

Each Pauli string is treated as one measurement setting with eigenvalues +-1
(identity positions contribute a factor 1, they are not measured).  Settings
are sampled on independent shot budgets, so entries are statistically
independent and first-order (delta-method) error propagation applies.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DimensionError, IncompleteTableError, ParameterError
from .qubits import (
    DensityMatrix,
    PureState,
    check_pauli_string,
    expectation,
    parse_pauli_label,
    pauli_label,
    pauli_operator,
)
from . import lift


def all_pauli_strings(n: int) -> list[tuple[int, ...]]:
    return [s for s in product(range(4), repeat=n)]


@dataclass(frozen=True)
class CorrelatorEntry:
    value: float
    stderr: float | None = None
    shots: int | None = None


@dataclass(frozen=True)
class CorrelatorTable:
    """Map from Pauli strings to expectation values, with optional statistics."""

    n_qubits: int
    entries: dict
    source: str  # "exact_pure" | "exact_mixed" | "sampled"

    def __post_init__(self):
        if self.source not in ("exact_pure", "exact_mixed", "sampled"):
            raise ParameterError(f"unknown table source {self.source!r}")
        entries = {}
        for s, e in self.entries.items():
            s = check_pauli_string(s, self.n_qubits)
            if not isinstance(e, CorrelatorEntry):
                e = CorrelatorEntry(float(e))
            entries[s] = e
        identity = (0,) * self.n_qubits
        if self.source.startswith("exact"):
            for s, e in entries.items():
                if abs(e.value) > 1.0 + 1e-12:
                    raise ParameterError(f"exact correlator {s} has |value| > 1: {e.value!r}")
            if identity in entries and entries[identity].value != 1.0:
                raise ParameterError("exact table must carry value 1 for the identity string")
        object.__setattr__(self, "entries", entries)

    def missing_strings(self) -> list[tuple[int, ...]]:
        return [s for s in all_pauli_strings(self.n_qubits) if s not in self.entries]

    def to_array(self) -> np.ndarray:
        arr = np.full((4,) * self.n_qubits, np.nan)
        for s, e in self.entries.items():
            arr[s] = e.value
        return arr

    def stderr_array(self) -> np.ndarray:
        """Per-entry standard errors; missing errors count as zero."""
        arr = np.zeros((4,) * self.n_qubits)
        for s, e in self.entries.items():
            if e.stderr is not None:
                arr[s] = e.stderr
        return arr


@dataclass(frozen=True)
class InvariantEstimate:
    name: str  # "c2" | "tau3_sq"
    value: float
    stderr: float | None = None
    shots_per_setting: int | None = None

    def __post_init__(self):
        if self.stderr is not None and self.stderr < 0:
            raise ParameterError("stderr must be non-negative")


def exact_correlators(state_or_rho, strings=None) -> CorrelatorTable:
    """Evaluate the requested Pauli strings exactly (all strings by default).

    The all-identity string is pinned to exactly 1 (it equals the norm or
    trace, both validated to be 1; direct evaluation only adds rounding)."""
    n = state_or_rho.n_qubits
    identity = (0,) * n
    if strings is None:
        strings = all_pauli_strings(n)
    entries = {}
    for s in strings:
        s = tuple(s)
        value = 1.0 if s == identity else expectation(state_or_rho, s)
        entries[s] = CorrelatorEntry(min(1.0, max(-1.0, value)))
    source = "exact_pure" if isinstance(state_or_rho, PureState) else "exact_mixed"
    return CorrelatorTable(n, entries, source)


def sample_correlator(rho: DensityMatrix, s, shots: int, seed: int) -> tuple[float, float]:
    """Simulate projective measurement of the +-1 observable named by s.

    Outcome probabilities come from rho; shots i.i.d. outcomes are drawn and
    the sample mean and sample standard error returned.  The RNG stream is
    derived from (seed, string), so a table sampled string by string does not
    depend on evaluation order.
    """
    s = check_pauli_string(s, rho.n_qubits)
    if shots < 1:
        raise ParameterError(f"shots must be >= 1, got {shots}")
    if all(i == 0 for i in s):
        return 1.0, 0.0
    a = expectation(rho, s)
    p_plus = min(1.0, max(0.0, 0.5 * (1.0 + a)))
    rng = np.random.default_rng([seed, *s])
    n_plus = int(rng.binomial(shots, p_plus))
    mean = (2 * n_plus - shots) / shots
    if shots > 1:
        sample_var = shots * max(0.0, 1.0 - mean ** 2) / (shots - 1)
    else:
        sample_var = 0.0
    return float(mean), float(np.sqrt(sample_var / shots))


def sample_correlator_table(rho: DensityMatrix, shots: int, seed: int,
                            strings=None) -> CorrelatorTable:
    """Sample every requested string on its own shot budget."""
    n = rho.n_qubits
    if strings is None:
        strings = all_pauli_strings(n)
    entries = {}
    for s in strings:
        s = tuple(s)
        value, stderr = sample_correlator(rho, s, shots, seed)
        entries[s] = CorrelatorEntry(value, stderr, shots)
    return CorrelatorTable(n, entries, "sampled")


_INVARIANT_QUBITS = {"c2": 2, "tau3_sq": 3}


def invariant_from_table(table: CorrelatorTable, which: str,
                         form: str = "mixed_form") -> InvariantEstimate:
    """Contract a complete correlator table into an invariant estimate.

    For sampled tables the standard error is propagated to first order
    through the contraction, treating entries as independent.
    """
    if which not in _INVARIANT_QUBITS:
        raise ParameterError(f"which must be one of {sorted(_INVARIANT_QUBITS)}, got {which!r}")
    n = _INVARIANT_QUBITS[which]
    if table.n_qubits != n:
        raise DimensionError(f"{which} needs a {n}-qubit table, got {table.n_qubits}")
    missing = table.missing_strings()
    if missing:
        raise IncompleteTableError([pauli_label(s) for s in missing])
    arr = table.to_array()
    if which == "c2":
        value = lift.concurrence_sq_linear(arr)
        grad = lift.concurrence_sq_gradient(arr)
    else:
        value = lift.tau3_sq_linear(arr, form=form)
        grad = lift.tau3_sq_gradient(arr, form=form)
        if table.source.startswith("exact"):
            lift.tau3_sq_linear_checked(arr)
    stderr = None
    if table.source == "sampled":
        sig = table.stderr_array()
        stderr = float(np.sqrt(np.sum((grad * sig) ** 2)))
    shots = {e.shots for e in table.entries.values() if e.shots is not None}
    shots_per_setting = shots.pop() if len(shots) == 1 else None
    return InvariantEstimate(which, float(value), stderr, shots_per_setting)


def write_table_csv(path, table: CorrelatorTable) -> None:
    """CSV with columns string,value,stderr,shots; floats are written with
    repr so the round-trip is bit-exact."""
    lines = [f"# source={table.source}", "string,value,stderr,shots"]
    for s in sorted(table.entries):
        e = table.entries[s]
        stderr = "" if e.stderr is None else repr(e.stderr)
        shots = "" if e.shots is None else str(e.shots)
        lines.append(f"{pauli_label(s)},{e.value!r},{stderr},{shots}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_table_csv(path) -> CorrelatorTable:
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    source = "sampled"
    if raw and raw[0].startswith("# source="):
        source = raw.pop(0).split("=", 1)[1]
    if not raw or raw[0] != "string,value,stderr,shots":
        raise ParameterError(f"{path}: expected header 'string,value,stderr,shots'")
    entries = {}
    n = None
    for ln in raw[1:]:
        label, value, stderr, shots = ln.split(",")
        s = parse_pauli_label(label)
        n = len(s) if n is None else n
        entries[s] = CorrelatorEntry(
            float(value),
            None if stderr == "" else float(stderr),
            None if shots == "" else int(shots),
        )
    if n is None:
        raise ParameterError(f"{path}: no correlator rows")
    return CorrelatorTable(n, entries, source)


def white_noise_table(pure_table: CorrelatorTable, eps: float) -> CorrelatorTable:
    """Exact table of the white-noise mixture built from a pure table: every
    non-identity entry scales by (1 - eps), the identity entry stays 1."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps}")
    identity = (0,) * pure_table.n_qubits
    entries = {}
    for s, e in pure_table.entries.items():
        v = 1.0 if s == identity else (1.0 - eps) * e.value
        entries[s] = CorrelatorEntry(v)
    return CorrelatorTable(pure_table.n_qubits, entries, "exact_mixed")
