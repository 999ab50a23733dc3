"""Dense complex linear algebra for small qubit registers.

States, Pauli strings, local (SL/SU) maps, expectations and the white-noise
mixer.  Everything is dense numpy; the register size is capped (default 6
qubits) because all computations in this package live at n <= 4.

Basis convention: the amplitude at index k encodes |b1 b2 ... bn> where b1
is the bit of highest weight, i.e. qubit 1 is the most significant bit and
the leftmost factor in every Kronecker product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    ConsistencyError,
    DegenerateInputError,
    DimensionError,
    ParameterError,
)

MAX_QUBITS = 6

ATOL_STRUCTURAL = 1e-12
ATOL_CONSISTENCY = 1e-10
ATOL_INVARIANCE = 1e-8

PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

PAULI_LABELS = "0XYZ"


def pauli_label(s: tuple[int, ...]) -> str:
    """Render a Pauli index tuple as a string like 'ZZ0'."""
    return "".join(PAULI_LABELS[i] for i in s)


def parse_pauli_label(label: str) -> tuple[int, ...]:
    """Inverse of pauli_label; accepts the 0/X/Y/Z alphabet (case-insensitive)."""
    try:
        return tuple(PAULI_LABELS.index(c) for c in label.upper())
    except ValueError:
        raise ParameterError(f"invalid Pauli label {label!r}; alphabet is 0,X,Y,Z")


def check_pauli_string(s, n_qubits: int | None = None) -> tuple[int, ...]:
    """Validate a Pauli index tuple, optionally against a register size."""
    s = tuple(int(i) for i in s)
    if any(i not in (0, 1, 2, 3) for i in s):
        raise ParameterError(f"Pauli indices must be in 0..3, got {s}")
    if n_qubits is not None and len(s) != n_qubits:
        raise DimensionError(f"Pauli string {s} has length {len(s)}, expected {n_qubits}")
    return s


@dataclass(frozen=True)
class PureState:
    """Complex amplitude vector over n qubits in the fixed basis order."""

    n_qubits: int
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise DimensionError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n_qubits,):
            raise DimensionError(
                f"amplitude vector has shape {amps.shape}, expected ({2 ** self.n_qubits},)")
        nrm = np.linalg.norm(amps)
        if not np.isfinite(nrm) or nrm == 0.0:
            raise DegenerateInputError("amplitude vector must be finite and nonzero")
        if self.normalized and abs(nrm ** 2 - 1.0) > 1e-12:
            raise ConsistencyError(f"state flagged normalized but sum |a|^2 = {nrm ** 2!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def projector(self) -> "DensityMatrix":
        """Density matrix |psi><psi| of a normalized state."""
        if not self.normalized:
            raise ParameterError("projector requires a normalized state")
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian unit-trace complex matrix over the fixed basis order."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise DimensionError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        m = np.asarray(self.matrix, dtype=complex)
        d = 2 ** self.n_qubits
        if m.shape != (d, d):
            raise DimensionError(f"matrix has shape {m.shape}, expected ({d}, {d})")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ConsistencyError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > 1e-12 or abs(np.trace(m).imag) > 1e-12:
            raise ConsistencyError(f"density matrix trace is {np.trace(m)!r}, expected 1")
        if np.min(np.linalg.eigvalsh(m)) < -1e-10:
            raise ConsistencyError("density matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits


class LocalKind(Enum):
    SL2C = "SL2C"
    SU2 = "SU2"


@dataclass(frozen=True)
class LocalInvertible:
    """A 2x2 complex matrix acting on one qubit, tagged SL(2,C) or SU(2)."""

    matrix: np.ndarray
    kind: LocalKind

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise DimensionError(f"local operator must be 2x2, got shape {m.shape}")
        if abs(np.linalg.det(m) - 1.0) > 1e-10:
            raise ConsistencyError(f"det = {np.linalg.det(m)!r}, expected 1 within 1e-10")
        if self.kind is LocalKind.SU2 and np.max(np.abs(m.conj().T @ m - np.eye(2))) > 1e-10:
            raise ConsistencyError("SU2 operator is not unitary within 1e-10")
        object.__setattr__(self, "matrix", m)


def make_state(n: int, amplitudes, normalize: bool = False) -> PureState:
    """Build a PureState from raw amplitudes, optionally rescaling to unit norm."""
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if amps.shape != (2 ** n,):
        raise DimensionError(f"expected {2 ** n} amplitudes for {n} qubits, got {amps.shape[0]}")
    nrm = np.linalg.norm(amps)
    if not np.isfinite(nrm) or nrm == 0.0:
        raise DegenerateInputError("amplitude vector must be finite and nonzero")
    if normalize:
        return PureState(n, amps / nrm, normalized=True)
    return PureState(n, amps, normalized=bool(abs(nrm ** 2 - 1.0) <= 1e-12))


def bell_phi_plus() -> PureState:
    return make_state(2, [1, 0, 0, 1], normalize=True)


def ghz_state(n: int = 3) -> PureState:
    amps = np.zeros(2 ** n)
    amps[0] = amps[-1] = 1.0
    return make_state(n, amps, normalize=True)


def w_state() -> PureState:
    return make_state(3, [0, 1, 1, 0, 1, 0, 0, 0], normalize=True)


def pauli_operator(s) -> np.ndarray:
    """Kronecker chain of single-qubit Paulis named by s, qubit 1 leftmost."""
    s = check_pauli_string(s)
    op = PAULIS[s[0]]
    for i in s[1:]:
        op = np.kron(op, PAULIS[i])
    return op


def expectation(state_or_rho, s) -> float:
    """<psi|P|psi> or tr(rho P) for the Pauli string s; the result must be real."""
    if isinstance(state_or_rho, PureState):
        s = check_pauli_string(s, state_or_rho.n_qubits)
        if not state_or_rho.normalized:
            raise ParameterError("expectation requires a normalized pure state")
        v = state_or_rho.amplitudes
        val = complex(v.conj() @ pauli_operator(s) @ v)
    elif isinstance(state_or_rho, DensityMatrix):
        s = check_pauli_string(s, state_or_rho.n_qubits)
        val = complex(np.trace(state_or_rho.matrix @ pauli_operator(s)))
    else:
        raise ParameterError(f"expected PureState or DensityMatrix, got {type(state_or_rho)}")
    if abs(val.imag) > 1e-10:
        raise ConsistencyError(f"expectation value has imaginary part {val.imag!r}")
    return val.real


def apply_local(state: PureState, ops) -> PureState:
    """Apply (A1 x ... x An) to the state. Not re-normalized: the polynomial
    invariants are evaluated on the raw transformed vector."""
    ops = list(ops)
    if len(ops) != state.n_qubits:
        raise DimensionError(f"need {state.n_qubits} local operators, got {len(ops)}")
    full = ops[0].matrix
    for op in ops[1:]:
        full = np.kron(full, op.matrix)
    out = full @ state.amplitudes
    return PureState(state.n_qubits, out,
                     normalized=bool(abs(np.linalg.norm(out) ** 2 - 1.0) <= 1e-12))


def _haar_su2(rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    # rotate the determinant phase away so det = 1
    return q * np.linalg.det(q) ** -0.5


def sample_local_group(kind: LocalKind, seed: int, s_max: float = 1.0) -> LocalInvertible:
    """Random local map: Haar SU(2), or SL(2,C) as SU(2) * diag(e^s, e^-s) * SU(2)
    with the squeezing exponent s uniform in [-s_max, s_max]. Deterministic in seed."""
    rng = np.random.default_rng(seed)
    if kind is LocalKind.SU2:
        return LocalInvertible(_haar_su2(rng), LocalKind.SU2)
    if kind is LocalKind.SL2C:
        u1, u2 = _haar_su2(rng), _haar_su2(rng)
        s = rng.uniform(-s_max, s_max)
        m = u1 @ np.diag([np.exp(s), np.exp(-s)]).astype(complex) @ u2
        return LocalInvertible(m, LocalKind.SL2C)
    raise ParameterError(f"unknown local group kind {kind!r}")


def random_state(n: int, seed: int) -> PureState:
    """Haar-random normalized pure state, deterministic in seed."""
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return make_state(n, amps, normalize=True)


def white_noise_mix(state: PureState, eps: float) -> DensityMatrix:
    """(1-eps)|psi><psi| + eps/d * identity."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps}")
    if not state.normalized:
        raise ParameterError("white_noise_mix requires a normalized state")
    d = state.dim
    m = (1.0 - eps) * np.outer(state.amplitudes, state.amplitudes.conj())
    m += (eps / d) * np.eye(d)
    return DensityMatrix(state.n_qubits, m)
